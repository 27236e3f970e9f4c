"""Ambient monoids for rewriting: free, finite-table, naturals, powerset,
and free products of a base monoid with fresh letters.

Every backend exposes the same surface: identity/op/size, element
enumeration, and factorization enumeration (all context pairs (x, y) with
x*s*y = a).  Factorization, not one-step rewriting, is the primitive; the
engine derives rewrite successors from it generically.

Elements are plain hashable Python values:

    free          tuple of letter names
    naturals      int
    powerset      frozenset of base names
    finite-table  element name (str)
    free product  tuple of syllables ("m", base_elem) / ("v", letter, power)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from mrw.tables import FiniteMonoid


class UsageError(ValueError):
    """Bad input to a backend operation (cross-backend element, bad literal, ...)."""


@dataclass
class Factorizations:
    """Context pairs for an occurrence query, plus an honesty flag.

    complete=False means the enumeration was budget-limited or the backend
    cannot claim exhaustiveness; downstream verdicts must not silently treat
    the list as total.
    """

    pairs: list
    complete: bool = True


DEFAULT_PAIR_LIMIT = 4096


class Backend:
    kind = "abstract"
    finite = False          # enumeration is exhaustive regardless of bound
    additive_size = False   # size(x*y) == size(x) + size(y) exactly

    def identity(self):
        raise NotImplementedError

    def op(self, x, y):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def size(self, x) -> int:
        raise NotImplementedError

    def elements(self, size_bound):
        raise NotImplementedError

    def factorizations(self, a, s, limit=DEFAULT_PAIR_LIMIT) -> Factorizations:
        raise NotImplementedError

    def canon_key(self, x):
        raise NotImplementedError

    def format_element(self, x) -> str:
        raise NotImplementedError

    def parse_element(self, text: str):
        raise NotImplementedError

    def check_element(self, x):
        if not self.contains(x):
            raise UsageError(f"{x!r} is not an element of {self!r}")

    def product(self, xs):
        acc = self.identity()
        for x in xs:
            acc = self.op(acc, x)
        return acc


class FreeBackend(Backend):
    """Free monoid on a finite alphabet; words are tuples of letter names.

    Letters are encoded to single code-space characters so the word kernel
    (mrw._words) can run on plain strings.
    """

    kind = "free"
    additive_size = True

    def __init__(self, letters):
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise UsageError(f"duplicate letters: {letters}")
        if any(not l or "_" in l or "." in l or " " in l for l in letters):
            raise UsageError("letters must be nonempty and free of '_', '.' and spaces")
        self.letters = letters
        if all(len(l) == 1 for l in letters):
            self._code = {l: l for l in letters}
        else:
            self._code = {l: chr(0xE000 + i) for i, l in enumerate(letters)}
        self._decode = {c: l for l, c in self._code.items()}

    def __repr__(self):
        return f"FreeBackend({','.join(self.letters)})"

    def __eq__(self, other):
        return isinstance(other, FreeBackend) and self.letters == other.letters

    def __hash__(self):
        return hash(("free", self.letters))

    def identity(self):
        return ()

    def op(self, x, y):
        return x + y

    def contains(self, x):
        return isinstance(x, tuple) and all(l in self._code for l in x)

    def size(self, x):
        return len(x)

    def encode(self, x) -> str:
        return "".join(self._code[l] for l in x)

    def decode(self, s) -> tuple:
        return tuple(self._decode[c] for c in s)

    def elements(self, size_bound):
        frontier = [()]
        yield ()
        for _ in range(size_bound):
            nxt = []
            for w in frontier:
                for l in self.letters:
                    wl = w + (l,)
                    yield wl
                    nxt.append(wl)
            frontier = nxt

    def factorizations(self, a, s, limit=DEFAULT_PAIR_LIMIT):
        n, m = len(a), len(s)
        pairs = [
            (a[:i], a[i + m:])
            for i in range(n - m + 1)
            if a[i:i + m] == s
        ]
        return Factorizations(pairs, complete=True)

    def canon_key(self, x):
        idx = {l: i for i, l in enumerate(self.letters)}
        return (len(x), tuple(idx[l] for l in x))

    def format_element(self, x):
        return "".join(x) if x else "_"

    def parse_element(self, text):
        if text == "_":
            return ()
        # greedy longest-match decoding of juxtaposed letters
        by_len = sorted(self.letters, key=len, reverse=True)
        word = []
        i = 0
        while i < len(text):
            for l in by_len:
                if text.startswith(l, i):
                    word.append(l)
                    i += len(l)
                    break
            else:
                raise UsageError(f"cannot read {text!r} as a word over {self.letters}")
        return tuple(word)


class NaturalsBackend(Backend):
    """(N, +, 0); the size of n is n itself."""

    kind = "naturals"
    additive_size = True

    def __repr__(self):
        return "NaturalsBackend()"

    def __eq__(self, other):
        return isinstance(other, NaturalsBackend)

    def __hash__(self):
        return hash("naturals")

    def identity(self):
        return 0

    def op(self, x, y):
        return x + y

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x >= 0

    def size(self, x):
        return x

    def elements(self, size_bound):
        return iter(range(size_bound + 1))

    def factorizations(self, a, s, limit=DEFAULT_PAIR_LIMIT):
        if s > a:
            return Factorizations([], complete=True)
        pairs = [(k, a - s - k) for k in range(a - s + 1)]
        if len(pairs) > limit:
            return Factorizations(pairs[:limit], complete=False)
        return Factorizations(pairs, complete=True)

    def canon_key(self, x):
        return x

    def format_element(self, x):
        return str(x)

    def parse_element(self, text):
        if not text.isdigit():
            raise UsageError(f"cannot read {text!r} as a natural number")
        return int(text)


class PowersetBackend(Backend):
    """Subsets of a finite base set under union; identity is the empty set.

    Factorizations are one-sided: union is commutative and idempotent, so
    every two-sided context (x, y) yields the same successor as (x | y, {});
    pairs are reported as (x, identity) to keep the contract op(l, op(s, r)) = a.
    """

    kind = "powerset"
    finite = True

    def __init__(self, base):
        base = tuple(sorted(set(base)))
        if not all(b and "," not in b and "{" not in b and "}" not in b for b in base):
            raise UsageError(f"bad base names: {base}")
        self.base = base

    def __repr__(self):
        return f"PowersetBackend({{{','.join(self.base)}}})"

    def __eq__(self, other):
        return isinstance(other, PowersetBackend) and self.base == other.base

    def __hash__(self):
        return hash(("powerset", self.base))

    def identity(self):
        return frozenset()

    def op(self, x, y):
        return x | y

    def contains(self, x):
        return isinstance(x, frozenset) and x <= set(self.base)

    def size(self, x):
        return len(x)

    def elements(self, size_bound=None):
        for k in range(len(self.base) + 1):
            for combo in combinations(self.base, k):
                yield frozenset(combo)

    def factorizations(self, a, s, limit=DEFAULT_PAIR_LIMIT):
        if not s <= a:
            return Factorizations([], complete=True)
        rest = a - s
        extras = sorted(s)
        pairs = []
        for k in range(len(extras) + 1):
            for combo in combinations(extras, k):
                pairs.append((rest | frozenset(combo), frozenset()))
        return Factorizations(pairs, complete=True)

    def canon_key(self, x):
        return (len(x), tuple(sorted(x)))

    def format_element(self, x):
        return "{" + ",".join(sorted(x)) + "}"

    def parse_element(self, text):
        text = text.strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise UsageError(f"cannot read {text!r} as a subset literal")
        inner = text[1:-1].strip()
        items = [t.strip() for t in inner.split(",")] if inner else []
        for it in items:
            if it not in self.base:
                raise UsageError(f"{it!r} is not in the base set {self.base}")
        return frozenset(items)


class TableBackend(Backend):
    """A finite monoid given by its multiplication table."""

    kind = "table"
    finite = True

    def __init__(self, monoid: FiniteMonoid):
        self.monoid = monoid

    def __repr__(self):
        return f"TableBackend({self.monoid!r})"

    def __eq__(self, other):
        return isinstance(other, TableBackend) and self.monoid == other.monoid

    def __hash__(self):
        return hash(("table", self.monoid))

    def identity(self):
        return self.monoid.identity

    def op(self, x, y):
        return self.monoid.op(x, y)

    def contains(self, x):
        return x in self.monoid._index

    def size(self, x):
        return 0 if x == self.monoid.identity else 1

    def elements(self, size_bound=None):
        return iter(self.monoid.names)

    def factorizations(self, a, s, limit=DEFAULT_PAIR_LIMIT):
        pairs = [
            (x, y)
            for x in self.monoid.names
            for y in self.monoid.names
            if self.op(x, self.op(s, y)) == a
        ]
        return Factorizations(pairs, complete=True)

    def canon_key(self, x):
        return self.monoid.index(x)

    def format_element(self, x):
        return x

    def parse_element(self, text):
        if text not in self.monoid._index:
            raise UsageError(f"{text!r} is not a declared element")
        return text

    def has_collapsing_products(self):
        """True when u*m*v = 1 is solvable with m != 1.

        Such solutions make free-product occurrence matching incomplete
        (an occurrence can hide inside a collapsed base block).
        """
        e = self.identity()
        names = self.monoid.names
        return any(
            self.op(u, self.op(m, v)) == e
            for m in names
            if m != e
            for u in names
            for v in names
        )


def _syl_m(x):
    return ("m", x)


def _syl_v(letter, n):
    return ("v", letter, n)


class FreeProductBackend(Backend):
    """Free product M * F_V of a base backend with a free monoid on fresh
    letters.  Elements are reduced alternating syllable sequences: base
    syllables carry a non-identity base element, letter syllables carry a
    positive power, and adjacent syllables never merge further.
    """

    kind = "free-product"

    def __init__(self, base: Backend, fresh_letters):
        fresh_letters = tuple(fresh_letters)
        if len(set(fresh_letters)) != len(fresh_letters):
            raise UsageError(f"duplicate fresh letters: {fresh_letters}")
        for l in fresh_letters:
            if not l or "." in l or " " in l or l == "_":
                raise UsageError(f"bad letter {l!r}")
            try:
                base.parse_element(l)
            except UsageError:
                pass
            else:
                raise UsageError(f"letter {l!r} collides with a base element literal")
        self.base = base
        self.fresh_letters = fresh_letters

    def __repr__(self):
        return f"FreeProductBackend({self.base!r} * F_{{{','.join(self.fresh_letters)}}})"

    def __eq__(self, other):
        return (
            isinstance(other, FreeProductBackend)
            and self.base == other.base
            and self.fresh_letters == other.fresh_letters
        )

    def __hash__(self):
        return hash(("free-product", self.base, self.fresh_letters))

    def identity(self):
        return ()

    def normalize(self, syllables):
        out = []
        for syl in syllables:
            if syl[0] == "m":
                if syl[1] == self.base.identity():
                    continue
                if out and out[-1][0] == "m":
                    merged = self.base.op(out[-1][1], syl[1])
                    out.pop()
                    if merged != self.base.identity():
                        out.append(_syl_m(merged))
                else:
                    out.append(syl)
            else:
                _, letter, n = syl
                if n == 0:
                    continue
                if out and out[-1][0] == "v" and out[-1][1] == letter:
                    out[-1] = _syl_v(letter, out[-1][2] + n)
                else:
                    out.append(syl)
            # a base merge that dropped to the identity can expose two
            # same-letter powers; re-merge until stable
            while (
                len(out) >= 2
                and out[-1][0] == "v"
                and out[-2][0] == "v"
                and out[-1][1] == out[-2][1]
            ):
                top = out.pop()
                out[-1] = _syl_v(top[1], out[-1][2] + top[2])
        return tuple(out)

    def op(self, x, y):
        return self.normalize(list(x) + list(y))

    def embed(self, base_elem):
        self.base.check_element(base_elem)
        return self.normalize([_syl_m(base_elem)])

    def letter(self, l, n=1):
        if l not in self.fresh_letters:
            raise UsageError(f"{l!r} is not an adjoined letter")
        return (_syl_v(l, n),) if n else ()

    def contains(self, x):
        if not isinstance(x, tuple):
            return False
        for i, syl in enumerate(x):
            if syl[0] == "m":
                if not self.base.contains(syl[1]) or syl[1] == self.base.identity():
                    return False
                if i and x[i - 1][0] == "m":
                    return False
            elif syl[0] == "v":
                if syl[1] not in self.fresh_letters or syl[2] < 1:
                    return False
                if i and x[i - 1][0] == "v" and x[i - 1][1] == syl[1]:
                    return False
            else:
                return False
        return True

    def size(self, x):
        total = 0
        for syl in x:
            if syl[0] == "m":
                total += max(self.base.size(syl[1]), 1)
            else:
                total += syl[2]
        return total

    def elements(self, size_bound):
        base_by_size = {}
        for b in self.base.elements(size_bound):
            if b == self.base.identity():
                continue
            sz = max(self.base.size(b), 1)
            if sz <= size_bound:
                base_by_size.setdefault(sz, []).append(b)

        def extend(seq, budget):
            yield tuple(seq)
            last = seq[-1] if seq else None
            # base syllable next
            if last is None or last[0] == "v":
                for sz in sorted(base_by_size):
                    if sz > budget:
                        break
                    for b in base_by_size[sz]:
                        yield from extend(seq + [_syl_m(b)], budget - sz)
            # letter syllable next
            for l in self.fresh_letters:
                if last is not None and last[0] == "v" and last[1] == l:
                    continue
                for n in range(1, budget + 1):
                    yield from extend(seq + [_syl_v(l, n)], budget - n)

        seen = set()
        for e in extend([], size_bound):
            if e not in seen:
                seen.add(e)
                yield e

    def _complete_matching(self):
        # Occurrence matching is syllable-aligned; it misses occurrences that
        # hide inside collapsed base blocks (x*s*y with base pieces of x, s, y
        # multiplying to the identity).  Those exist exactly when the base has
        # collapsing products.
        if isinstance(self.base, TableBackend):
            return not self.base.has_collapsing_products()
        return True  # free/naturals/powerset: u*m*v = 1 forces u = m = v = 1

    def factorizations(self, a, s, limit=DEFAULT_PAIR_LIMIT):
        pairs = []
        seen = set()
        state = {"complete": self._complete_matching()}

        def emit(x_syls, y_syls):
            x = self.normalize(x_syls)
            y = self.normalize(y_syls)
            if (x, y) not in seen:
                seen.add((x, y))
                pairs.append((x, y))

        def sub_fact(elem, around):
            sub = self.base.factorizations(elem, around, limit)
            if not sub.complete:
                state["complete"] = False
            return sub.pairs

        n = len(a)
        if len(s) == 0:
            # splits of a: at syllable boundaries and inside syllables
            for i in range(n + 1):
                emit(list(a[:i]), list(a[i:]))
            for i, syl in enumerate(a):
                pre, post = list(a[:i]), list(a[i + 1:])
                if syl[0] == "v":
                    for k in range(1, syl[2]):
                        emit(pre + [_syl_v(syl[1], k)], [_syl_v(syl[1], syl[2] - k)] + post)
                else:
                    for (p, q) in sub_fact(syl[1], self.base.identity()):
                        emit(pre + [_syl_m(p)], [_syl_m(q)] + post)
                if len(pairs) > limit:
                    return Factorizations(pairs[:limit], complete=False)
            return Factorizations(pairs, complete=state["complete"])

        p = len(s)
        if p == 1:
            syl_s = s[0]
            for i, syl in enumerate(a):
                pre, post = list(a[:i]), list(a[i + 1:])
                if syl_s[0] == "v" and syl[0] == "v" and syl[1] == syl_s[1]:
                    if syl[2] >= syl_s[2]:
                        for k in range(syl[2] - syl_s[2] + 1):
                            emit(
                                pre + [_syl_v(syl[1], k)],
                                [_syl_v(syl[1], syl[2] - syl_s[2] - k)] + post,
                            )
                elif syl_s[0] == "m" and syl[0] == "m":
                    for (x0, y0) in sub_fact(syl[1], syl_s[1]):
                        emit(pre + [_syl_m(x0)], [_syl_m(y0)] + post)
                if len(pairs) > limit:
                    return Factorizations(pairs[:limit], complete=False)
            return Factorizations(pairs, complete=state["complete"])

        # s spans p >= 2 syllables: interior syllables match exactly; the two
        # boundary syllables may take only part of the aligned syllable of a.
        first, last = s[0], s[-1]
        interior = s[1:-1]
        for i in range(n - p + 1):
            j = i + p - 1
            if any(a[i + 1 + k] != interior[k] for k in range(len(interior))):
                continue
            lefts = self._left_parts(a[i], first, limit, state)
            if lefts is None:
                continue
            rights = self._right_parts(a[j], last, limit, state)
            if rights is None:
                continue
            for lx in lefts:
                for ry in rights:
                    emit(list(a[:i]) + lx, ry + list(a[j + 1:]))
                    if len(pairs) > limit:
                        return Factorizations(pairs[:limit], complete=False)
        return Factorizations(pairs, complete=state["complete"])

    def _left_parts(self, a_syl, s_syl, limit, state):
        # ways to write a_syl = u * s_syl with u going to the left context
        if a_syl[0] != s_syl[0]:
            return None
        if a_syl[0] == "v":
            if a_syl[1] != s_syl[1] or a_syl[2] < s_syl[2]:
                return None
            k = a_syl[2] - s_syl[2]
            return [[_syl_v(a_syl[1], k)] if k else []]
        sub = self.base.factorizations(a_syl[1], s_syl[1], limit)
        if not sub.complete:
            state["complete"] = False
        outs = [[_syl_m(u)] if u != self.base.identity() else []
                for (u, v) in sub.pairs if v == self.base.identity()]
        return outs or None

    def _right_parts(self, a_syl, s_syl, limit, state):
        if a_syl[0] != s_syl[0]:
            return None
        if a_syl[0] == "v":
            if a_syl[1] != s_syl[1] or a_syl[2] < s_syl[2]:
                return None
            k = a_syl[2] - s_syl[2]
            return [[_syl_v(a_syl[1], k)] if k else []]
        sub = self.base.factorizations(a_syl[1], s_syl[1], limit)
        if not sub.complete:
            state["complete"] = False
        outs = [[_syl_m(v)] if v != self.base.identity() else []
                for (u, v) in sub.pairs if u == self.base.identity()]
        return outs or None

    def canon_key(self, x):
        key = []
        for syl in x:
            if syl[0] == "m":
                key.append((0, 0, self.base.canon_key(syl[1])))
            else:
                key.append((1, self.fresh_letters.index(syl[1]), syl[2]))
        return (self.size(x), tuple(key))

    def format_element(self, x):
        if not x:
            return "_"
        parts = []
        for syl in x:
            if syl[0] == "m":
                parts.append(self.base.format_element(syl[1]))
            else:
                parts.append(syl[1] if syl[2] == 1 else f"{syl[1]}^{syl[2]}")
        return ".".join(parts)

    def parse_element(self, text):
        if text == "_":
            return ()
        syls = []
        for tok in text.split("."):
            tok = tok.strip()
            letter, _, power = tok.partition("^")
            if letter in self.fresh_letters:
                n = int(power) if power else 1
                if n < 1:
                    raise UsageError(f"letter power must be positive in {tok!r}")
                syls.append(_syl_v(letter, n))
            else:
                syls.append(_syl_m(self.base.parse_element(tok)))
        out = self.normalize(syls)
        return out


def free_product_adjoin(backend: Backend, fresh_letters):
    """M * F_V.  Adjoining letters to a free monoid yields the larger free
    monoid; adjoining to an existing free product extends its letter set."""
    fresh_letters = tuple(fresh_letters)
    if isinstance(backend, FreeBackend):
        for l in fresh_letters:
            if l in backend.letters:
                raise UsageError(f"letter {l!r} already present")
        return FreeBackend(backend.letters + fresh_letters)
    if isinstance(backend, FreeProductBackend):
        for l in fresh_letters:
            if l in backend.fresh_letters:
                raise UsageError(f"letter {l!r} already present")
        return FreeProductBackend(backend.base, backend.fresh_letters + fresh_letters)
    return FreeProductBackend(backend, fresh_letters)

