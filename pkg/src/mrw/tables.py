"""Finite monoids as explicit multiplication tables with named elements."""

from __future__ import annotations

from itertools import permutations, product


class TableError(ValueError):
    pass


class FiniteMonoid:
    """Named elements, an identity, and a full multiplication table.

    Closure, identity laws, and associativity are checked exhaustively at
    construction; a violation names the offending entry or triple.
    """

    def __init__(self, names, identity, table):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise TableError(f"duplicate element names: {names}")
        if identity not in names:
            raise TableError(f"identity {identity!r} is not a declared element")
        self.names = names
        self.identity = identity
        self.table = dict(table)
        self._index = {n: i for i, n in enumerate(names)}
        for a in names:
            for b in names:
                c = self.table.get((a, b))
                if c is None:
                    raise TableError(f"missing table entry {a!r}*{b!r}")
                if c not in self._index:
                    raise TableError(f"table entry {a!r}*{b!r}={c!r} names an undeclared element")
        for a in names:
            if self.table[(identity, a)] != a or self.table[(a, identity)] != a:
                raise TableError(f"identity law fails at {a!r}")
        for a, b, c in product(names, repeat=3):
            left = self.table[(self.table[(a, b)], c)]
            right = self.table[(a, self.table[(b, c)])]
            if left != right:
                raise TableError(
                    f"associativity fails at triple ({a!r},{b!r},{c!r}): "
                    f"({a}{b}){c}={left!r} but {a}({b}{c})={right!r}"
                )

    @classmethod
    def from_op(cls, names, identity, op):
        table = {(a, b): op(a, b) for a in names for b in names}
        return cls(names, identity, table)

    def op(self, a, b):
        return self.table[(a, b)]

    def index(self, name):
        return self._index[name]

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, FiniteMonoid):
            return NotImplemented
        return (
            set(self.names) == set(other.names)
            and self.identity == other.identity
            and all(self.table[k] == other.table[k] for k in self.table)
        )

    def __hash__(self):
        return hash((frozenset(self.names), self.identity))

    def __repr__(self):
        return f"FiniteMonoid({len(self.names)} elements, identity={self.identity!r})"

    def non_identity(self):
        return tuple(n for n in self.names if n != self.identity)

    def rename(self, mapping):
        """New monoid with elements renamed through a bijection."""
        if set(mapping) != set(self.names) or len(set(mapping.values())) != len(self.names):
            raise TableError("renaming must be a bijection on the element set")
        table = {
            (mapping[a], mapping[b]): mapping[c] for (a, b), c in self.table.items()
        }
        return FiniteMonoid(
            tuple(mapping[n] for n in self.names), mapping[self.identity], table
        )

    def _profile(self, a):
        # invariant fingerprint used to prune the bijection search
        diag = a
        seen = {a}
        orbit = 0
        while True:
            diag = self.table[(diag, a)]
            orbit += 1
            if diag in seen or orbit > len(self.names):
                break
            seen.add(diag)
        is_idem = self.table[(a, a)] == a
        row = sorted(self.names.index(self.table[(a, b)]) for b in self.names)
        col = sorted(self.names.index(self.table[(b, a)]) for b in self.names)
        return (a == self.identity, is_idem, orbit, len(set(row)), len(set(col)))


def find_isomorphism(m1: FiniteMonoid, m2: FiniteMonoid):
    """A bijection name->name carrying m1's table onto m2's, or None.

    Brute force over profile-compatible bijections; intended for desk-scale
    tables (<= 8 or so elements).
    """
    if len(m1) != len(m2):
        return None
    p1 = {a: m1._profile(a) for a in m1.names}
    p2 = {a: m2._profile(a) for a in m2.names}
    if sorted(p1.values()) != sorted(p2.values()):
        return None
    others1 = [a for a in m1.names if a != m1.identity]
    others2 = [a for a in m2.names if a != m2.identity]
    for perm in permutations(others2):
        if any(p1[a] != p2[b] for a, b in zip(others1, perm)):
            continue
        phi = dict(zip(others1, perm))
        phi[m1.identity] = m2.identity
        if all(
            phi[m1.table[(a, b)]] == m2.table[(phi[a], phi[b])]
            for a in m1.names
            for b in m1.names
        ):
            return phi
    return None


def is_isomorphic(m1: FiniteMonoid, m2: FiniteMonoid) -> bool:
    return find_isomorphism(m1, m2) is not None


class MonoidHom:
    """A homomorphism between finite monoid tables, given elementwise."""

    def __init__(self, source: FiniteMonoid, target: FiniteMonoid, mapping, check=True):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        if check:
            missing = [a for a in source.names if a not in self.mapping]
            if missing:
                raise TableError(f"mapping not total: missing {missing}")
            bad = self.law_violation()
            if bad is not None:
                a, b = bad
                raise TableError(
                    f"not a homomorphism: phi({a}*{b}) != phi({a})*phi({b})"
                )

    def law_violation(self):
        if self.mapping[self.source.identity] != self.target.identity:
            return (self.source.identity, self.source.identity)
        for a in self.source.names:
            for b in self.source.names:
                if (
                    self.mapping[self.source.op(a, b)]
                    != self.target.op(self.mapping[a], self.mapping[b])
                ):
                    return (a, b)
        return None

    def __call__(self, a):
        return self.mapping[a]

    def __eq__(self, other):
        if not isinstance(other, MonoidHom):
            return NotImplemented
        return self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def compose(self, inner: "MonoidHom"):
        """self after inner."""
        return MonoidHom(
            inner.source, self.target,
            {a: self.mapping[inner.mapping[a]] for a in inner.source.names},
            check=False,
        )

    @staticmethod
    def identity(m: FiniteMonoid):
        return MonoidHom(m, m, {a: a for a in m.names}, check=False)


def all_homomorphisms(source: FiniteMonoid, target: FiniteMonoid):
    """Every monoid homomorphism source -> target, by brute force over
    images of the non-identity elements."""
    others = source.non_identity()
    for images in product(target.names, repeat=len(others)):
        mapping = dict(zip(others, images))
        mapping[source.identity] = target.identity
        cand = MonoidHom(source, target, mapping, check=False)
        if cand.law_violation() is None:
            yield cand


def all_monoid_tables(order):
    """Every monoid table on elements e0..e{n-1} with identity e0.

    Brute-force enumeration, practical for order <= 3 (used to spot-check
    universally quantified claims at desk scale).
    """
    names = tuple(f"e{i}" for i in range(order))
    if order == 0:
        return
    free = [(a, b) for a in names[1:] for b in names[1:]]
    for choice in product(names, repeat=len(free)):
        table = {}
        for a in names:
            table[(names[0], a)] = a
            table[(a, names[0])] = a
        table.update(dict(zip(free, choice)))
        ok = True
        for a, b, c in product(names, repeat=3):
            if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                ok = False
                break
        if ok:
            yield FiniteMonoid(names, names[0], table)
