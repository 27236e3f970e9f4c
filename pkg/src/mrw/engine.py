"""One-step rewriting, normal forms, derivations, and termination/confluence
verdicts over any backend.

Rewriting is derived from backend factorization enumeration: a -> b when
a = x*s*y and b = x*t*y for a rule (s, t).  An element is reducible only
when some step produces a *different* element; self-rewrites are kept in the
full successor view but never count against irreducibility or termination.

All verdicts are tri-state and carry the bound they were obtained under.
Free-monoid systems run on the word kernel (compiled when available).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from itertools import islice

from mrw import _words
from mrw.backends import Backend, FreeBackend, UsageError


class EngineError(Exception):
    pass


class Refused(EngineError):
    """Operation preconditions not met; message says which."""


class BudgetExceeded(EngineError):
    def __init__(self, message, partial_trace=None):
        super().__init__(message)
        self.partial_trace = partial_trace


class IncompleteSearch(EngineError):
    """A claim would rest on a truncated enumeration."""


@dataclass(frozen=True)
class Rule:
    lhs: object
    rhs: object

    def swapped(self):
        return Rule(self.rhs, self.lhs)


@dataclass(frozen=True, eq=False)
class Mrs:
    """A backend plus a finite ordered, duplicate-free rule list."""

    backend: Backend
    rules: tuple

    def __post_init__(self):
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        seen = set()
        for r in rules:
            self.backend.check_element(r.lhs)
            self.backend.check_element(r.rhs)
            key = (r.lhs, r.rhs)
            if key in seen:
                raise UsageError(f"duplicate rule {key}")
            seen.add(key)
        object.__setattr__(self, "_nf_cache", {})
        object.__setattr__(self, "_nf_failed", set())
        object.__setattr__(self, "_free_rules", None)

    def rule_pairs(self):
        return [(r.lhs, r.rhs) for r in self.rules]

    def with_rule(self, rule: Rule):
        if (rule.lhs, rule.rhs) in set(self.rule_pairs()):
            return self
        return Mrs(self.backend, self.rules + (rule,))

    def without_rule(self, rule: Rule):
        kept = tuple(r for r in self.rules if (r.lhs, r.rhs) != (rule.lhs, rule.rhs))
        if len(kept) == len(self.rules):
            raise UsageError(f"rule {rule} not present")
        return Mrs(self.backend, kept)

    def encoded_rules(self):
        # word-kernel form; only meaningful on free backends
        if self._free_rules is None:
            enc = self.backend.encode
            object.__setattr__(
                self, "_free_rules", [(enc(r.lhs), enc(r.rhs)) for r in self.rules]
            )
        return self._free_rules


def mrs(backend, rule_pairs):
    return Mrs(backend, tuple(Rule(l, r) for (l, r) in rule_pairs))


def same_system(a: Mrs, b: Mrs) -> bool:
    return a.backend == b.backend and set(a.rule_pairs()) == set(b.rule_pairs())


# ---------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class TraceStep:
    before: object
    rule_index: int
    lhs: object
    rhs: object
    left: object
    right: object
    forward: bool
    after: object


class TraceError(EngineError):
    pass


@dataclass(frozen=True)
class DerivationTrace:
    """A checkable witness of a ->* b (all forward) or a <->* b (mixed)."""

    start: object
    end: object
    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    def is_forward(self):
        return all(s.forward for s in self.steps)

    def validate(self, system: Mrs):
        if not self.steps:
            if self.start != self.end:
                raise TraceError("empty trace with distinct endpoints")
            return
        if self.steps[0].before != self.start or self.steps[-1].after != self.end:
            raise TraceError("trace endpoints do not match steps")
        op = system.backend.op
        prev = self.start
        for i, st in enumerate(self.steps):
            if st.before != prev:
                raise TraceError(f"step {i}: chain broken")
            if not (0 <= st.rule_index < len(system.rules)):
                raise TraceError(f"step {i}: rule index {st.rule_index} out of range")
            rule = system.rules[st.rule_index]
            if (rule.lhs, rule.rhs) != (st.lhs, st.rhs):
                raise TraceError(
                    f"step {i}: stale rule reference (index {st.rule_index} is now "
                    f"{(rule.lhs, rule.rhs)}, step recorded {(st.lhs, st.rhs)})"
                )
            src = op(st.left, op(st.lhs, st.right))
            dst = op(st.left, op(st.rhs, st.right))
            if st.forward:
                if src != st.before or dst != st.after:
                    raise TraceError(f"step {i}: multiplication check fails")
            else:
                if dst != st.before or src != st.after:
                    raise TraceError(f"step {i}: multiplication check fails (backward)")
            prev = st.after

    def concat(self, other: "DerivationTrace"):
        if self.end != other.start:
            raise TraceError("cannot splice traces with mismatched endpoints")
        return DerivationTrace(self.start, other.end, self.steps + other.steps)

    def reversed(self):
        steps = tuple(
            TraceStep(s.after, s.rule_index, s.lhs, s.rhs, s.left, s.right,
                      not s.forward, s.before)
            for s in reversed(self.steps)
        )
        return DerivationTrace(self.end, self.start, steps)

    def in_context(self, backend: Backend, x, y):
        """The derivation x*w_i*y witnessing x*start*y <->* x*end*y."""
        op = backend.op
        steps = tuple(
            TraceStep(
                op(x, op(s.before, y)), s.rule_index, s.lhs, s.rhs,
                op(x, s.left), op(s.right, y), s.forward, op(x, op(s.after, y)),
            )
            for s in self.steps
        )
        return DerivationTrace(op(x, op(self.start, y)), op(x, op(self.end, y)), steps)

    @staticmethod
    def trivial(a):
        return DerivationTrace(a, a, ())


# ---------------------------------------------------------------------------
# verdicts

class Status(enum.Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CheckVerdict:
    status: Status
    exact: bool = False
    bound: int | None = None
    witness: object = None
    reason: str = ""

    @property
    def verified(self):
        return self.status is Status.VERIFIED

    @property
    def refuted(self):
        return self.status is Status.REFUTED

    def describe(self):
        if self.status is Status.VERIFIED:
            tail = "exactly" if self.exact else f"up to bound {self.bound}"
            return f"VERIFIED {tail}" + (f" ({self.reason})" if self.reason else "")
        if self.status is Status.REFUTED:
            return f"REFUTED ({self.reason})" if self.reason else "REFUTED"
        return f"UNKNOWN up to bound {self.bound}" + (
            f" ({self.reason})" if self.reason else ""
        )


@dataclass(frozen=True)
class Bounds:
    size_bound: int = 8
    steps: int = 500
    node_budget: int = 20000
    pair_limit: int = 4096
    preimage_depth: int = 2
    search_slack: int = 4  # how far above the endpoints searches may grow

    def with_size(self, size_bound):
        return replace(self, size_bound=size_bound)


DEFAULT_BOUNDS = Bounds()


# ---------------------------------------------------------------------------
# one-step rewriting

@dataclass
class SuccessorSet:
    """Deduplicated successors in canonical order.

    witnesses maps each successor to the first (rule_index, left, right)
    context that produced it; complete=False when some factorization
    enumeration was truncated.
    """

    elements: list
    witnesses: dict
    complete: bool

    def __iter__(self):
        return iter(self.elements)


def _successors_free(system: Mrs, a, proper):
    backend = system.backend
    enc = backend.encode(a)
    out = _words.successors(enc, system.encoded_rules(), proper)
    elements, witnesses = [], {}
    for ri, pos, res in out:
        word = backend.decode(res)
        if word not in witnesses:
            elements.append(word)
            lhs_len = len(system.rules[ri].lhs)
            witnesses[word] = (ri, a[:pos], a[pos + lhs_len:])
    return SuccessorSet(elements, witnesses, True)


def successors(system: Mrs, a, proper=True, bounds: Bounds = DEFAULT_BOUNDS):
    system.backend.check_element(a)
    if isinstance(system.backend, FreeBackend):
        res = _successors_free(system, a, proper)
        if not proper:
            # kernel skips lhs==rhs rules even in full view; add the self-steps
            for ri, rule in enumerate(system.rules):
                if rule.lhs == rule.rhs:
                    fac = system.backend.factorizations(a, rule.lhs, bounds.pair_limit)
                    for (x, y) in fac.pairs:
                        if a not in res.witnesses:
                            res.elements.append(a)
                            res.witnesses[a] = (ri, x, y)
        return res
    backend = system.backend
    elements, witnesses = [], {}
    complete = True
    for ri, rule in enumerate(system.rules):
        fac = backend.factorizations(a, rule.lhs, bounds.pair_limit)
        if not fac.complete:
            complete = False
        for (x, y) in fac.pairs:
            b = backend.op(x, backend.op(rule.rhs, y))
            if proper and b == a:
                continue
            if b not in witnesses:
                elements.append(b)
                witnesses[b] = (ri, x, y)
    return SuccessorSet(elements, witnesses, complete)


def one_step(system: Mrs, a, proper=False, bounds: Bounds = DEFAULT_BOUNDS):
    """The set {x*t*y : a = x*s*y, (s,t) in R}; proper=True drops b == a."""
    return successors(system, a, proper=proper, bounds=bounds)


def is_irreducible(system: Mrs, a, bounds: Bounds = DEFAULT_BOUNDS):
    """True / False / None (unknown under truncated enumeration)."""
    succ = successors(system, a, proper=True, bounds=bounds)
    if succ.elements:
        return False
    return True if succ.complete else None


def _step_to_trace_step(system: Mrs, before, witness, after, forward=True):
    ri, left, right = witness
    rule = system.rules[ri]
    return TraceStep(before, ri, rule.lhs, rule.rhs, left, right, forward, after)


def nf(system: Mrs, a, steps_budget=None, _bounds: Bounds = DEFAULT_BOUNDS):
    """Normal form without a trace (memoized); canonical strategy."""
    budget = steps_budget if steps_budget is not None else _bounds.steps
    cache = system._nf_cache
    hit = cache.get(a)
    if hit is not None:
        return hit
    if isinstance(system.backend, FreeBackend):
        enc = system.backend.encode(a)
        word, _, done = _words.normal_form_steps(enc, system.encoded_rules(), budget)
        if not done:
            raise BudgetExceeded(
                f"normal form of {system.backend.format_element(a)} not reached "
                f"within {budget} steps"
            )
        result = system.backend.decode(word)
        cache[a] = result
        return result
    current = a
    chain = [a]
    for _ in range(budget):
        hit = cache.get(current)
        if hit is not None:
            current = hit
            break
        succ = successors(system, current, proper=True, bounds=_bounds)
        if not succ.elements:
            if not succ.complete:
                raise IncompleteSearch(
                    "cannot certify irreducibility: successor enumeration truncated"
                )
            break
        current = succ.elements[0]
        chain.append(current)
    else:
        raise BudgetExceeded(f"no normal form within {budget} steps")
    for c in chain:
        cache[c] = current
    return current


def normal_form(system: Mrs, a, steps_budget=None, bounds: Bounds = DEFAULT_BOUNDS):
    """Normal form plus its forward derivation.

    Deterministic: rules are tried in declared order and contexts in the
    backend's canonical enumeration order, so reruns give identical traces.
    """
    budget = steps_budget if steps_budget is not None else bounds.steps
    system.backend.check_element(a)
    trace_steps = []
    current = a
    for _ in range(budget + 1):
        succ = successors(system, current, proper=True, bounds=bounds)
        if not succ.elements:
            if not succ.complete:
                raise IncompleteSearch(
                    "cannot certify irreducibility: successor enumeration truncated"
                )
            return current, DerivationTrace(a, current, tuple(trace_steps))
        if len(trace_steps) >= budget:
            raise BudgetExceeded(
                f"no normal form within {budget} steps (possible non-termination)",
                partial_trace=DerivationTrace(a, current, tuple(trace_steps)),
            )
        nxt = succ.elements[0]
        trace_steps.append(_step_to_trace_step(system, current, succ.witnesses[nxt], nxt))
        current = nxt
    raise BudgetExceeded(
        f"no normal form within {budget} steps",
        partial_trace=DerivationTrace(a, current, tuple(trace_steps)),
    )


# ---------------------------------------------------------------------------
# termination

def _carrier(system: Mrs, size_bound, node_budget=None):
    it = system.backend.elements(size_bound)
    if node_budget is None:
        return list(it)
    return list(islice(it, node_budget))


def check_noetherian(system: Mrs, size_bound=None, bounds: Bounds = DEFAULT_BOUNDS):
    size_bound = bounds.size_bound if size_bound is None else size_bound
    backend = system.backend

    if backend.finite:
        nodes = _carrier(system, size_bound)
        cyc = _find_cycle(system, nodes, bounds, node_budget=None)
        if cyc is not None:
            return CheckVerdict(Status.REFUTED, exact=True, witness=cyc,
                                reason="cycle of proper steps")
        return CheckVerdict(Status.VERIFIED, exact=True, bound=None,
                            reason="proper-step graph acyclic on the full carrier")

    # size-decrease certificate: on additive-size backends a rule with
    # size(lhs) > size(rhs) shrinks every context it fires in
    if backend.additive_size:
        proper_rules = [r for r in system.rules if r.lhs != r.rhs]
        if all(backend.size(r.lhs) > backend.size(r.rhs) for r in proper_rules):
            return CheckVerdict(Status.VERIFIED, exact=True,
                                reason="size-decrease certificate")

    nodes = _carrier(system, size_bound, bounds.node_budget)
    cyc = _find_cycle(system, nodes, bounds, node_budget=bounds.node_budget,
                      size_cap=size_bound)
    if cyc is not None:
        return CheckVerdict(Status.REFUTED, exact=True, witness=cyc,
                            reason="cycle of proper steps")
    if cyc is None and _all_steps_shrink(system, nodes, bounds):
        return CheckVerdict(
            Status.VERIFIED, exact=False, bound=size_bound,
            reason="acyclic and size-decreasing on all explored steps",
        )
    return CheckVerdict(Status.UNKNOWN, bound=size_bound,
                        reason="no cycle found; no decrease certificate")


def _all_steps_shrink(system: Mrs, nodes, bounds):
    size = system.backend.size
    for u in nodes:
        succ = successors(system, u, proper=True, bounds=bounds)
        if not succ.complete:
            return False
        if any(size(v) >= size(u) for v in succ.elements):
            return False
    return True


def _find_cycle(system: Mrs, roots, bounds, node_budget, size_cap=None):
    """Iterative DFS over proper steps; returns a cyclic DerivationTrace or None.

    Nodes larger than size_cap are recorded but not expanded, so the search
    cannot stampede into unboundedly growing elements; any cycle among
    in-cap elements is still found.
    """
    size = system.backend.size
    color = {}  # 0 in progress, 1 done
    parent = {}
    expanded = 0
    for root in roots:
        if root in color:
            continue
        stack = [(root, None)]
        while stack:
            node, it = stack[-1]
            if it is None:
                color[node] = 0
                expanded += 1
                if node_budget is not None and expanded > node_budget:
                    return None
                if size_cap is not None and size(node) > size_cap:
                    it = iter(())
                else:
                    succ = successors(system, node, proper=True, bounds=bounds)
                    it = iter([(e, succ.witnesses[e]) for e in succ.elements])
                stack[-1] = (node, it)
            advanced = False
            for child, witness in it:
                if color.get(child) == 0:
                    # found a cycle: child ->* node -> child
                    cycle_steps = [_step_to_trace_step(system, node, witness, child)]
                    cur = node
                    while cur != child:
                        prev, w = parent[cur]
                        cycle_steps.append(_step_to_trace_step(system, prev, w, cur))
                        cur = prev
                    cycle_steps.reverse()
                    trace = DerivationTrace(child, child, tuple(cycle_steps))
                    return trace
                if child not in color:
                    parent[child] = (node, witness)
                    stack.append((child, None))
                    advanced = True
                    break
            if not advanced:
                color[node] = 1
                stack.pop()
    return None


# ---------------------------------------------------------------------------
# confluence

def _reducts(system: Mrs, a, bounds):
    """(set of ->* reducts of a, closed: bool).  Capped in size and node
    count so diverging systems cannot stall the peak loop."""
    size = system.backend.size
    size_cap = size(a) + bounds.search_slack
    budget = min(bounds.node_budget, 4000)
    seen = {a}
    frontier = [a]
    closed = True
    while frontier:
        if len(seen) > budget:
            closed = False
            break
        nxt = []
        for u in frontier:
            if size(u) > size_cap:
                closed = False
                continue
            succ = successors(system, u, proper=True, bounds=bounds)
            if not succ.complete:
                closed = False
            for v in succ.elements:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen, closed


def _try_nf(system: Mrs, a, bounds):
    """nf with a short leash; remembers elements whose reduction already ran
    away once so peak loops do not re-pay for them."""
    if a in system._nf_failed:
        return None
    try:
        return nf(system, a, min(bounds.steps, 64), bounds)
    except EngineError:
        system._nf_failed.add(a)
        return None


def _joinable(system: Mrs, b, c, bounds):
    """True / False / None (unknown)."""
    if b == c:
        return True
    nb = _try_nf(system, b, bounds)
    nc = _try_nf(system, c, bounds)
    if nb is not None and nb == nc:
        return True
    rb, closed_b = _reducts(system, b, bounds)
    rc, closed_c = _reducts(system, c, bounds)
    if rb & rc:
        return True
    if closed_b and closed_c:
        return False
    return None


@dataclass(frozen=True)
class PeakWitness:
    source: object
    left: object
    right: object


def check_confluent(system: Mrs, size_bound=None, bounds: Bounds = DEFAULT_BOUNDS):
    size_bound = bounds.size_bound if size_bound is None else size_bound
    noeth = check_noetherian(system, size_bound, bounds)
    nodes = _carrier(system, size_bound, bounds.node_budget)

    unknown_reason = None
    for u in nodes:
        succ = successors(system, u, proper=True, bounds=bounds)
        if not succ.complete:
            unknown_reason = "successor enumeration truncated"
        elems = succ.elements
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                j3 = _joinable(system, elems[i], elems[j], bounds)
                if j3 is False:
                    return CheckVerdict(
                        Status.REFUTED, exact=True,
                        witness=PeakWitness(u, elems[i], elems[j]),
                        reason="non-joinable peak",
                    )
                if j3 is None:
                    unknown_reason = "joinability search truncated"

    if not noeth.verified:
        return CheckVerdict(
            Status.UNKNOWN, bound=size_bound,
            reason="local checks passed but termination is " + noeth.status.value,
        )
    if unknown_reason:
        return CheckVerdict(Status.UNKNOWN, bound=size_bound, reason=unknown_reason)
    if system.backend.finite and noeth.exact:
        return CheckVerdict(Status.VERIFIED, exact=True,
                            reason="locally confluent and Noetherian (Newman)")
    return CheckVerdict(
        Status.VERIFIED, exact=False, bound=size_bound,
        reason="locally confluent on all enumerated elements; Noetherian "
               + ("exactly" if noeth.exact else f"up to {noeth.bound}"),
    )


@dataclass(frozen=True)
class SystemCertificate:
    noetherian: CheckVerdict
    confluent: CheckVerdict
    size_bound: int

    @property
    def convergent(self):
        return self.noetherian.verified and self.confluent.verified


def certify(system: Mrs, size_bound=None, bounds: Bounds = DEFAULT_BOUNDS):
    size_bound = bounds.size_bound if size_bound is None else size_bound
    return SystemCertificate(
        check_noetherian(system, size_bound, bounds),
        check_confluent(system, size_bound, bounds),
        size_bound,
    )


# ---------------------------------------------------------------------------
# reachability and equivalence

@dataclass(frozen=True)
class ReachResult:
    trace: DerivationTrace | None
    definitive: bool  # absence is final, not merely within budget

    @property
    def found(self):
        return self.trace is not None


def _bfs_trace(system: Mrs, a, parents, target):
    steps = []
    cur = target
    while cur != a:
        prev, witness, forward = parents[cur]
        if forward:
            steps.append(_step_to_trace_step(system, prev, witness, cur, forward=True))
        else:
            ri, left, right = witness
            rule = system.rules[ri]
            steps.append(TraceStep(prev, ri, rule.lhs, rule.rhs, left, right, False, cur))
        cur = prev
    steps.reverse()
    return DerivationTrace(a, target, tuple(steps))


def reaches(system: Mrs, a, b, bounds: Bounds = DEFAULT_BOUNDS):
    """Breadth-first search for a forward derivation a ->* b.

    Elements growing past the endpoint sizes plus the search slack are not
    expanded; absence is definitive only when the search closed without
    hitting a cap or a truncated enumeration.
    """
    system.backend.check_element(a)
    system.backend.check_element(b)
    if a == b:
        return ReachResult(DerivationTrace.trivial(a), True)
    size = system.backend.size
    size_cap = max(size(a), size(b)) + bounds.search_slack
    parents = {}
    seen = {a}
    frontier = [a]
    complete = True
    while frontier:
        if len(seen) > bounds.node_budget:
            return ReachResult(None, False)
        nxt = []
        for u in frontier:
            if size(u) > size_cap:
                complete = False
                continue
            succ = successors(system, u, proper=True, bounds=bounds)
            if not succ.complete:
                complete = False
            for v in succ.elements:
                if v in seen:
                    continue
                seen.add(v)
                parents[v] = (u, succ.witnesses[v], True)
                if v == b:
                    return ReachResult(_bfs_trace(system, a, parents, b), True)
                nxt.append(v)
        frontier = nxt
    return ReachResult(None, complete)


class Equivalence(enum.Enum):
    YES = "equivalent"
    NO = "not-equivalent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EquivResult:
    status: Equivalence
    trace: DerivationTrace | None = None


def equivalent(system: Mrs, a, b, bounds: Bounds = DEFAULT_BOUNDS,
               certificate: SystemCertificate | None = None):
    """Decide a <->* b.

    On a certified Noetherian confluent system this compares normal forms
    and splices the two forward derivations into a valley (Church-Rosser);
    otherwise it runs a bounded search over forward and backward steps and
    distinguishes unknown-within-budget from definitely-not.
    """
    system.backend.check_element(a)
    system.backend.check_element(b)
    if a == b:
        return EquivResult(Equivalence.YES, DerivationTrace.trivial(a))

    if certificate is not None and certificate.convergent:
        na, ta = normal_form(system, a, bounds.steps, bounds)
        nb, tb = normal_form(system, b, bounds.steps, bounds)
        if na == nb:
            return EquivResult(Equivalence.YES, ta.concat(tb.reversed()))
        return EquivResult(Equivalence.NO)

    # meet-in-the-middle over the undirected step graph (forward steps plus
    # reversed-rule steps), expanding small elements first and never growing
    # far past the endpoints
    reversed_sys = Mrs(system.backend, tuple(r.swapped() for r in system.rules))
    size = system.backend.size
    size_cap = max(size(a), size(b)) + bounds.search_slack
    sides = [
        {"root": a, "parents": {}, "seen": {a}, "frontier": [a]},
        {"root": b, "parents": {}, "seen": {b}, "frontier": [b]},
    ]
    complete = True

    def side_trace(side, target):
        steps = []
        cur = target
        while cur != side["root"]:
            prev, witness, forward = side["parents"][cur]
            if forward:
                steps.append(_step_to_trace_step(system, prev, witness, cur, True))
            else:
                ri, left, right = witness
                rule = system.rules[ri]
                steps.append(TraceStep(prev, ri, rule.lhs, rule.rhs, left, right,
                                       False, cur))
            cur = prev
        steps.reverse()
        return DerivationTrace(side["root"], target, tuple(steps))

    while sides[0]["frontier"] or sides[1]["frontier"]:
        if sum(len(s["seen"]) for s in sides) > bounds.node_budget:
            return EquivResult(Equivalence.UNKNOWN)
        idx = 0 if (sides[0]["frontier"] and
                    (not sides[1]["frontier"]
                     or len(sides[0]["seen"]) <= len(sides[1]["seen"]))) else 1
        side, other = sides[idx], sides[1 - idx]
        nxt = []
        for u in side["frontier"]:
            if size(u) > size_cap:
                complete = False
                continue
            fwd = successors(system, u, proper=True, bounds=bounds)
            bwd = successors(reversed_sys, u, proper=True, bounds=bounds)
            if not (fwd.complete and bwd.complete):
                complete = False
            for v, witness, forward in (
                [(v, fwd.witnesses[v], True) for v in fwd.elements]
                + [(v, bwd.witnesses[v], False) for v in bwd.elements]
            ):
                if v in side["seen"]:
                    continue
                side["seen"].add(v)
                side["parents"][v] = (u, witness, forward)
                if v in other["seen"]:
                    ta = side_trace(sides[0], v)
                    tb = side_trace(sides[1], v)
                    return EquivResult(Equivalence.YES, ta.concat(tb.reversed()))
                nxt.append(v)
        side["frontier"] = nxt
    return EquivResult(Equivalence.NO if complete else Equivalence.UNKNOWN)


def connected_component_classes(system: Mrs):
    """<->* classes by brute force over a finite carrier (oracle for the
    certified normal-form route)."""
    if not system.backend.finite:
        raise Refused("connected components need a finite carrier")
    elems = list(system.backend.elements(None))
    parent = {e: e for e in elems}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for u in elems:
        for v in successors(system, u, proper=True):
            union(u, v)
    classes = {}
    for e in elems:
        classes.setdefault(find(e), set()).add(e)
    return list(classes.values())
