"""The four generalized Tietze moves with mandatory, replayable certificates.

Each move carries the evidence that legitimates it: an equivalence
derivation for additions, an avoiding derivation for removals, freshness
data for adjunctions, and the collapse evidence for type 4.  Scripts replay
from scratch: every certificate is revalidated against the system it claims
to hold in, and replay fails fast with the index of the first bad move.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mrw.backends import (
    FreeBackend,
    FreeProductBackend,
    UsageError,
    free_product_adjoin,
)
from mrw.collapse import CollapsedSystem, collapse
from mrw.engine import (
    Bounds,
    CheckVerdict,
    DEFAULT_BOUNDS,
    DerivationTrace,
    Equivalence,
    Mrs,
    Refused,
    Rule,
    Status,
    TraceError,
    certify,
    check_confluent,
    check_noetherian,
    equivalent,
    nf,
)
from mrw.irreducibles import monoid_of_irreducibles, quotient_monoid
from mrw.tables import is_isomorphic


class MoveRefused(Refused):
    def __init__(self, message, definitive=True):
        super().__init__(message)
        self.definitive = definitive


@dataclass(frozen=True)
class Type1Add:
    rule: Rule
    derivation: DerivationTrace  # proves lhs <->* rhs in the pre-move system

    tag = "add"


@dataclass(frozen=True)
class Type2Remove:
    rule: Rule
    derivation: DerivationTrace  # proves lhs <->* rhs avoiding the removed rule

    tag = "remove"


@dataclass(frozen=True)
class Type3Adjoin:
    letter: str
    target: object  # element of the pre-move carrier

    tag = "adjoin"


@dataclass(frozen=True)
class Type4Collapse:
    j_rules: tuple
    naming: dict | None = None
    proper_complete: bool = False

    tag = "collapse"


GettMove = Type1Add | Type2Remove | Type3Adjoin | Type4Collapse


@dataclass
class GettScript:
    moves: tuple

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)


# ---------------------------------------------------------------------------
# applying moves

def derive_equivalence(system: Mrs, a, b, bounds: Bounds):
    fmt = system.backend.format_element
    res = equivalent(system, a, b, bounds)
    if res.status is Equivalence.YES:
        return res.trace
    if res.status is Equivalence.NO:
        raise MoveRefused(f"{fmt(a)} and {fmt(b)} are not equivalent", definitive=True)
    # search was inconclusive; certification unlocks the normal-form route
    cert = certify(system, bounds.size_bound, bounds)
    if cert.convergent:
        res = equivalent(system, a, b, bounds, cert)
        if res.status is Equivalence.YES:
            return res.trace
        if res.status is Equivalence.NO:
            raise MoveRefused(f"{fmt(a)} and {fmt(b)} are not equivalent",
                              definitive=True)
    raise MoveRefused(
        f"equivalence of {fmt(a)} and {fmt(b)} unknown within budget",
        definitive=False,
    )


def apply_type1(system: Mrs, a, b, bounds: Bounds = DEFAULT_BOUNDS,
                derivation: DerivationTrace | None = None):
    """Add the rule (a, b); valid when a <->* b already holds, witnessed by a
    stored derivation (searched for when not supplied)."""
    system.backend.check_element(a)
    system.backend.check_element(b)
    if derivation is None:
        derivation = derive_equivalence(system, a, b, bounds)
    if (derivation.start, derivation.end) != (a, b):
        raise MoveRefused("derivation endpoints do not match the rule")
    try:
        derivation.validate(system)
    except TraceError as e:
        raise MoveRefused(f"equivalence certificate invalid: {e}") from e
    move = Type1Add(Rule(a, b), derivation)
    return system.with_rule(move.rule), move


def apply_type2(system: Mrs, rule: Rule, bounds: Bounds = DEFAULT_BOUNDS,
                derivation: DerivationTrace | None = None):
    """Remove a rule; valid when its sides stay equivalent without it."""
    if (rule.lhs, rule.rhs) not in set(system.rule_pairs()):
        raise MoveRefused(f"rule {rule} is not in the system")
    reduced = system.without_rule(rule)
    if derivation is None:
        derivation = derive_equivalence(reduced, rule.lhs, rule.rhs, bounds)
    if (derivation.start, derivation.end) != (rule.lhs, rule.rhs):
        raise MoveRefused("derivation endpoints do not match the removed rule")
    try:
        derivation.validate(reduced)
    except TraceError as e:
        raise MoveRefused(f"avoiding derivation invalid: {e}") from e
    move = Type2Remove(rule, derivation)
    return reduced, move


def embed_element(old_backend, new_backend, x):
    """Carry an element of the base carrier into the adjoined free product."""
    if isinstance(new_backend, FreeBackend) and isinstance(old_backend, FreeBackend):
        return x
    if isinstance(new_backend, FreeProductBackend):
        if isinstance(old_backend, FreeProductBackend):
            return x
        return new_backend.embed(x) if x != old_backend.identity() else ()
    raise Refused("unsupported embedding")


def apply_type3(system: Mrs, letter: str, target,
                bounds: Bounds = DEFAULT_BOUNDS):
    """Adjoin a fresh letter v with defining rule (v, target)."""
    system.backend.check_element(target)
    try:
        new_backend = free_product_adjoin(system.backend, [letter])
    except UsageError as e:
        raise MoveRefused(f"letter {letter!r} is not fresh: {e}") from e
    pairs = [
        (embed_element(system.backend, new_backend, r.lhs),
         embed_element(system.backend, new_backend, r.rhs))
        for r in system.rules
    ]
    if isinstance(new_backend, FreeBackend):
        letter_elem = (letter,)
    else:
        letter_elem = new_backend.letter(letter)
    pairs.append((letter_elem, embed_element(system.backend, new_backend, target)))
    from mrw.engine import mrs as make_mrs

    move = Type3Adjoin(letter, target)
    return make_mrs(new_backend, pairs), move


def apply_type4(system: Mrs, j_rules, bounds: Bounds = DEFAULT_BOUNDS,
                naming=None, proper_complete=False):
    cs = collapse(system, tuple(j_rules), bounds, naming, proper_complete)
    move = Type4Collapse(tuple(j_rules), dict(naming) if naming else None,
                         proper_complete)
    return cs.system, move, cs


# ---------------------------------------------------------------------------
# subset checks

def check_confluent_subset(system: Mrs, j_rules, size_bound=None,
                           bounds: Bounds = DEFAULT_BOUNDS) -> CheckVerdict:
    """Confluence of (M, ->J).  Its termination is inherited: a subsystem of
    a Noetherian system is Noetherian, so only confluence needs deciding."""
    rule_set = set(system.rule_pairs())
    for r in j_rules:
        if (r.lhs, r.rhs) not in rule_set:
            raise Refused(f"J contains a rule not in the system: {r}")
    sub = Mrs(system.backend, tuple(j_rules))
    return check_confluent(sub, size_bound, bounds)


def check_coherent(system: Mrs, j_rules, size_bound=None,
                   bounds: Bounds = DEFAULT_BOUNDS,
                   proper_complete=False) -> CheckVerdict:
    """Coherence of J: J is confluent and the collapsed system is again
    Noetherian and confluent.  Refutations carry replayable witnesses."""
    size_bound = bounds.size_bound if size_bound is None else size_bound
    sub_verdict = check_confluent_subset(system, j_rules, size_bound, bounds)
    if sub_verdict.refuted:
        return CheckVerdict(Status.REFUTED, exact=sub_verdict.exact,
                            witness=sub_verdict.witness,
                            reason="J is not a confluent subset")
    if not sub_verdict.verified:
        return CheckVerdict(Status.UNKNOWN, bound=size_bound,
                            reason="confluence of J undecided: " + sub_verdict.reason)
    try:
        cs = collapse(system, tuple(j_rules), bounds.with_size(size_bound),
                      proper_complete=proper_complete)
    except Refused as e:
        return CheckVerdict(Status.UNKNOWN, bound=size_bound,
                            reason=f"collapse refused: {e}")
    noeth = check_noetherian(cs.system, size_bound, bounds)
    if noeth.refuted:
        return CheckVerdict(Status.REFUTED, exact=noeth.exact,
                            witness=noeth.witness,
                            reason="collapsed system is not Noetherian")
    if not noeth.verified:
        return CheckVerdict(Status.UNKNOWN, bound=size_bound,
                            reason="collapsed termination undecided: " + noeth.reason)
    confl = check_confluent(cs.system, size_bound, bounds)
    if confl.refuted:
        return CheckVerdict(Status.REFUTED, exact=confl.exact,
                            witness=confl.witness,
                            reason="collapsed system is not confluent")
    if not confl.verified:
        return CheckVerdict(Status.UNKNOWN, bound=size_bound,
                            reason="collapsed confluence undecided: " + confl.reason)
    exact = sub_verdict.exact and noeth.exact and confl.exact
    return CheckVerdict(Status.VERIFIED, exact=exact,
                        bound=None if exact else size_bound,
                        reason="J confluent and the collapse Noetherian confluent")


# ---------------------------------------------------------------------------
# preservation of the presented monoid

def check_preservation(before: Mrs, move, after: Mrs,
                       bounds: Bounds = DEFAULT_BOUNDS,
                       word_bound=6) -> bool:
    """The move did not change the presented monoid.

    Types 1 and 2: the quotient monoids are isomorphic (finite carriers).
    Type 3: the retraction sending the fresh letter to its target is a
    quotient isomorphism; checked pointwise at desk scale.
    Type 4: the irreducible monoids agree, tablewise when materializable and
    as normal-form oracles up to word_bound otherwise.
    """
    if isinstance(move, (Type1Add, Type2Remove)):
        if before.backend.finite and after.backend.finite:
            return is_isomorphic(
                quotient_monoid(before).monoid, quotient_monoid(after).monoid
            )
        cert_b = certify(before, bounds.size_bound, bounds)
        cert_a = certify(after, bounds.size_bound, bounds)
        if not (cert_b.convergent and cert_a.convergent):
            raise Refused("preservation check needs certified systems")
        ib = monoid_of_irreducibles(before, bounds.size_bound, bounds, cert_b)
        ia = monoid_of_irreducibles(after, bounds.size_bound, bounds, cert_a)
        return is_isomorphic(ib.monoid, ia.monoid)

    if isinstance(move, Type3Adjoin):
        # retraction: identity on the base, letter -> target
        backend = after.backend
        base = before.backend

        def retract(x):
            if isinstance(backend, FreeBackend):
                return tuple(
                    l for piece in x
                    for l in (move.target if piece == move.letter else (piece,))
                )
            out = base.identity()
            for syl in x:
                if syl[0] == "m":
                    out = base.op(out, syl[1])
                else:
                    if syl[1] != move.letter:
                        raise Refused("unexpected foreign letter")
                    for _ in range(syl[2]):
                        out = base.op(out, move.target)
            return out

        # psi([b]) = [retract(b)] inverts the inclusion: checked by requiring
        # b <->* embed(retract(b)) in the extended system on sampled elements
        for b in _sample_elements(after.backend, min(word_bound, bounds.size_bound)):
            image = embed_element(base, backend, retract(b))
            res = equivalent(after, b, image, bounds)
            if res.status is Equivalence.NO:
                return False
            if res.status is Equivalence.UNKNOWN:
                raise Refused("type-3 preservation undecided within budget")
        return True

    if isinstance(move, Type4Collapse):
        if before.backend.finite and after.backend.finite:
            ib = monoid_of_irreducibles(before, bounds.size_bound, bounds)
            ia = monoid_of_irreducibles(after, bounds.size_bound, bounds)
            return is_isomorphic(ib.monoid, ia.monoid)
        # oracle comparison through psi(a) = class of a in the collapse
        cert_b = certify(before, bounds.size_bound, bounds)
        if not cert_b.convergent:
            raise Refused("type-4 preservation needs the ambient system certified")
        cs = collapse(before, move.j_rules, bounds, move.naming,
                      move.proper_complete)
        from mrw.engine import is_irreducible

        for u in _sample_elements(before.backend, word_bound):
            for v in _sample_elements(before.backend, word_bound // 2):
                lhs = cs.project(nf(before, before.backend.op(u, v)))
                rhs = nf(cs.system, cs.system.backend.op(cs.project(nf(before, u)),
                                                         cs.project(nf(before, v))))
                if lhs != rhs:
                    return False
        # irreducibles agree up to the bound
        for x in _sample_elements(before.backend, word_bound):
            amb = is_irreducible(before, x, bounds)
            if amb and cs.system.backend.contains(cs.project(x)):
                if is_irreducible(cs.system, cs.project(x), bounds) is False:
                    return False
        return True

    raise Refused(f"unknown move {move!r}")


def _sample_elements(backend, size_bound, cap=300):
    out = []
    for x in backend.elements(size_bound):
        out.append(x)
        if len(out) >= cap:
            break
    return out


# ---------------------------------------------------------------------------
# replay

@dataclass
class ReplayResult:
    final: Mrs | None
    ok: bool
    failed_index: int | None = None
    message: str = ""
    definitive: bool = True
    systems: list = field(default_factory=list)

    @property
    def status_code(self):
        if self.ok:
            return 0
        return 1 if self.definitive else 2


def replay_move(system: Mrs, move, bounds: Bounds = DEFAULT_BOUNDS) -> Mrs:
    """Apply one move, revalidating its certificate from scratch."""
    if isinstance(move, Type1Add):
        out, _ = apply_type1(system, move.rule.lhs, move.rule.rhs, bounds,
                             derivation=move.derivation)
        return out
    if isinstance(move, Type2Remove):
        out, _ = apply_type2(system, move.rule, bounds,
                             derivation=move.derivation)
        return out
    if isinstance(move, Type3Adjoin):
        out, _ = apply_type3(system, move.letter, move.target, bounds)
        return out
    if isinstance(move, Type4Collapse):
        out, _, _ = apply_type4(system, move.j_rules, bounds, move.naming,
                                move.proper_complete)
        return out
    raise Refused(f"unknown move {move!r}")


def replay_script(initial: Mrs, script: GettScript,
                  bounds: Bounds = DEFAULT_BOUNDS) -> ReplayResult:
    """Apply the script in order, revalidating every certificate; fails fast
    with the index of the first invalid move."""
    current = initial
    systems = [initial]
    for i, move in enumerate(script):
        try:
            current = replay_move(current, move, bounds)
        except MoveRefused as e:
            return ReplayResult(None, False, i, str(e),
                                definitive=e.definitive, systems=systems)
        except (Refused, UsageError, TraceError) as e:
            return ReplayResult(None, False, i, str(e), systems=systems)
        systems.append(current)
    return ReplayResult(current, True, systems=systems)
