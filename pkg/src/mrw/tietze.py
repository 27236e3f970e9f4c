"""Constructive Tietze paths: a script presenting any finite table monoid
from scratch, and the five-stage route between two certified systems with
identified irreducible monoids.  Every move carries a structural
certificate built the way the underlying construction dictates, so replay
never depends on search succeeding.

Stage layout for tietze_path(A, B):

  (1) collapse A by its full rule set, landing on (I(A), empty rules),
      renamed through the identification with I(B);
  (2) present that monoid with fresh primed letters, then adjoin one primed
      letter per reducible element of B with its normal form as target;
  (3) add B's rules letterwise;
  (4) add the full multiplication family of B, then discharge the stage-2
      letters and the presentation rules that are not B-multiplication
      facts;
  (5) collapse by the multiplication family, landing on B.

Removals whose avoiding derivations need the multiplication family are
deferred from stage (3) into stage (4), where the derivation is a short
valley through product expansions; the stage boundaries reported reflect
where each move actually ran.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mrw.backends import FreeBackend, FreeProductBackend, TableBackend
from mrw.engine import (
    Bounds,
    DEFAULT_BOUNDS,
    DerivationTrace,
    Mrs,
    Refused,
    Rule,
    TraceStep,
    certify,
    mrs as make_mrs,
    nf,
    normal_form,
)
from mrw.gett import (
    GettScript,
    MoveRefused,
    apply_type1,
    apply_type2,
    apply_type3,
    apply_type4,
    replay_move,
    replay_script,
)
from mrw.irreducibles import monoid_of_irreducibles
from mrw.tables import FiniteMonoid, find_isomorphism


LETTER_SUFFIX = "'"


@dataclass
class PipelineStage:
    label: str
    moves: list = field(default_factory=list)
    system_after: Mrs | None = None


@dataclass
class PipelineReport:
    stages: list
    final: Mrs

    def move_counts(self):
        return {st.label: len(st.moves) for st in self.stages}

    def script(self):
        return GettScript(tuple(m for st in self.stages for m in st.moves))


class _Builder:
    def __init__(self, initial: Mrs, bounds: Bounds):
        self.current = initial
        self.bounds = bounds
        self.stages = []
        self._stage = None

    def stage(self, label):
        self._stage = PipelineStage(label)
        self.stages.append(self._stage)
        return self._stage

    def _record(self, move, system):
        self._stage.moves.append(move)
        self.current = system
        return system

    def add_rule(self, a, b, derivation):
        system, move = apply_type1(self.current, a, b, self.bounds, derivation)
        return self._record(move, system)

    def remove_rule(self, rule, derivation):
        system, move = apply_type2(self.current, rule, self.bounds, derivation)
        return self._record(move, system)

    def adjoin(self, letter, target):
        system, move = apply_type3(self.current, letter, target, self.bounds)
        return self._record(move, system)

    def collapse(self, j_rules, naming=None, proper_complete=False):
        system, move, cs = apply_type4(self.current, j_rules, self.bounds,
                                       naming, proper_complete)
        self._record(move, system)
        return cs

    def close_stage(self):
        self._stage.system_after = self.current

    def rule_index(self, pair):
        return self.current.rule_pairs().index(pair)

    def report(self, final):
        return PipelineReport(self.stages, final)


def _step(system: Mrs, before, pair, left, right, forward):
    ri = system.rule_pairs().index(pair)
    lhs, rhs = pair
    op = system.backend.op
    if forward:
        after = op(left, op(rhs, right))
    else:
        after = op(left, op(lhs, right))
    return TraceStep(before, ri, lhs, rhs, left, right, forward, after), after


def _letters_to_base_trace(system: Mrs, elem):
    """Forward derivation rewriting every letter occurrence to its base
    element via the letter-defining rules (letter, target)."""
    backend = system.backend
    steps = []
    current = elem
    while True:
        pos = next((i for i, s in enumerate(current) if s[0] == "v"), None)
        if pos is None:
            break
        letter, n = current[pos][1], current[pos][2]
        pair = next(
            (l, r) for (l, r) in system.rule_pairs()
            if l == (("v", letter, 1),)
        )
        left = current[:pos]
        right = ((("v", letter, n - 1),) if n > 1 else ()) + current[pos + 1:]
        st, current = _step(system, current, pair, left, right, True)
        steps.append(st)
    return DerivationTrace(elem, current, tuple(steps))


def presentation_script(m: FiniteMonoid, bounds: Bounds = DEFAULT_BOUNDS,
                        suffix: str = LETTER_SUFFIX):
    """A script from (M, empty rules) to the canonical presentation of M,
    with letters named after the elements plus a freshness suffix.

    Moves: one adjunction per non-identity element; one addition per
    multiplication fact over letters; one addition and one removal per
    element swapping the letter-defining rules around; a final collapse by
    the element-to-letter family.  Returns (script, final system, report).
    """
    initial = make_mrs(TableBackend(m), [])
    b = _Builder(initial, bounds)
    st = b.stage("presentation")
    letter_of = {name: name + suffix for name in m.non_identity()}

    for name in m.non_identity():
        backend = b.current.backend
        target = name if isinstance(backend, TableBackend) else backend.embed(name)
        b.adjoin(letter_of[name], target)
    fp = b.current.backend

    def nu(name):
        if name == m.identity:
            return ()
        return fp.letter(letter_of[name])

    # every multiplication fact, derived by evaluating both sides down to M
    for a in m.names:
        for c in m.names:
            lhs = fp.op(nu(a), nu(c))
            rhs = nu(m.op(a, c))
            if lhs == rhs:
                b.add_rule(lhs, rhs, DerivationTrace.trivial(lhs))
                continue
            down_l = _letters_to_base_trace(b.current, lhs)
            down_r = _letters_to_base_trace(b.current, rhs)
            if down_l.end != down_r.end:
                raise Refused("presentation derivation failed to meet")
            b.add_rule(lhs, rhs, down_l.concat(down_r.reversed()))

    # (element, letter) aliases, then drop the original definitions
    for name in m.non_identity():
        elem = fp.embed(name)
        letter = nu(name)
        st_, after = _step(b.current, elem, (letter, elem), (), (), False)
        b.add_rule(elem, letter, DerivationTrace(elem, letter, (st_,)))
    for name in m.non_identity():
        elem = fp.embed(name)
        letter = nu(name)
        reduced = b.current.without_rule(Rule(letter, elem))
        st_, _ = _step(reduced, letter, (elem, letter), (), (), False)
        b.remove_rule(Rule(letter, elem),
                      DerivationTrace(letter, elem, (st_,)))

    j_rules = [Rule(fp.embed(name), nu(name)) for name in m.non_identity()]
    b.collapse(j_rules)
    b.close_stage()
    report = b.report(b.current)
    return report.script(), b.current, report


def system_as_table(system: Mrs, bounds: Bounds = DEFAULT_BOUNDS):
    """A finite-carrier system as (table, rule name pairs), elements named
    by their printed forms."""
    if not system.backend.finite:
        raise Refused("only finite carriers can be tabulated")
    backend = system.backend
    elems = list(backend.elements(None))
    names = {x: backend.format_element(x) for x in elems}
    table = {
        (names[x], names[y]): names[backend.op(x, y)] for x in elems for y in elems
    }
    monoid = FiniteMonoid(tuple(names[x] for x in elems),
                          names[backend.identity()], table)
    rules = {(names[r.lhs], names[r.rhs]) for r in system.rules}
    return monoid, rules


@dataclass
class TietzePath:
    script: GettScript
    report: PipelineReport
    final: Mrs
    identification: dict


def tietze_path(a_sys: Mrs, b_sys: Mrs, bounds: Bounds = DEFAULT_BOUNDS,
                identify: dict | None = None) -> TietzePath:
    """A replayable script transforming a_sys into b_sys, both certified
    Noetherian confluent with identified irreducible monoids; b_sys must
    have a finite carrier."""
    if not b_sys.backend.finite:
        raise Refused("the target system must have a finite carrier")
    cert_a = certify(a_sys, bounds.size_bound, bounds)
    cert_b = certify(b_sys, bounds.size_bound, bounds)
    if not cert_a.convergent:
        raise Refused(
            f"source not certified: noetherian={cert_a.noetherian.describe()}, "
            f"confluent={cert_a.confluent.describe()}"
        )
    if not cert_b.convergent:
        raise Refused(f"target not certified: {cert_b.confluent.describe()}")
    if nf(b_sys, b_sys.backend.identity(), bounds.steps, bounds) \
            != b_sys.backend.identity():
        raise Refused("target identity must be irreducible")

    ia = monoid_of_irreducibles(a_sys, bounds.size_bound, bounds, cert_a)
    ib = monoid_of_irreducibles(b_sys, bounds.size_bound, bounds, cert_b)
    if identify is None:
        identify = find_isomorphism(ia.monoid, ib.monoid)
        if identify is None:
            raise Refused("the systems do not present the same monoid")
    renamed = ia.monoid.rename(identify)
    if renamed != ib.monoid:
        raise Refused("the supplied identification is not an isomorphism")

    b_backend = b_sys.backend
    b_elems = list(b_backend.elements(None))
    b_names = {x: b_backend.format_element(x) for x in b_elems}
    by_name = {n: x for x, n in b_names.items()}
    irr_names = set(ib.monoid.names)
    b_identity = b_backend.identity()

    builder = _Builder(a_sys, bounds)

    # (1) collapse by the full rule set onto I(A), renamed to I(B)'s names
    builder.stage("(1) collapse by J = R")
    builder.collapse(list(a_sys.rules), naming=identify)
    builder.close_stage()
    m_table = builder.current.backend.monoid
    if m_table != ib.monoid:
        raise Refused("stage (1) did not land on the identified monoid")

    # (2) present I(B), then adjoin letters for the reducible elements of B
    builder.stage("(2) presentation and fresh generators")
    pres_script, _, _ = presentation_script(m_table, bounds)
    for move in pres_script:
        builder._record(move, replay_move(builder.current, move, bounds))

    def letter_name(x):
        return b_names[x] + LETTER_SUFFIX

    def nu(x):
        if x == b_identity:
            return ()
        return (letter_name(x),)

    w_targets = {}
    for x in b_elems:
        if x == b_identity or b_names[x] in irr_names:
            continue
        target = nf(b_sys, x, bounds.steps, bounds)
        w_targets[x] = target
        builder.adjoin(letter_name(x), nu(target))
    builder.close_stage()

    # (3) add B's rules letterwise; drop stage-2 letter definitions whose
    # avoiding derivations already exist
    builder.stage("(3) add the target rules")

    def w_trace(system, x):
        """nu(x) ->* nu(nf(x)) by the stage-2 defining rule, if x is
        reducible; empty otherwise."""
        if x == b_identity or b_names[x] in irr_names:
            return DerivationTrace.trivial(nu(x))
        pair = (nu(x), nu(w_targets[x]))
        st, after = _step(system, nu(x), pair, (), (), True)
        return DerivationTrace(nu(x), after, (st,))

    for rule in b_sys.rules:
        s, t = rule.lhs, rule.rhs
        ds = w_trace(builder.current, s)
        dt = w_trace(builder.current, t)
        if ds.end != dt.end:
            raise Refused("stage (3): target rule sides do not meet")
        builder.add_rule(nu(s), nu(t), ds.concat(dt.reversed()))

    deferred = []
    l_pairs = {(nu(r.lhs), nu(r.rhs)) for r in b_sys.rules}
    for x, target in w_targets.items():
        pair = (nu(x), nu(target))
        if pair in l_pairs:
            continue  # the defining rule is itself a target rule; keep it
        try:
            builder.remove_rule(Rule(*pair), None)
        except MoveRefused:
            deferred.append((x, target))
    builder.close_stage()

    # (4) add the multiplication family of B, then discharge what remains
    builder.stage("(4) multiplication family")
    rb_pairs = []
    for x in b_elems:
        for y in b_elems:
            lhs = nu(x) + nu(y)
            rhs = nu(b_backend.op(x, y))
            rb_pairs.append(((lhs, rhs), x, y))

    def reduction_valley(system, x):
        """nu(x) <->* nu(nf(x)) using only target rules and multiplication
        facts: each target-system step u*s*w -> u*t*w lifts to two product
        expansions, the letter-level rule, and two re-contractions (the
        degenerate expansions around identities drop out)."""
        trace_steps = []
        current = nu(x)
        _, b_trace = normal_form(b_sys, x, bounds.steps, bounds)
        for bstep in b_trace.steps:
            u, w = bstep.left, bstep.right
            s, t = bstep.lhs, bstep.rhs
            phases = [
                ((u, b_backend.op(s, w)), (), (), False),
                ((s, w), nu(u), (), False),
                (None, nu(u), nu(w), True),
                ((t, w), nu(u), (), True),
                ((u, b_backend.op(t, w)), (), (), True),
            ]
            for fact, left, right, forward in phases:
                if fact is None:
                    pair = (nu(s), nu(t))
                else:
                    p, q = fact
                    pair = (nu(p) + nu(q), nu(b_backend.op(p, q)))
                    if pair[0] == pair[1]:
                        continue
                st, current = _step(system, current, pair, left, right, forward)
                trace_steps.append(st)
            if current != nu(bstep.after):
                raise Refused("stage (4): lifted step failed to meet")
        return DerivationTrace(nu(x), current, tuple(trace_steps))

    for (pair, x, y) in rb_pairs:
        if pair[0] == pair[1]:
            continue  # identity facts collapse to degenerate rules
        if pair in set(builder.current.rule_pairs()):
            continue  # already present as a presentation fact
        # nu(x) nu(y) ->* nu(nf x) nu(nf y) -> nu(nfx *M nfy) <-* nu(x*y)
        sysnow = builder.current
        dx = w_trace(sysnow, x)
        dy = w_trace(sysnow, y)
        left = dx.in_context(sysnow.backend, (), nu(y)).concat(
            dy.in_context(sysnow.backend, dx.end, ())
        )
        xb = nf(b_sys, x, bounds.steps, bounds)
        yb = nf(b_sys, y, bounds.steps, bounds)
        cb = nf(b_sys, b_backend.op(xb, yb), bounds.steps, bounds)
        prod_pair = (nu(xb) + nu(yb), nu(cb))  # a presentation fact of I(B)
        if prod_pair[0] != prod_pair[1]:
            st, after = _step(sysnow, left.end, prod_pair, (), (), True)
            left = left.concat(DerivationTrace(left.end, after, (st,)))
        dz = w_trace(sysnow, b_backend.op(x, y))
        if dz.end != left.end:
            raise Refused("stage (4): multiplication derivation failed to meet")
        builder.add_rule(pair[0], pair[1], left.concat(dz.reversed()))

    # deferred stage-2 letter definitions: valley through the new facts
    for (x, target) in deferred:
        pair = (nu(x), nu(target))
        reduced = builder.current.without_rule(Rule(*pair))
        valley = reduction_valley(reduced, x)
        if valley.end != nu(target):
            raise Refused("stage (4): deferred removal valley failed to meet")
        builder.remove_rule(Rule(*pair), valley)

    # presentation facts that are not multiplication facts of B
    rb_set = {pair for (pair, _, _) in rb_pairs}
    for rule in list(builder.current.rules):
        pair = (rule.lhs, rule.rhs)
        if pair in rb_set or pair in l_pairs:
            continue
        reduced = builder.current.without_rule(rule)
        # the pair is (nu(m1) nu(m2), nu(m1 *M m2)) with m1, m2 irreducible:
        # expand the product fact, then reduce to the normal form
        m1m2 = [by_name[n[:-len(LETTER_SUFFIX)]] for n in rule.lhs]
        if len(m1m2) != 2:
            raise Refused(f"stage (4): unexpected leftover rule {pair}")
        x, y = m1m2
        prod_pair = (nu(x) + nu(y), nu(b_backend.op(x, y)))
        st, after = _step(reduced, rule.lhs, prod_pair, (), (), True)
        tail = reduction_valley(reduced, b_backend.op(x, y))
        deriv = DerivationTrace(rule.lhs, after, (st,)).concat(tail)
        if deriv.end != rule.rhs:
            raise Refused("stage (4): presentation-rule removal failed to meet")
        builder.remove_rule(rule, deriv)
    builder.close_stage()

    # (5) collapse by the multiplication family onto B
    builder.stage("(5) collapse by J = R_B")
    naming = {"_": b_names[b_identity]}
    for x in b_elems:
        if x != b_identity:
            naming[letter_name(x)] = b_names[x]
    present = set(builder.current.rule_pairs())
    seen = set()
    j_rules = []
    for (pair, _, _) in rb_pairs:
        if pair in present and pair not in seen:
            seen.add(pair)
            j_rules.append(Rule(*pair))
    builder.collapse(j_rules, naming=naming)
    builder.close_stage()

    final = builder.current
    want_table, want_rules = system_as_table(b_sys, bounds)
    got_table, got_rules = system_as_table(final, bounds)
    if got_table != want_table or got_rules != want_rules:
        raise Refused("pipeline did not land on the target system")
    report = builder.report(final)
    return TietzePath(report.script(), report, final, dict(identify))
