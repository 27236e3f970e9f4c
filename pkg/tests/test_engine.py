import pytest

from mrw.backends import FreeBackend, NaturalsBackend, PowersetBackend, UsageError
from mrw.engine import (
    Bounds,
    BudgetExceeded,
    DerivationTrace,
    Equivalence,
    Mrs,
    Rule,
    Status,
    TraceError,
    TraceStep,
    certify,
    check_confluent,
    check_noetherian,
    connected_component_classes,
    equivalent,
    is_irreducible,
    mrs,
    nf,
    normal_form,
    one_step,
    reaches,
    successors,
)
from mrw.fixtures import (
    cancel_pair_system,
    naturals_mod2,
    powerset_system,
    z2_system,
)


def test_one_step_naturals():
    m = naturals_mod2()
    assert set(one_step(m, 5, proper=True).elements) == {3}
    assert set(one_step(m, 1).elements) == set()


def test_one_step_powerset_example():
    m = powerset_system()
    assert set(one_step(m, frozenset("a"), proper=True).elements) == {frozenset("ac")}


def test_proper_excludes_self_rewrites():
    m = mrs(NaturalsBackend(), [(0, 0), (2, 0)])
    assert 0 not in successors(m, 0, proper=True).elements
    assert 0 in one_step(m, 0).elements
    assert is_irreducible(m, 0) is True


def test_duplicate_rules_refused():
    with pytest.raises(UsageError):
        mrs(NaturalsBackend(), [(2, 0), (2, 0)])


def test_normal_form_and_trace():
    m = naturals_mod2()
    val, trace = normal_form(m, 7)
    assert val == 1 and len(trace) == 3
    trace.validate(m)
    assert trace.is_forward()


def test_normal_form_deterministic():
    m = cancel_pair_system()
    w = m.backend.parse_element("abba")
    t1 = normal_form(m, w)[1]
    t2 = normal_form(m, w)[1]
    assert t1 == t2


def test_normal_form_fixture_values():
    assert nf(naturals_mod2(), 7) == 1
    ps = powerset_system()
    assert nf(ps, frozenset("a")) == frozenset("ac")
    assert nf(ps, frozenset("b")) == frozenset("b")
    # irreducible input: empty trace
    val, trace = normal_form(ps, frozenset("b"))
    assert val == frozenset("b") and len(trace) == 0


def test_normal_form_budget_exhaustion_carries_partial_trace():
    m = mrs(NaturalsBackend(), [(1, 2)])
    with pytest.raises(BudgetExceeded) as exc:
        normal_form(m, 1, steps_budget=5)
    assert len(exc.value.partial_trace) == 5


def test_kernel_and_generic_paths_agree():
    fb = FreeBackend("ab")
    pairs = [(fb.parse_element("ab"), ()), (fb.parse_element("ba"), ())]
    fast = mrs(fb, pairs)

    class NotFree(FreeBackend):
        pass

    slow_backend = NotFree.__new__(NotFree)
    slow_backend.__dict__.update(fb.__dict__)
    for w in fb.elements(5):
        expected = successors(fast, w, proper=True).elements
        got_pairs = []
        for ri, rule in enumerate(fast.rules):
            fac = fb.factorizations(w, rule.lhs)
            for (x, y) in fac.pairs:
                b = fb.op(x, fb.op(rule.rhs, y))
                if b != w and b not in got_pairs:
                    got_pairs.append(b)
        assert expected == got_pairs


def test_check_noetherian_examples(big_bounds):
    assert check_noetherian(naturals_mod2(), 50).verified
    assert check_noetherian(powerset_system()).exact
    v = check_noetherian(mrs(NaturalsBackend(), []), 10)
    assert v.verified  # empty rule set
    grow = check_noetherian(mrs(NaturalsBackend(), [(1, 2)]), 10)
    assert grow.status is Status.UNKNOWN


def test_check_noetherian_cycle_witness():
    m = mrs(NaturalsBackend(), [(1, 2), (2, 1)])
    v = check_noetherian(m, 5)
    assert v.refuted
    v.witness.validate(m)
    assert v.witness.start == v.witness.end


def test_check_confluent_examples():
    assert check_confluent(powerset_system()).exact
    v = check_confluent(cancel_pair_system(), 8)
    assert v.verified and v.bound == 8
    assert check_confluent(mrs(NaturalsBackend(), []), 5).verified


def test_check_confluent_refuted_with_peak():
    fb = FreeBackend("abc")
    m = mrs(fb, [(("a",), ("b",)), (("a",), ("c",))])
    v = check_confluent(m, 4)
    assert v.refuted
    assert v.witness.source == ("a",)
    assert {v.witness.left, v.witness.right} == {("b",), ("c",)}


def test_reaches_and_trace():
    m = naturals_mod2()
    res = reaches(m, 4, 0)
    assert res.found and len(res.trace) == 2
    res.trace.validate(m)
    assert reaches(m, 3, 3).found
    single = mrs(FreeBackend("ab"), [((("a", "b")), ())])
    out = reaches(single, ("b", "a"), ())
    assert not out.found and out.definitive


def test_equivalent_certified_valley():
    m = naturals_mod2()
    cert = certify(m, 50)
    res = equivalent(m, 5, 3, certificate=cert)
    assert res.status is Equivalence.YES
    res.trace.validate(m)
    assert res.trace.start == 5 and res.trace.end == 3
    assert equivalent(m, 5, 4, certificate=cert).status is Equivalence.NO


def test_equivalent_uncertified_search():
    m = naturals_mod2()
    res = equivalent(m, 5, 3)
    assert res.status is Equivalence.YES
    res.trace.validate(m)
    no = equivalent(mrs(NaturalsBackend(), []), 1, 2)
    assert no.status is Equivalence.NO


def test_equivalent_agrees_with_components_on_finite_fixture():
    m = powerset_system()
    cert = certify(m)
    classes = connected_component_classes(m)
    cls_of = {}
    for cls in classes:
        for x in cls:
            cls_of[x] = id(cls)
    elems = list(m.backend.elements())
    for a in elems:
        for b in elems:
            expected = cls_of[a] == cls_of[b]
            got = equivalent(m, a, b, certificate=cert).status is Equivalence.YES
            assert got == expected


def test_trace_validation_rejects_tampering():
    m = naturals_mod2()
    _, trace = normal_form(m, 4)
    bad = DerivationTrace(4, 99, trace.steps)
    with pytest.raises(TraceError):
        bad.validate(m)
    step = trace.steps[0]
    forged = TraceStep(step.before, step.rule_index, step.lhs, step.rhs,
                       step.left, 7, step.forward, step.after)
    with pytest.raises(TraceError):
        DerivationTrace(trace.start, trace.end,
                        (forged,) + trace.steps[1:]).validate(m)


def test_trace_stale_rule_reference():
    m = naturals_mod2()
    _, trace = normal_form(m, 4)
    other = mrs(NaturalsBackend(), [(3, 0)])
    with pytest.raises(TraceError, match="stale"):
        trace.validate(other)


def test_trace_context_splice():
    m = naturals_mod2()
    _, trace = normal_form(m, 4)
    shifted = trace.in_context(m.backend, 5, 6)
    shifted.validate(m)
    assert shifted.start == 15 and shifted.end == 11


def test_empty_trace_needs_equal_endpoints():
    with pytest.raises(TraceError):
        DerivationTrace(1, 2, ()).validate(naturals_mod2())
    DerivationTrace(1, 1, ()).validate(naturals_mod2())


def test_g_style_certificate():
    from mrw.presentation import g_of_monoid
    from mrw.fixtures import z2_table

    gp = g_of_monoid(z2_table())
    v = check_noetherian(gp.system, 6)
    assert v.verified and v.exact and "certificate" in v.reason
