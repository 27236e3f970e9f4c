"""The standing example systems used across the test suite and docs."""

from __future__ import annotations

from mrw.backends import FreeBackend, NaturalsBackend, PowersetBackend, TableBackend
from mrw.engine import Mrs, Rule, mrs
from mrw.tables import FiniteMonoid


def naturals_mod2() -> Mrs:
    """(N, +) with the single rule 2 -> 0; presents Z/2Z."""
    return mrs(NaturalsBackend(), [(2, 0)])


def powerset_system() -> Mrs:
    """Subsets of {a,b,c} under union with
    {a} -> {a,c} and {b,c} -> {a,b,c}; five irreducibles."""
    return mrs(
        PowersetBackend(["a", "b", "c"]),
        [(frozenset("a"), frozenset("ac")), (frozenset("bc"), frozenset("abc"))],
    )


def cancel_pair_system() -> Mrs:
    """Free monoid on a, b with ab -> 1 and ba -> 1 (the bicyclic-style
    fixture whose subset {(ab,1)} is coherent)."""
    fb = FreeBackend("ab")
    return mrs(fb, [(("a", "b"), ()), (("b", "a"), ())])


def cancel_pair_coherent_subset():
    return [Rule(("a", "b"), ())]


def non_coherent_system() -> Mrs:
    """Free monoid on a, A, b, B where collapsing by {(aA,1)} breaks
    termination of the residual rules."""
    fb = FreeBackend("aAbB")
    p = fb.parse_element
    return mrs(fb, [(p("aA"), ()), (p("Aa"), p("Bb")), (p("Bb"), ()), (p("bB"), ())])


def non_coherent_subset():
    fb = non_coherent_system().backend
    return [Rule(fb.parse_element("aA"), ())]


def z2_table() -> FiniteMonoid:
    return FiniteMonoid.from_op(("0", "1"), "0",
                                lambda a, b: str((int(a) + int(b)) % 2))


def z3_table() -> FiniteMonoid:
    return FiniteMonoid.from_op(("0", "1", "2"), "0",
                                lambda a, b: str((int(a) + int(b)) % 3))


def z2_system() -> Mrs:
    return mrs(TableBackend(z2_table()), [])


def two_element_system() -> Mrs:
    """Z/2Z on neutral letters e, x with no rules."""
    m = FiniteMonoid(
        ("e", "x"), "e",
        {("e", "e"): "e", ("e", "x"): "x", ("x", "e"): "x", ("x", "x"): "e"},
    )
    return mrs(TableBackend(m), [])


def absorbing_three_table() -> FiniteMonoid:
    """{1, x, 0} with x*x = 0 absorbing."""
    def op(a, b):
        if a == "1":
            return b
        if b == "1":
            return a
        return "0"

    return FiniteMonoid.from_op(("1", "x", "0"), "1", op)


def absorbing_three_system() -> Mrs:
    """The 3-element absorbing monoid with the degenerate rule (0, 0)."""
    return mrs(TableBackend(absorbing_three_table()), [("0", "0")])


def horn_chain_system() -> Mrs:
    """Atoms p, q, r with p |- q and q |- r."""
    from mrw.formats import HornTheorySpec, gen_horn_rules

    spec = HornTheorySpec(
        ("p", "q", "r"),
        [(frozenset(["p"]), frozenset(["q"])), (frozenset(["q"]), frozenset(["r"]))],
    )
    return gen_horn_rules(spec)


def sierpinski_topology():
    from mrw.formats import TopologySpec

    return TopologySpec(("a", "b"),
                        [frozenset(), frozenset(["a"]), frozenset(["a", "b"])])
