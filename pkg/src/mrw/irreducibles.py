"""The passage from rewriting systems to monoids: irreducible elements, the
monoid of irreducibles, system homomorphisms, induced maps, and 2-cells.

The monoid of irreducibles is only materialized as a table when the
irreducible set is finite and fully enumerated: always on finite carriers,
and on infinite carriers only under a caller-accepted completeness bound
with a clean frontier (no irreducible at the maximal enumerated size).
Everything else stays a lazy normal-form oracle via the engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from mrw.backends import FreeBackend, NaturalsBackend
from mrw.engine import (
    Bounds,
    DEFAULT_BOUNDS,
    EngineError,
    Equivalence,
    Mrs,
    Refused,
    SystemCertificate,
    certify,
    connected_component_classes,
    equivalent,
    is_irreducible,
    nf,
    reaches,
)
from mrw.tables import FiniteMonoid, MonoidHom


@dataclass
class IrreducibleSet:
    elements: list
    exhaustive: bool      # full carrier scanned
    bound: int | None     # size bound used when not exhaustive
    frontier_clear: bool  # no irreducible at the top enumerated size


def irreducible_elements(system: Mrs, size_bound=None,
                         bounds: Bounds = DEFAULT_BOUNDS) -> IrreducibleSet:
    size_bound = bounds.size_bound if size_bound is None else size_bound
    out = []
    unknown = False
    for x in system.backend.elements(size_bound):
        verdict = is_irreducible(system, x, bounds)
        if verdict is None:
            unknown = True
        elif verdict:
            out.append(x)
    if system.backend.finite:
        return IrreducibleSet(out, exhaustive=not unknown, bound=None,
                              frontier_clear=True)
    top = max((system.backend.size(x) for x in out), default=-1)
    return IrreducibleSet(out, exhaustive=False, bound=size_bound,
                          frontier_clear=(not unknown) and top < size_bound)


class IrreducibleMonoid:
    """I(A) materialized: a finite table whose elements name irreducibles.

    Keeps the element <-> name correspondence so homomorphisms and the
    counit can move between the table and the ambient carrier.
    """

    def __init__(self, system: Mrs, elements, certificate: SystemCertificate,
                 bounds: Bounds = DEFAULT_BOUNDS):
        self.system = system
        backend = system.backend
        self.elements = sorted(elements, key=backend.canon_key)
        self.names = {x: backend.format_element(x) for x in self.elements}
        self.by_name = {n: x for x, n in self.names.items()}
        if len(self.by_name) != len(self.elements):
            raise Refused("irreducible elements do not have distinct printed names")
        ident = nf(system, backend.identity(), bounds.steps, bounds)
        table = {}
        for x in self.elements:
            for y in self.elements:
                table[(self.names[x], self.names[y])] = self.names[
                    nf(system, backend.op(x, y), bounds.steps, bounds)
                ]
        self.monoid = FiniteMonoid(
            tuple(self.names[x] for x in self.elements), self.names[ident], table
        )
        self.certificate = certificate

    def project(self, a, bounds: Bounds = DEFAULT_BOUNDS):
        """Name of the irreducible that a reduces to."""
        return self.names[nf(self.system, a, bounds.steps, bounds)]

    def element(self, name):
        return self.by_name[name]


def monoid_of_irreducibles(system: Mrs, size_bound=None,
                           bounds: Bounds = DEFAULT_BOUNDS,
                           certificate: SystemCertificate | None = None) -> IrreducibleMonoid:
    """The monoid (irreducibles, (x, y) -> nf(x*y)) as an explicit table.

    Refuses non-certified systems and truncated irreducible sets; on
    infinite carriers the caller's size bound is the completeness assertion
    and a dirty frontier (an irreducible at the top size) is rejected.
    """
    size_bound = bounds.size_bound if size_bound is None else size_bound
    cert = certificate or certify(system, size_bound, bounds)
    if not cert.convergent:
        raise Refused(
            "monoid of irreducibles needs a Noetherian confluent system; "
            f"got noetherian={cert.noetherian.describe()}, "
            f"confluent={cert.confluent.describe()}"
        )
    irr = irreducible_elements(system, size_bound, bounds)
    if not system.backend.finite:
        if not irr.frontier_clear:
            raise Refused(
                f"irreducible set is not provably complete at size bound {size_bound}: "
                "irreducibles persist at the frontier"
            )
    elif not irr.exhaustive:
        raise Refused("irreducible enumeration was truncated on a finite carrier")
    return IrreducibleMonoid(system, irr.elements, cert, bounds)


class QuotientMonoid:
    """M / <->* computed by brute-force connected components of the one-step
    graph; the independent oracle for the monoid of irreducibles."""

    def __init__(self, system: Mrs):
        if not system.backend.finite:
            raise Refused("quotient monoid needs a finite carrier")
        self.system = system
        backend = system.backend
        classes = connected_component_classes(system)
        self.class_of = {}
        reps = []
        for cls in classes:
            rep = min(cls, key=backend.canon_key)
            reps.append(rep)
            for x in cls:
                self.class_of[x] = rep
        reps.sort(key=backend.canon_key)
        self.reps = reps
        names = {r: backend.format_element(r) for r in reps}
        # well-definedness of the induced product, checked over every pair of
        # representatives of every pair of classes
        table = {}
        members = {}
        for x, r in self.class_of.items():
            members.setdefault(r, []).append(x)
        for r1 in reps:
            for r2 in reps:
                results = {
                    self.class_of[backend.op(x, y)]
                    for x in members[r1]
                    for y in members[r2]
                }
                if len(results) != 1:
                    raise EngineError(
                        "induced product is not well defined; <->* is not a congruence "
                        "(this indicates an engine bug)"
                    )
                table[(names[r1], names[r2])] = names[results.pop()]
        ident = self.class_of[backend.identity()]
        self.monoid = FiniteMonoid(tuple(names[r] for r in reps), names[ident], table)


def quotient_monoid(system: Mrs) -> QuotientMonoid:
    return QuotientMonoid(system)


# ---------------------------------------------------------------------------
# homomorphisms of rewriting systems

class MrsHom:
    """A monoid homomorphism between carriers that sends every rule (u, v)
    to a derivable reduction phi(u) ->* phi(v) in the target.

    The underlying map is an explicit table on finite carriers, a letter
    table for free-monoid sources, or a single generator image for the
    naturals (extended homomorphically).
    """

    def __init__(self, source: Mrs, target: Mrs, kind, data):
        if kind not in ("table", "letters", "generator"):
            raise Refused(f"unknown map kind {kind!r}")
        self.source = source
        self.target = target
        self.kind = kind
        self.data = data

    @classmethod
    def from_table(cls, source, target, mapping):
        return cls(source, target, "table", dict(mapping))

    @classmethod
    def from_letters(cls, source, target, letter_images):
        if not isinstance(source.backend, FreeBackend):
            raise Refused("letter maps need a free-monoid source")
        missing = [l for l in source.backend.letters if l not in letter_images]
        if missing:
            raise Refused(f"letter map not total: missing {missing}")
        return cls(source, target, "letters", dict(letter_images))

    @classmethod
    def from_generator(cls, source, target, image):
        if not isinstance(source.backend, NaturalsBackend):
            raise Refused("generator maps need the naturals as source")
        return cls(source, target, "generator", image)

    @classmethod
    def identity(cls, system: Mrs):
        if isinstance(system.backend, FreeBackend):
            return cls.from_letters(system, system,
                                    {l: (l,) for l in system.backend.letters})
        if isinstance(system.backend, NaturalsBackend):
            return cls.from_generator(system, system, 1)
        if system.backend.finite:
            return cls.from_table(system, system,
                                  {x: x for x in system.backend.elements(None)})
        raise Refused("no identity-map representation for this backend")

    def __call__(self, x):
        self.source.backend.check_element(x)
        tb = self.target.backend
        if self.kind == "table":
            return self.data[x]
        if self.kind == "letters":
            return tb.product([self.data[l] for l in x])
        # generator: x is a natural number
        return tb.product([self.data] * x)

    def compose(self, inner: "MrsHom") -> "MrsHom":
        """self after inner."""
        if self.kind == "table" and inner.kind == "table":
            return MrsHom.from_table(
                inner.source, self.target,
                {x: self(inner.data[x]) for x in inner.data},
            )
        if inner.kind == "letters":
            return MrsHom.from_letters(
                inner.source, self.target,
                {l: self(inner.data[l]) for l in inner.data},
            )
        if inner.kind == "generator":
            return MrsHom.from_generator(inner.source, self.target, self(inner.data))
        # table after letters/generator cannot arise: table sources are finite
        raise Refused(f"cannot compose map kinds {self.kind!r} after {inner.kind!r}")

    def generator_elements(self):
        """Elements generating the source; pointwise checks on these suffice
        for congruence-closed properties."""
        if self.kind == "letters":
            return [(l,) for l in self.source.backend.letters]
        if self.kind == "generator":
            return [1]
        return list(self.source.backend.elements(None))

    def sample_pairs(self, bounds: Bounds):
        gens = self.generator_elements()
        backend = self.source.backend
        pairs = []
        for x in gens:
            for y in gens:
                pairs.append((x, y))
                pairs.append((backend.op(x, y), x))
        return pairs[: bounds.node_budget]


@dataclass
class HomCheck:
    ok: bool | None           # None = unknown within budget
    failure: str = ""
    rule_traces: dict = None  # rule index -> DerivationTrace


def check_mrs_hom(hom: MrsHom, bounds: Bounds = DEFAULT_BOUNDS) -> HomCheck:
    """Verify the homomorphism law and per-rule reachability, keeping the
    reachability traces as certificates."""
    src, tgt = hom.source, hom.target
    sb, tb = src.backend, tgt.backend
    if hom.kind == "table":
        items = list(sb.elements(None))
        if set(hom.data) != set(items):
            return HomCheck(False, "map is not total on the carrier")
        if hom(sb.identity()) != tb.identity():
            return HomCheck(False, "identity is not preserved")
        for x in items:
            for y in items:
                if hom(sb.op(x, y)) != tb.op(hom(x), hom(y)):
                    return HomCheck(
                        False,
                        f"law fails at ({sb.format_element(x)}, {sb.format_element(y)})",
                    )
    else:
        # homomorphic by construction; spot-check a few products anyway
        for x, y in hom.sample_pairs(bounds)[:64]:
            if hom(sb.op(x, y)) != tb.op(hom(x), hom(y)):
                return HomCheck(False, "law fails on a sampled pair")
    traces = {}
    for i, rule in enumerate(src.rules):
        res = reaches(tgt, hom(rule.lhs), hom(rule.rhs), bounds)
        if res.found:
            traces[i] = res.trace
        elif res.definitive:
            return HomCheck(
                False,
                f"rule {i}: phi(lhs) does not reach phi(rhs) in the target",
            )
        else:
            return HomCheck(
                None,
                f"rule {i}: reachability unknown within budget",
            )
    return HomCheck(True, rule_traces=traces)


class InternalConsistencyError(EngineError):
    """A law the theory guarantees failed; indicates an engine bug."""


def induced_hom(hom: MrsHom, source_irr: IrreducibleMonoid,
                target_irr: IrreducibleMonoid,
                bounds: Bounds = DEFAULT_BOUNDS) -> MonoidHom:
    """The table map u -> nf(phi(u)) between the irreducible monoids."""
    mapping = {}
    for x in source_irr.elements:
        mapping[source_irr.names[x]] = target_irr.project(hom(x), bounds)
    out = MonoidHom(source_irr.monoid, target_irr.monoid, mapping, check=False)
    bad = out.law_violation()
    if bad is not None:
        raise InternalConsistencyError(
            f"induced map is not a homomorphism at {bad}; the irreducible-monoid "
            "construction is broken"
        )
    return out


def two_cell_exists(f: MrsHom, g: MrsHom, bounds: Bounds = DEFAULT_BOUNDS,
                    certificate: SystemCertificate | None = None):
    """Whether the unique 2-cell f => g exists: f(a) <->* g(a) pointwise.

    For free sources the check runs on letters only (sound because <->* is a
    congruence).  Returns True / False / None for unknown-within-budget.
    """
    if f.source is not g.source or f.target is not g.target:
        if not (f.source.backend == g.source.backend
                and set(f.source.rule_pairs()) == set(g.source.rule_pairs())
                and f.target.backend == g.target.backend
                and set(f.target.rule_pairs()) == set(g.target.rule_pairs())):
            raise Refused("2-cells only exist between parallel homomorphisms")
    unknown = False
    for x in f.generator_elements():
        res = equivalent(f.target, f(x), g(x), bounds, certificate)
        if res.status is Equivalence.NO:
            return False
        if res.status is Equivalence.UNKNOWN:
            unknown = True
    return None if unknown else True
