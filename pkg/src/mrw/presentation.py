"""The canonical presentation of a finite monoid and the adjunction data
tying it to the monoid of irreducibles: unit, counit, triangle checks, and
the hom-category equivalence at desk scale.

The presentation of M is the free monoid on the non-identity elements with
one rule per multiplication fact: (a (+) b, ab), where the identity embeds
as the empty word.  Degenerate rules with equal sides are kept; the proper
step convention makes them inert.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice, product

from mrw.backends import FreeBackend
from mrw.engine import (
    Bounds,
    DEFAULT_BOUNDS,
    Mrs,
    Refused,
    certify,
    mrs,
    nf,
)
from mrw.irreducibles import (
    IrreducibleMonoid,
    MrsHom,
    check_mrs_hom,
    monoid_of_irreducibles,
    two_cell_exists,
)
from mrw.tables import FiniteMonoid, MonoidHom


@dataclass
class CanonicalPresentation:
    monoid: FiniteMonoid
    system: Mrs
    letter_of: dict  # element name -> letter (identity absent: empty word)

    def nu(self, name):
        """The embedding: identity -> empty word, other elements -> letters."""
        if name == self.monoid.identity:
            return ()
        return (self.letter_of[name],)

    def decode(self, word):
        """Inverse of nu on words of length <= 1."""
        if word == ():
            return self.monoid.identity
        if len(word) == 1:
            for name, letter in self.letter_of.items():
                if letter == word[0]:
                    return name
        raise Refused(f"word {word!r} is not in the image of the embedding")


def g_of_monoid(m: FiniteMonoid, letter_of=None) -> CanonicalPresentation:
    """G(M): free monoid on M minus the identity, with the multiplication
    table as rules.  letter_of optionally renames elements to fresh letters."""
    if letter_of is None:
        letter_of = {name: name for name in m.non_identity()}
    backend = FreeBackend(tuple(letter_of[name] for name in m.non_identity()))
    gp = CanonicalPresentation(m, None, dict(letter_of))
    pairs = []
    seen = set()
    for a in m.names:
        for b in m.names:
            rule = (gp.nu(a) + gp.nu(b), gp.nu(m.op(a, b)))
            if rule not in seen:
                seen.add(rule)
                pairs.append(rule)
    gp.system = mrs(backend, pairs)
    return gp


def naive_presentation(m: FiniteMonoid) -> Mrs:
    """The variant that keeps the identity as a letter.  Presents the wrong
    monoid (one extra irreducible: the empty word); kept as a regression
    against quietly dropping the identity-removal step."""
    backend = FreeBackend(m.names)
    pairs = []
    seen = set()
    for a in m.names:
        for b in m.names:
            rule = ((a, b), (m.op(a, b),))
            if rule not in seen:
                seen.add(rule)
                pairs.append(rule)
    return mrs(backend, pairs)


def g_of_hom(phi: MonoidHom, gsrc: CanonicalPresentation,
             gtgt: CanonicalPresentation,
             bounds: Bounds = DEFAULT_BOUNDS) -> MrsHom:
    """G on homomorphisms: letterwise image, identity images vanishing into
    the empty word."""
    if phi.law_violation() is not None:
        raise Refused("g_of_hom needs a verified monoid homomorphism")
    if phi.source is not gsrc.monoid and phi.source != gsrc.monoid:
        raise Refused("homomorphism source does not match the presentation")
    images = {
        gsrc.letter_of[name]: gtgt.nu(phi(name)) for name in gsrc.monoid.non_identity()
    }
    out = MrsHom.from_letters(gsrc.system, gtgt.system, images)
    chk = check_mrs_hom(out, bounds)
    if chk.ok is not True:
        raise Refused(f"G(phi) failed verification: {chk.failure}")
    return out


def counit(system: Mrs, irr: IrreducibleMonoid,
           presentation: CanonicalPresentation | None = None,
           bounds: Bounds = DEFAULT_BOUNDS):
    """The evaluation homomorphism from the canonical presentation of I(A)
    back to A: a word of irreducibles maps to their product.

    Returns (presentation of I(A), MrsHom).  Rule compatibility is verified
    and the per-rule reduction traces are kept.
    """
    gp = presentation or g_of_monoid(irr.monoid)
    images = {
        gp.letter_of[name]: irr.element(name) for name in irr.monoid.non_identity()
    }
    hom = MrsHom.from_letters(gp.system, system, images)
    chk = check_mrs_hom(hom, bounds)
    if chk.ok is not True:
        raise Refused(f"counit failed verification: {chk.failure}")
    return gp, hom


def check_unit_identity(m: FiniteMonoid, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    """IG(M) equals M on the nose, under the letter embedding."""
    gp = g_of_monoid(m)
    igm = monoid_of_irreducibles(gp.system, max(bounds.size_bound, 3), bounds)
    if len(igm.monoid) != len(m):
        return False
    renaming = {}
    for word in igm.elements:
        name = igm.names[word]
        renaming[name] = gp.decode(word)
    try:
        renamed = igm.monoid.rename(renaming)
    except Exception:
        return False
    return renamed == m


def check_triangles(system: Mrs, m: FiniteMonoid, word_bound=6,
                    bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    """Both triangle identities on object components.

    (1) I(counit_A) after the unit is the identity on I(A);
    (2) counit_{G(M)} after G(unit_M) fixes every word of G(M) up to
        word_bound.
    """
    irr = monoid_of_irreducibles(system, bounds.size_bound, bounds)
    gp, eps = counit(system, irr, bounds=bounds)
    for name in irr.monoid.names:
        word = gp.nu(name)
        image = nf(system, eps(word), bounds.steps, bounds)
        if image != irr.element(name):
            return False

    gpm = g_of_monoid(m)
    igm = monoid_of_irreducibles(gpm.system, max(bounds.size_bound, 3), bounds)
    gp_igm, eps_gm = counit(gpm.system, igm, bounds=bounds)
    eta = MonoidHom(
        m, igm.monoid,
        {name: igm.names[gpm.nu(name)] for name in m.names},
    )
    g_eta = g_of_hom(eta, gpm, gp_igm, bounds)
    for word in gpm.system.backend.elements(word_bound):
        if eps_gm(g_eta(word)) != word:
            return False
    return True


@dataclass
class HomEquivalenceReport:
    monoid_homs: int
    system_homs: int
    two_cell_classes: int
    bijective: bool

    @property
    def ok(self):
        return self.bijective


def check_hom_equivalence(m: FiniteMonoid, system: Mrs,
                          bounds: Bounds = DEFAULT_BOUNDS,
                          max_m=4, max_a=8) -> HomEquivalenceReport:
    """hom(G(M), A) modulo 2-cells versus hom(M, I(A)), both by brute force.

    Enumerates system homomorphisms over letter images with rule filtering,
    groups them by 2-isomorphism, and checks that inducing a monoid map is a
    bijection from the classes onto the monoid homomorphisms.
    """
    if not system.backend.finite:
        raise Refused("hom equivalence enumeration needs a finite carrier")
    carrier = list(system.backend.elements(None))
    if len(m) > max_m or len(carrier) > max_a:
        raise Refused(
            f"hom enumeration limited to |M| <= {max_m}, |A| <= {max_a}"
        )
    cert = certify(system, bounds.size_bound, bounds)
    irr = monoid_of_irreducibles(system, bounds.size_bound, bounds,
                                 certificate=cert)
    from mrw.tables import all_homomorphisms

    monoid_homs = list(all_homomorphisms(m, irr.monoid))

    gp = g_of_monoid(m)
    letters = gp.system.backend.letters
    sys_homs = []
    for images in product(carrier, repeat=len(letters)):
        cand = MrsHom.from_letters(gp.system, system, dict(zip(letters, images)))
        if check_mrs_hom(cand, bounds).ok is True:
            sys_homs.append(cand)

    classes = []
    for h in sys_homs:
        for cls in classes:
            if two_cell_exists(cls[0], h, bounds, cert) is True:
                cls.append(h)
                break
        else:
            classes.append([h])

    induced = set()
    for cls in classes:
        rep = cls[0]
        mapping = {m.identity: irr.monoid.identity}
        for name in m.non_identity():
            mapping[name] = irr.project(rep(gp.nu(name)), bounds)
        cand = MonoidHom(m, irr.monoid, mapping, check=False)
        if cand.law_violation() is not None:
            return HomEquivalenceReport(len(monoid_homs), len(sys_homs),
                                        len(classes), False)
        induced.add(cand)

    bijective = len(induced) == len(classes) and induced == set(monoid_homs)
    return HomEquivalenceReport(len(monoid_homs), len(sys_homs), len(classes),
                                bijective)


def counit_naturality(phi: MrsHom, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    """The counit square for phi commutes up to the unique 2-cell: the two
    composites around it agree pointwise up to <->* on generators."""
    ia = monoid_of_irreducibles(phi.source, bounds.size_bound, bounds)
    ib = monoid_of_irreducibles(phi.target, bounds.size_bound, bounds)
    gpa, eps_a = counit(phi.source, ia, bounds=bounds)
    gpb, eps_b = counit(phi.target, ib, bounds=bounds)
    from mrw.irreducibles import induced_hom

    phi_sharp = induced_hom(phi, ia, ib, bounds)
    gi_phi = g_of_hom(phi_sharp, gpa, gpb, bounds)
    left = phi.compose(eps_a)        # phi after eps_A
    right = eps_b.compose(gi_phi)    # eps_B after GI(phi)
    cert_b = certify(phi.target, bounds.size_bound, bounds)
    return two_cell_exists(left, right, bounds, cert_b) is True
