"""Factoring a map through an epimorphism or a monomorphism, and splitting."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, ConsistencyError, HypothesisError, PreconditionError, PropertyFalsified
from .exact import require_short_exact, witness_holds
from .hom import enumerate_hom
from .module import (
    ModuleMorphism,
    absorbers,
    compose,
    identity,
    injection_first,
    is_isomorphism,
    product_module,
    projections,
    require_morphism,
    validate_module_morphism,
)


def check_unique(h: ModuleMorphism, equation, allowed, budget=None) -> str:
    """Confirm ``h`` is the only T-linear map satisfying ``equation``.

    The full Hom set is filtered when it fits the budget.  Otherwise the
    search is restricted to ``allowed``, the values the equation permits,
    which is still exhaustive over the solutions.  Only when both are too
    large is uniqueness left unchecked, and the report says so.
    """
    try:
        found = [x for x in enumerate_hom(h.dom, h.cod, budget) if equation(x)]
        how = "verified"
    except BudgetExceeded:
        try:
            found = [x for x in enumerate_hom(h.dom, h.cod, budget, allowed) if equation(x)]
            how = "verified (restricted search)"
        except BudgetExceeded:
            return "not checked (budget)"
    if len(found) != 1 or found[0].map != h.map:
        raise PropertyFalsified(f"{len(found)} maps satisfy the defining equation, expected exactly one")
    return how


@dataclass(frozen=True, eq=False)
class FactorResult:
    h: ModuleMorphism
    uniqueness: str
    checks: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.checks.values())


def factor_through_epi(f: ModuleMorphism, g: ModuleMorphism, s: int, t: int, budget=None) -> FactorResult:
    """The unique ``h`` with ``f = h g`` for ``g`` onto, given ``ker_s g`` inside ``ker_t f``."""
    require_morphism(f, "f")
    require_morphism(g, "g")
    if f.dom != g.dom:
        raise PreconditionError("factor", "f and g need a common domain")
    if not g.is_surjective():
        raise PreconditionError("factor", "g is not surjective")
    if s not in g.image or t not in f.image:
        raise PreconditionError("factor", "s must lie in Im g and t in Im f")
    for m in g.fiber(s):
        if f(m) != t:
            raise HypothesisError("factor", f"ker_{s} g is not inside ker_{t} f: f({m}) = {f(m)}", m)

    table = [None] * g.cod.size
    for m in range(g.dom.size):
        v = table[g(m)]
        if v is None:
            table[g(m)] = f(m)
        elif v != f(m):
            raise ConsistencyError(f"h ill-defined at {g(m)}: preimages give {v} and {f(m)}")
    h = ModuleMorphism(g.cod, f.cod, tuple(table))
    report = validate_module_morphism(h)
    if not report:
        raise PropertyFalsified(f"induced h is not T-linear: {report.describe()}", report.witness)

    allowed = [{f(m) for m in g.fiber(x)} for x in range(g.cod.size)]
    ker_t_h = set(h.fiber(t))
    g_ker = {g(m) for m in f.fiber(t)}
    checks = {
        "f_equals_hg": compose(h, g).map == f.map,
        "ker_t_h_is_g_of_ker_t_f": ker_t_h == g_ker,
        "image_h_is_image_f": h.image == f.image,
        "epic_iff_f_epic": h.is_surjective() == f.is_surjective(),
    }
    # monic iff ker_{m'} g = ker_t f where h(m') = t
    m_prime = h.fiber(t)[0]
    checks["monic_iff_kernels_match"] = h.is_injective() == (set(g.fiber(m_prime)) == set(f.fiber(t)))
    unique = check_unique(h, lambda x: compose(x, g).map == f.map, allowed, budget)
    return FactorResult(h, unique, checks)


def factor_through_mono(f: ModuleMorphism, g: ModuleMorphism, budget=None) -> FactorResult:
    """The unique ``h`` with ``f = g h`` for ``g`` one-to-one and ``Im f`` inside ``Im g``."""
    require_morphism(f, "f")
    require_morphism(g, "g")
    if f.cod != g.cod:
        raise PreconditionError("factor", "f and g need a common codomain")
    if not g.is_injective():
        raise PreconditionError("factor", "g is not injective")
    preimage = {v: x for x, v in enumerate(g.map)}
    for m in range(f.dom.size):
        if f(m) not in preimage:
            raise HypothesisError("factor", f"Im f is not inside Im g: f({m}) = {f(m)}", m)
    h = ModuleMorphism(f.dom, g.dom, tuple(preimage[f(m)] for m in range(f.dom.size)))
    report = validate_module_morphism(h)
    if not report:
        raise PropertyFalsified(f"induced h is not T-linear: {report.describe()}", report.witness)

    allowed = [{preimage[f(m)]} for m in range(f.dom.size)]
    im_f = set(f.image)
    checks = {
        "f_equals_gh": compose(g, h).map == f.map,
        "kernels_agree": all(set(h.fiber(h(m))) == set(f.fiber(f(m))) for m in range(f.dom.size)),
        "image_h_is_preimage_of_image_f": set(h.image) == {x for x in range(g.dom.size) if g(x) in im_f},
        "epic_iff_images_equal": h.is_surjective() == (im_f == set(g.image)),
        "monic_iff_f_monic": h.is_injective() == f.is_injective(),
    }
    unique = check_unique(h, lambda x: compose(g, x).map == f.map, allowed, budget)
    return FactorResult(h, unique, checks)


@dataclass(frozen=True, eq=False)
class SplittingReport:
    e2: int
    section: ModuleMorphism | None
    retraction: ModuleMorphism | None
    product_iso: ModuleMorphism | None
    phi_from_section: ModuleMorphism | None
    phi_from_retraction: ModuleMorphism | None
    searched: bool = True

    @property
    def has_section(self) -> bool:
        return self.section is not None

    @property
    def has_retraction(self) -> bool:
        return self.retraction is not None

    @property
    def has_product_iso(self) -> bool:
        return self.product_iso is not None

    @property
    def agree(self) -> bool:
        return self.has_section == self.has_retraction == self.has_product_iso

    @property
    def split(self) -> bool:
        return self.agree and self.has_section

    def to_dict(self) -> dict:
        def table(m):
            return None if m is None else list(m.map)

        return {
            "e2": self.e2,
            "has_section": self.has_section,
            "has_retraction": self.has_retraction,
            "has_product_iso": self.has_product_iso,
            "section": table(self.section),
            "retraction": table(self.retraction),
            "product_iso": table(self.product_iso),
            "agree": self.agree,
        }


def _commutes_with_product(phi: ModuleMorphism, f, g, tau1, pi2) -> bool:
    return compose(phi, tau1).map == f.map and compose(g, phi).map == pi2.map


def splitting(f: ModuleMorphism, g: ModuleMorphism, e2: int = None, budget=None) -> SplittingReport:
    """Search sections, retractions and product isomorphisms independently.

    ``phi(m1, m2) = [f(m1), h(e2), h(m2)]`` is built from a section ``h`` and
    ``psi(m) = (k(m), g(m))`` from a retraction ``k``; each must come out an
    isomorphism compatible with ``m1 -> (m1, e2)`` and the second projection.
    """
    report = require_short_exact(f, g)
    m1, m, m2 = f.dom, f.cod, g.cod
    if e2 is None:
        e2 = report.witness.element
    if not witness_holds(f, g, e2):
        raise PreconditionError("splitting", f"Im f is not ker_{e2} g", e2)
    if e2 not in absorbers(m2):
        raise PreconditionError("splitting", f"e2 = {e2} is not an absorber of M2", e2)
    if not absorbers(m1):
        raise PreconditionError("splitting", "Abs(M1) is empty")

    prod = product_module(m1, m2)
    tau1 = injection_first(m1, m2, e2, prod)
    _, pi2 = projections(m1, m2, prod)

    sections = enumerate_hom(m2, m, budget, [g.fiber(x) for x in range(m2.size)])
    pre_f = {v: x for x, v in enumerate(f.map)}
    retractions = enumerate_hom(
        m, m1, budget, [(pre_f[x],) if x in pre_f else range(m1.size) for x in range(m.size)]
    )
    # phi(m1, e2) = f(m1) and g(phi(m1, m2)) = m2 fix or restrict every value
    allowed = []
    for p in range(prod.size):
        a, b = divmod(p, m2.size)
        allowed.append((f(a),) if b == e2 else g.fiber(b))
    isos = [
        phi for phi in enumerate_hom(prod, m, budget, allowed)
        if phi.is_bijective() and _commutes_with_product(phi, f, g, tau1, pi2)
    ]

    section = sections.morphisms[0] if len(sections) else None
    retraction = retractions.morphisms[0] if len(retractions) else None
    phi_h = phi_k = None
    if section is not None:
        h = section
        phi_h = ModuleMorphism(
            prod, m, tuple(m.op(f(p // m2.size), h(e2), h(p % m2.size)) for p in range(prod.size))
        )
        if not (is_isomorphism(phi_h) and _commutes_with_product(phi_h, f, g, tau1, pi2)):
            raise PropertyFalsified(f"phi built from section {list(h.map)} is not a compatible isomorphism")
    if retraction is not None:
        k = retraction
        psi = ModuleMorphism(m, prod, tuple(k(x) * m2.size + g(x) for x in range(m.size)))
        if not is_isomorphism(psi):
            raise PropertyFalsified(f"psi built from retraction {list(k.map)} is not an isomorphism")
        inverse = [0] * prod.size
        for x, p in enumerate(psi.map):
            inverse[p] = x
        phi_k = ModuleMorphism(prod, m, tuple(inverse))
        if not _commutes_with_product(phi_k, f, g, tau1, pi2):
            raise PropertyFalsified("inverse of psi does not commute with the product sequence")

    for name, mor, check in (("section", section, lambda h: compose(g, h) == identity(m2)),
                             ("retraction", retraction, lambda k: compose(k, f) == identity(m1))):
        if mor is not None and not check(mor):
            raise ConsistencyError(f"{name} search returned a map failing its equation")

    return SplittingReport(e2, section, retraction, isos[0] if isos else None, phi_h, phi_k)
