"""Exactness in the truss sense and the sequence-level constructions.

A pair ``M -f-> N -g-> P`` is exact when ``Im f`` equals one fibre of ``g``;
the fibre's base point is the witness.  Nothing here takes exactness on
trust: every claim is re-established by scanning sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConsistencyError, HypothesisError, PreconditionError, PropertyFalsified, StructureError
from .hom import AbsImage, HomSet, abs_morphism, abs_object, enumerate_hom, hom_module
from .module import (
    FiniteModule,
    ModuleMorphism,
    absorbers,
    compose,
    image,
    module_of_ring_module,
    morphism_of_ring_morphism,
    quotient_module,
    require_morphism,
    submodule,
    validate_module_morphism,
)
from .ringmod import RingModuleMorphism, ring_exactness
from .truss import FiniteRing


@dataclass(frozen=True)
class ExactnessWitness:
    """``Im f = ker_element g``; ``element`` lives in the codomain of ``g``."""

    position: object
    element: int


def check_chain(f: ModuleMorphism, g: ModuleMorphism):
    if not (f.cod is g.dom or f.cod == g.dom):
        raise StructureError(f"chaining mismatch: cod of first map (size {f.cod.size}) is not dom of second (size {g.dom.size})")


def is_exact_at(f: ModuleMorphism, g: ModuleMorphism, position=None) -> ExactnessWitness | None:
    """First ``e`` in ``Im g`` (ascending) with ``g^-1(e) = Im f``, or ``None``."""
    check_chain(f, g)
    im_f = set(f.image)
    for e in g.image:
        if set(g.fiber(e)) == im_f:
            return ExactnessWitness(position, e)
    return None


def witness_holds(f: ModuleMorphism, g: ModuleMorphism, e: int) -> bool:
    """Independent re-check of a witness, element by element."""
    if e not in g.map:
        return False
    in_image = [False] * f.cod.size
    for x in f.map:
        in_image[x] = True
    return all(in_image[n] == (g(n) == e) for n in range(g.dom.size))


@dataclass(frozen=True, eq=False)
class ShortExactReport:
    """Two independent verdicts on ``* -> M -f-> N -g-> P -> *``.

    ``verdict_a``: exact at N, f injective, g surjective.
    ``verdict_b``: f injective and the canonical map ``N/Im f -> P``
    (class of n to g(n)) is a well-defined T-linear bijection.
    """

    verdict_a: bool
    verdict_b: bool
    witness: ExactnessWitness | None
    f_injective: bool
    g_surjective: bool
    canonical_iso: ModuleMorphism | None

    @property
    def agree(self) -> bool:
        return self.verdict_a == self.verdict_b

    @property
    def exact(self) -> bool:
        if not self.agree:
            raise ConsistencyError("short-exactness verdicts disagree")
        return self.verdict_a

    def __bool__(self):
        return self.exact

    def to_dict(self) -> dict:
        return {
            "verdict_a": self.verdict_a,
            "verdict_b": self.verdict_b,
            "witness": None if self.witness is None else self.witness.element,
            "f_injective": self.f_injective,
            "g_surjective": self.g_surjective,
        }


def canonical_quotient_map(f: ModuleMorphism, g: ModuleMorphism):
    """``N/Im f -> P``, class of ``n`` to ``g(n)``; ``None`` when not well defined."""
    q = quotient_module(f.cod, image(f))
    table = []
    for cls in q.classes:
        values = {g(n) for n in cls}
        if len(values) != 1:
            return q, None
        table.append(values.pop())
    return q, ModuleMorphism(q.module, g.cod, tuple(table))


def is_short_exact(f: ModuleMorphism, g: ModuleMorphism) -> ShortExactReport:
    check_chain(f, g)
    require_morphism(f, "f")
    require_morphism(g, "g")
    witness = is_exact_at(f, g, "middle")
    f_inj, g_surj = f.is_injective(), g.is_surjective()
    verdict_a = witness is not None and f_inj and g_surj

    _, canonical = canonical_quotient_map(f, g)
    iso_ok = (
        canonical is not None
        and canonical.is_bijective()
        and bool(validate_module_morphism(canonical))
    )
    report = ShortExactReport(verdict_a, f_inj and iso_ok, witness, f_inj, g_surj, canonical if iso_ok else None)
    if not report.agree:
        raise ConsistencyError(f"short-exactness verdicts disagree: {report.to_dict()}")
    return report


def require_short_exact(f, g, name="sequence") -> ShortExactReport:
    report = is_short_exact(f, g)
    if not report.exact:
        raise PreconditionError(name, "not short exact", report.to_dict())
    return report


@dataclass(frozen=True, eq=False)
class Sequence:
    modules: tuple[FiniteModule, ...]
    maps: tuple[ModuleMorphism, ...]
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.maps) != len(self.modules) - 1:
            raise StructureError("a sequence of k modules needs k-1 maps")
        for i, f in enumerate(self.maps):
            if not (f.dom == self.modules[i] and f.cod == self.modules[i + 1]):
                raise StructureError(f"map {i} does not connect modules {i} and {i + 1}")


def splice(f: ModuleMorphism, g: ModuleMorphism, alpha: ModuleMorphism, beta: ModuleMorphism) -> Sequence:
    """Join ``X -> Y -> Z`` and ``Z -> A -> B`` into ``X -> Y -> A -> B`` via ``alpha g``."""
    require_short_exact(f, g, "first sequence")
    require_short_exact(alpha, beta, "second sequence")
    check_chain(g, alpha)
    middle = compose(alpha, g)
    at_y = is_exact_at(f, middle, 1)
    at_a = is_exact_at(middle, beta, 2)
    if at_y is None or at_a is None:
        raise PropertyFalsified(f"spliced sequence not exact (at Y: {at_y}, at A: {at_a})")
    return Sequence((f.dom, f.cod, alpha.cod, beta.cod), (f, middle, beta), {1: at_y.element, 2: at_a.element})


def abs_sequence(m: FiniteModule):
    """``* -> Abs(M) -> M -> M/Abs(M) -> *`` with its short-exactness report."""
    abs_m = absorbers(m)
    if not abs_m:
        raise PreconditionError("abs_sequence", "Abs(M) is empty")
    sub = submodule(m, abs_m)
    q = quotient_module(m, sub)
    f, g = sub.inclusion, q.projection
    report = is_short_exact(f, g)
    if not report.exact:
        raise PropertyFalsified("Abs(M) -> M -> M/Abs(M) is not short exact", report.to_dict())
    return f, g, report


def t_functor_ses(f: RingModuleMorphism, g: RingModuleMorphism, truss=None):
    """Apply ``T`` to an R-module short exact sequence and re-verify it over ``T(R)``."""
    checks = ring_exactness(f, g)
    if not all(checks.values()):
        bad = [k for k, v in checks.items() if not v]
        raise PreconditionError("ring sequence", f"not a short exact sequence of R-modules ({', '.join(bad)})")
    a = module_of_ring_module(f.dom, truss)
    b = module_of_ring_module(f.cod, a.truss)
    c = module_of_ring_module(g.cod, a.truss)
    tf = morphism_of_ring_morphism(f, a, b)
    tg = morphism_of_ring_morphism(g, b, c)
    report = is_short_exact(tf, tg)
    if not report.exact:
        raise PropertyFalsified("T-image of a short exact sequence is not short exact", report.to_dict())
    if report.witness.element != g.cod.zero:
        raise ConsistencyError(f"witness {report.witness.element} is not the zero {g.cod.zero}")
    return tf, tg, report


@dataclass(frozen=True, eq=False)
class AbsExactResult:
    f_abs: RingModuleMorphism
    g_abs: RingModuleMorphism
    images: tuple[AbsImage, AbsImage, AbsImage]
    f_injective: bool
    g_surjective: bool
    image_is_kernel: bool

    @property
    def exact(self) -> bool:
        return self.f_injective and self.g_surjective and self.image_is_kernel


def abs_exact(f: ModuleMorphism, g: ModuleMorphism, ring: FiniteRing, e: int = None) -> AbsExactResult:
    """``0 -> M_Abs -> N_Abs -> P_Abs -> 0`` from a short exact sequence over ``T(R)``.

    Hypotheses: ``e`` absorbs in P, ``Im f = ker_e g`` and ``g(Abs N) = Abs P``.
    """
    require_short_exact(f, g)
    abs_p = absorbers(g.cod)
    if e is None:
        e = is_exact_at(f, g).element
    if e not in abs_p:
        raise HypothesisError("abs_exact", f"witness {e} is not an absorber of P", e)
    if not witness_holds(f, g, e):
        raise HypothesisError("abs_exact", f"Im f is not ker_{e} g", e)
    hit = {g(n) for n in absorbers(g.dom)}
    missing = sorted(set(abs_p) - hit)
    extra = sorted(hit - set(abs_p))
    if missing or extra:
        raise HypothesisError(
            "abs_exact", f"g(Abs N) != Abs P (missing {missing}, unexpected {extra})", (missing or extra)[0]
        )
    am, an, ap = (abs_object(x, ring) for x in (f.dom, f.cod, g.cod))
    f_abs = abs_morphism(f, dom=am, cod=an)
    g_abs = abs_morphism(g, dom=an, cod=ap)
    kernel = {x for x in range(an.size) if g_abs(x) == ap.zero}
    return AbsExactResult(
        f_abs, g_abs, (am, an, ap), f_abs.is_injective(), g_abs.is_surjective(), set(f_abs.image) == kernel
    )


@dataclass(frozen=True, eq=False)
class HomLeftExactResult:
    homs: tuple[HomSet, HomSet, HomSet]
    modules: tuple[FiniteModule, FiniteModule, FiniteModule]
    h: ModuleMorphism
    l: ModuleMorphism
    gamma: int
    h_injective: bool
    image_is_kernel: bool
    witness: ExactnessWitness | None

    @property
    def exact(self) -> bool:
        return self.h_injective and self.image_is_kernel and self.witness is not None


def hom_left_exact(q: FiniteModule, f: ModuleMorphism, g: ModuleMorphism, e: int = None, budget=None) -> HomLeftExactResult:
    """``* -> Hom(Q,M) -h-> Hom(Q,N) -l-> Hom(Q,P)`` by post-composition."""
    check_chain(f, g)
    require_morphism(f, "f")
    require_morphism(g, "g")
    if not f.is_injective():
        raise PreconditionError("hom_left_exact", "f is not injective")
    if e is None:
        w = is_exact_at(f, g)
        if w is None:
            raise PreconditionError("hom_left_exact", "sequence is not exact at N")
        e = w.element
    if not witness_holds(f, g, e):
        raise PreconditionError("hom_left_exact", f"Im f is not ker_{e} g", e)
    if e not in absorbers(g.cod):
        raise PreconditionError("hom_left_exact", f"witness {e} is not an absorber", e)

    hs = tuple(enumerate_hom(q, x, budget) for x in (f.dom, f.cod, g.cod))
    mods = tuple(hom_module(x) for x in hs)
    h = ModuleMorphism(mods[0], mods[1], tuple(hs[1].index(tuple(f(v) for v in a)) for a in hs[0].maps))
    l = ModuleMorphism(mods[1], mods[2], tuple(hs[2].index(tuple(g(v) for v in b)) for b in hs[1].maps))
    for name, mor in (("h", h), ("l", l)):
        report = validate_module_morphism(mor)
        if not report:
            raise PropertyFalsified(f"{name} is not T-linear on Hom modules: {report.describe()}", report.witness)
    gamma = hs[2].index((e,) * q.size)
    kernel = {i for i, v in enumerate(l.map) if v == gamma}
    return HomLeftExactResult(
        hs, mods, h, l, gamma, h.is_injective(), set(h.image) == kernel, is_exact_at(h, l)
    )
