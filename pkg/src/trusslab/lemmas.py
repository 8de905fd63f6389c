"""Short-five, five and nine lemmas, and maps induced between exact rows.

Each lemma is evaluated on one concrete diagram: hypotheses and
conclusions are computed independently and the implication is reported,
never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagrams import Diagram
from .errors import PropertyFalsified, StructureError
from .exact import is_short_exact
from .factor import check_unique
from .module import ModuleMorphism, compose, validate_module_morphism


@dataclass(frozen=True)
class LemmaReport:
    name: str
    facts: dict
    # (clause, hypothesis holds, conclusion holds)
    clauses: tuple[tuple[str, bool, bool], ...]
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(c for _, h, c in self.clauses if h)

    @property
    def violations(self) -> list[str]:
        return [name for name, h, c in self.clauses if h and not c]

    def to_dict(self) -> dict:
        return {
            "lemma": self.name,
            "holds": self.holds,
            "facts": dict(self.facts),
            "clauses": [{"clause": n, "hypothesis": h, "conclusion": c} for n, h, c in self.clauses],
            **self.extra,
        }


def _need(d: Diagram, shape: str):
    if d.shape.name != shape:
        raise StructureError(f"expected a {shape} diagram, got {d.shape.name}")


def _mono_epi(f: ModuleMorphism):
    return f.is_injective(), f.is_surjective()


def short_five(d: Diagram) -> LemmaReport:
    _need(d, "snake")
    facts = {}
    for label, key in (("f1", ("M1", "N1")), ("f", ("M", "N")), ("f2", ("M2", "N2"))):
        mono, epi = _mono_epi(d.map(*key))
        facts[label + "_mono"], facts[label + "_epi"] = mono, epi
    iso = {k: facts[k + "_mono"] and facts[k + "_epi"] for k in ("f1", "f", "f2")}
    clauses = (
        ("mono", facts["f1_mono"] and facts["f2_mono"], facts["f_mono"]),
        ("epi", facts["f1_epi"] and facts["f2_epi"], facts["f_epi"]),
        ("iso", iso["f1"] and iso["f2"], iso["f"]),
    )
    return LemmaReport("short_five", facts, clauses)


def five_lemma(d: Diagram) -> LemmaReport:
    _need(d, "row2x5")
    facts = {}
    for x in "ABCDE":
        facts[x + "_mono"], facts[x + "_epi"] = _mono_epi(d.map(x, x + "1"))
    iso = {x: facts[x + "_mono"] and facts[x + "_epi"] for x in "ABCDE"}
    clauses = (
        ("mono", facts["A_epi"] and facts["B_mono"] and facts["D_mono"], facts["C_mono"]),
        ("epi", facts["E_mono"] and facts["B_epi"] and facts["D_epi"], facts["C_epi"]),
        ("iso", iso["A"] and iso["B"] and iso["D"] and iso["E"], iso["C"]),
    )
    return LemmaReport("five", facts, clauses)


def nine_lemma(d: Diagram) -> LemmaReport:
    """Middle column is exact by construction; compare the outer columns."""
    _need(d, "grid3x3")
    first = is_short_exact(d.map("A1", "A"), d.map("A", "A2"))
    last = is_short_exact(d.map("C1", "C"), d.map("C", "C2"))
    facts = {"first_exact": first.exact, "last_exact": last.exact}
    clauses = (
        ("first_implies_last", first.exact, last.exact),
        ("last_implies_first", last.exact, first.exact),
    )
    return LemmaReport("nine", facts, clauses, {"first": first.to_dict(), "last": last.to_dict()})


@dataclass(frozen=True, eq=False)
class InducedMap:
    h: ModuleMorphism
    uniqueness: str
    report: LemmaReport


def induced_epi_map(d: Diagram, budget=None) -> InducedMap:
    """``h: A2 -> B2`` with ``psi2 g = h psi1`` for rows ending in a surjection."""
    _need(d, "epi2x3")
    psi1, psi2 = d.map("A", "A2"), d.map("B", "B2")
    f, g = d.map("A1", "B1"), d.map("A", "B")
    target = compose(psi2, g)
    table = []
    for x2 in range(psi1.cod.size):
        values = {target(x) for x in psi1.fiber(x2)}
        if len(values) != 1:
            raise PropertyFalsified(f"h ill-defined at {x2}: preimages give {sorted(values)}", x2)
        table.append(values.pop())
    h = ModuleMorphism(psi1.cod, psi2.cod, tuple(table))
    rep = validate_module_morphism(h)
    if not rep:
        raise PropertyFalsified(f"induced h is not T-linear: {rep.describe()}", rep.witness)
    allowed = [{target(x) for x in psi1.fiber(x2)} for x2 in range(psi1.cod.size)]
    unique = check_unique(h, lambda k: compose(k, psi1).map == target.map, allowed, budget)
    both_iso = f.is_bijective() and g.is_bijective()
    report = LemmaReport(
        "induced_epi",
        {"f_iso": f.is_bijective(), "g_iso": g.is_bijective(), "h_iso": h.is_bijective()},
        (("equation", True, compose(h, psi1).map == target.map), ("iso", both_iso, h.is_bijective())),
    )
    return InducedMap(h, unique, report)


def induced_mono_map(d: Diagram, budget=None) -> InducedMap:
    """``h: A1 -> B1`` with ``phi2 h = f phi1`` for rows starting with an injection."""
    _need(d, "mono2x3")
    phi1, phi2 = d.map("A1", "A"), d.map("B1", "B")
    f, g = d.map("A", "B"), d.map("A2", "B2")
    target = compose(f, phi1)
    pre = {v: x for x, v in enumerate(phi2.map)}
    table = []
    for a in range(phi1.dom.size):
        if target(a) not in pre:
            raise PropertyFalsified(f"f(phi1({a})) = {target(a)} is not in Im phi2", a)
        table.append(pre[target(a)])
    h = ModuleMorphism(phi1.dom, phi2.dom, tuple(table))
    rep = validate_module_morphism(h)
    if not rep:
        raise PropertyFalsified(f"induced h is not T-linear: {rep.describe()}", rep.witness)
    allowed = [{v} for v in table]
    unique = check_unique(h, lambda k: compose(phi2, k).map == target.map, allowed, budget)
    both_iso = f.is_bijective() and g.is_bijective()
    report = LemmaReport(
        "induced_mono",
        {"f_iso": f.is_bijective(), "g_iso": g.is_bijective(), "h_iso": h.is_bijective()},
        (("equation", True, compose(phi2, h).map == target.map), ("iso", both_iso, h.is_bijective())),
    )
    return InducedMap(h, unique, report)
