"""The six-term kernel/cokernel sequence of a snake-shaped diagram."""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import Diagram
from .errors import ConsistencyError, PreconditionError, PropertyFalsified, StructureError
from .exact import ExactnessWitness, is_exact_at
from .module import (
    FiniteModule,
    ModuleMorphism,
    ModuleQuotient,
    Submodule,
    absorbers,
    image,
    kernel_e,
    quotient_module,
    validate_module_morphism,
)

MAP_NAMES = ("phi0", "psi0", "delta", "phi2", "psi2")


@dataclass(frozen=True, eq=False)
class SnakeResult:
    e_prime: int
    kernels: tuple[Submodule, Submodule, Submodule]
    cokernels: tuple[ModuleQuotient, ModuleQuotient, ModuleQuotient]
    maps: dict
    witnesses: tuple[ExactnessWitness, ...]
    preimages_checked: int

    @property
    def modules(self) -> tuple[FiniteModule, ...]:
        return tuple(k.module for k in self.kernels) + tuple(q.module for q in self.cokernels)

    def signature(self) -> dict:
        """Everything that should not depend on the chosen absorber."""
        return {
            "kernel_sizes": [len(k) for k in self.kernels],
            "cokernel_sizes": [len(q.classes) for q in self.cokernels],
            "exact_positions": len(self.witnesses),
        }

    def to_dict(self) -> dict:
        return {
            "e_prime": self.e_prime,
            "kernels": [list(k.elems) for k in self.kernels],
            "cokernels": [[list(c) for c in q.classes] for q in self.cokernels],
            "maps": {name: list(self.maps[name].map) for name in MAP_NAMES},
            "witnesses": [w.element for w in self.witnesses],
            "preimages_checked": self.preimages_checked,
        }


def _restrict(src: Submodule, dst: Submodule, f: ModuleMorphism, name) -> ModuleMorphism:
    table = []
    for x in src.elems:
        y = f(x)
        if y not in dst:
            raise ConsistencyError(f"{name} sends {x} to {y}, outside the target kernel")
        table.append(dst.index(y))
    return ModuleMorphism(src.module, dst.module, tuple(table))


def _on_classes(src: ModuleQuotient, dst: ModuleQuotient, f: ModuleMorphism, name) -> ModuleMorphism:
    table = []
    for cls in src.classes:
        targets = {dst.class_of[f(x)] for x in cls}
        if len(targets) != 1:
            raise ConsistencyError(f"{name} ill-defined on class {list(cls)}: {sorted(targets)}")
        table.append(targets.pop())
    return ModuleMorphism(src.module, dst.module, tuple(table))


def _kernel(f: ModuleMorphism, e: int, name) -> Submodule:
    k = kernel_e(f, e)
    if not k.action_closed:
        raise ConsistencyError(f"{name} = ker_{e} is not a submodule although {e} absorbs")
    return k


def snake(d: Diagram, e_prime: int = None) -> SnakeResult:
    if d.shape.name != "snake":
        raise StructureError(f"snake needs a snake-shaped diagram, got {d.shape.name}")
    phi, psi = d.map("M1", "M"), d.map("M", "M2")
    phi1, psi1 = d.map("N1", "N"), d.map("N", "N2")
    f1, f, f2 = d.map("M1", "N1"), d.map("M", "N"), d.map("M2", "N2")
    abs_m1 = absorbers(d.module("M1"))
    if e_prime is None:
        e_prime = abs_m1[0]
    if e_prime not in abs_m1:
        raise PreconditionError("e'", f"{e_prime} is not an absorber of M1", e_prime)

    n1 = f1(e_prime)
    n = phi1(n1)
    n2 = psi1(n)
    k1, k2, k3 = _kernel(f1, n1, "K1"), _kernel(f, n, "K2"), _kernel(f2, n2, "K3")
    c1 = quotient_module(d.module("N1"), image(f1))
    c2 = quotient_module(d.module("N"), image(f))
    c3 = quotient_module(d.module("N2"), image(f2))

    phi0 = _restrict(k1, k2, phi, "phi0")
    psi0 = _restrict(k2, k3, psi, "psi0")
    phi2 = _on_classes(c1, c2, phi1, "phi2")
    psi2 = _on_classes(c2, c3, psi1, "psi2")

    # delta(a'') = class of the unique a' with phi1(a') = f(a), for every a over a''
    pre_phi1 = {v: x for x, v in enumerate(phi1.map)}
    table = []
    checked = 0
    for a2 in k3.elems:
        classes = set()
        for a in psi.fiber(a2):
            checked += 1
            if f(a) not in pre_phi1:
                raise ConsistencyError(f"f({a}) = {f(a)} is not in Im phi1")
            classes.add(c1.class_of[pre_phi1[f(a)]])
        if len(classes) != 1:
            raise PropertyFalsified(f"delta depends on the preimage of {a2}: classes {sorted(classes)}", a2)
        table.append(classes.pop())
    delta = ModuleMorphism(k3.module, c1.module, tuple(table))

    maps = dict(zip(MAP_NAMES, (phi0, psi0, delta, phi2, psi2)))
    for name, mor in maps.items():
        report = validate_module_morphism(mor)
        if not report:
            raise PropertyFalsified(f"{name} is not T-linear: {report.describe()}", report.witness)

    witnesses = []
    for pos, (a, b) in enumerate(((phi0, psi0), (psi0, delta), (delta, phi2), (phi2, psi2)), start=1):
        w = is_exact_at(a, b, pos)
        if w is None:
            raise PropertyFalsified(f"six-term sequence not exact at position {pos}", pos)
        witnesses.append(w)
    return SnakeResult(e_prime, (k1, k2, k3), (c1, c2, c3), maps, tuple(witnesses), checked)


def snake_all_absorbers(d: Diagram) -> dict:
    """Run for every absorber of M1 and require the same verdict for each."""
    results = [snake(d, e) for e in absorbers(d.module("M1"))]
    signatures = [r.signature() for r in results]
    stable = all(s == signatures[0] for s in signatures)
    if not stable:
        raise PropertyFalsified("snake outcome depends on the chosen absorber")
    return {"absorbers": [r.e_prime for r in results], "stable": stable, "results": results}
