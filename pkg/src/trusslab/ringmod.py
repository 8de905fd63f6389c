"""Finite modules over finite rings.

These only exist as inputs to ``T(-)`` and as targets of ``(-)_Abs``; no
general ring theory lives here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .heap import FiniteGroup, group_is_abelian, validate_group
from .report import ValidationReport, coerce_table, first_mismatch
from .truss import FiniteRing


@dataclass(frozen=True, eq=False)
class FiniteRingModule:
    ring: FiniteRing
    add: np.ndarray
    act: np.ndarray
    zero: int = 0
    unital: bool = False

    def __post_init__(self):
        add = np.asarray(self.add)
        if add.ndim != 2 or add.shape[0] != add.shape[1] or add.shape[0] == 0:
            raise StructureError(f"module add: expected a non-empty square table, got {add.shape}")
        m = add.shape[0]
        object.__setattr__(self, "add", coerce_table(add, (m, m), m, "add"))
        object.__setattr__(self, "act", coerce_table(self.act, (self.ring.size, m), m, "act"))
        if not 0 <= self.zero < m:
            raise StructureError(f"module zero {self.zero} out of range 0..{m - 1}")
        if self.unital and self.ring.one is None:
            raise StructureError("unital module over a ring without a declared one")

    @property
    def size(self) -> int:
        return self.add.shape[0]

    @property
    def group(self) -> FiniteGroup:
        return FiniteGroup(self.add, self.zero)

    def __repr__(self):
        return f"FiniteRingModule(size={self.size}, ring_size={self.ring.size})"


@dataclass(frozen=True, eq=False)
class RingModuleMorphism:
    dom: FiniteRingModule
    cod: FiniteRingModule
    map: tuple[int, ...]

    def __post_init__(self):
        table = coerce_table(self.map, (self.dom.size,), self.cod.size, "map")
        object.__setattr__(self, "map", tuple(int(x) for x in table))

    def __call__(self, x) -> int:
        return self.map[x]

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    @property
    def kernel(self) -> tuple[int, ...]:
        return tuple(a for a, v in enumerate(self.map) if v == self.cod.zero)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.size


def validate_ring_module(n: FiniteRingModule) -> ValidationReport:
    g = n.group
    report = validate_group(g)
    if not report:
        return ValidationReport.failed("add_" + report.law, report.witness)
    if not group_is_abelian(g):
        return ValidationReport.failed("add_commutativity", first_mismatch(n.add, n.add.T))
    r, add, act = n.ring, n.add, n.act
    for a in range(r.size):
        row = act[a]
        hit = first_mismatch(row[add], add[np.ix_(row, row)])
        if hit is not None:
            return ValidationReport.failed("scalar_distributivity", (a, *hit))
    # (r+s)x = rx+sx, witnesses (r, s, x)
    lhs = act[r.add]
    rhs = add[act[:, None, :], act[None, :, :]]
    hit = first_mismatch(lhs, rhs)
    if hit is not None:
        return ValidationReport.failed("ring_distributivity", hit)
    hit = first_mismatch(act[r.mul], act[:, act])
    if hit is not None:
        return ValidationReport.failed("action_associativity", hit)
    if n.unital:
        hit = first_mismatch(act[r.one], np.arange(n.size))
        if hit is not None:
            return ValidationReport.failed("unit", hit)
    return ValidationReport.passed()


def validate_ring_module_morphism(f: RingModuleMorphism) -> ValidationReport:
    fm = np.array(f.map)
    hit = first_mismatch(fm[f.dom.add], f.cod.add[np.ix_(fm, fm)])
    if hit is not None:
        return ValidationReport.failed("additivity", hit)
    hit = first_mismatch(fm[f.dom.act], f.cod.act[:, fm])
    if hit is not None:
        return ValidationReport.failed("linearity", hit)
    return ValidationReport.passed()


def cyclic_ring_module(ring: FiniteRing, d: int) -> FiniteRingModule:
    """``Z/d`` as a module over ``ring = Z/n`` with ``d | n``: ``r.x = r x mod d``."""
    n = ring.size
    if n % d:
        raise ValueError(f"Z/{d} is not a Z/{n}-module")
    idx = np.arange(d)
    r = np.arange(n)
    return FiniteRingModule(
        ring, (idx[:, None] + idx[None, :]) % d, (r[:, None] * idx[None, :]) % d, 0, ring.one is not None
    )


def regular_module(ring: FiniteRing) -> FiniteRingModule:
    return FiniteRingModule(ring, ring.add, ring.mul, ring.zero, ring.one is not None)


def zero_ring_module(ring: FiniteRing) -> FiniteRingModule:
    return FiniteRingModule(
        ring, np.zeros((1, 1), dtype=np.int64), np.zeros((ring.size, 1), dtype=np.int64), 0, ring.one is not None
    )


def direct_sum(a: FiniteRingModule, b: FiniteRingModule) -> FiniteRingModule:
    """``A (+) B`` with ``(x, y)`` stored at ``x * |B| + y``."""
    m = b.size
    idx = np.arange(a.size * m)
    first, second = idx // m, idx % m
    add = a.add[np.ix_(first, first)] * m + b.add[np.ix_(second, second)]
    act = a.act[:, first] * m + b.act[:, second]
    return FiniteRingModule(a.ring, add, act, a.zero * m + b.zero, a.unital and b.unital)


def ring_identity(n: FiniteRingModule) -> RingModuleMorphism:
    return RingModuleMorphism(n, n, tuple(range(n.size)))


def compose_ring(g: RingModuleMorphism, f: RingModuleMorphism) -> RingModuleMorphism:
    return RingModuleMorphism(f.dom, g.cod, tuple(g.map[x] for x in f.map))


def find_ring_module_iso(a: FiniteRingModule, b: FiniteRingModule):
    """Search for an R-linear bijection ``a -> b``; returns the map or ``None``.

    Backtracking over injective partial maps, pruning on additivity and the
    action whenever all involved values are assigned.
    """
    if a.size != b.size or a.ring.size != b.ring.size:
        return None
    n = a.size
    add_a, add_b = a.add.tolist(), b.add.tolist()
    act_a, act_b = a.act.tolist(), b.act.tolist()
    steps = [[] for _ in range(n)]
    for x in range(n):
        for y in range(n):
            s = add_a[x][y]
            steps[max(x, y, s)].append(("add", x, y, s))
        for r in range(a.ring.size):
            s = act_a[r][x]
            steps[max(x, s)].append(("act", r, x, s))
    f = [-1] * n
    used = [False] * n

    def consistent(k):
        for c in steps[k]:
            if c[0] == "add":
                _, x, y, s = c
                if f[s] != add_b[f[x]][f[y]]:
                    return False
            else:
                _, r, x, s = c
                if f[s] != act_b[r][f[x]]:
                    return False
        return True

    def extend(k):
        if k == n:
            return True
        for v in range(n):
            if used[v]:
                continue
            f[k] = v
            used[v] = True
            if consistent(k) and extend(k + 1):
                return True
            used[v] = False
        f[k] = -1
        return False

    return tuple(f) if extend(0) else None


def ring_exactness(f: RingModuleMorphism, g: RingModuleMorphism) -> dict:
    """Group-theoretic checks for ``0 -> A -> B -> C -> 0``."""
    if f.cod is not g.dom and f.cod.size != g.dom.size:
        raise StructureError("maps do not compose")
    return {
        "f_linear": bool(validate_ring_module_morphism(f)),
        "g_linear": bool(validate_ring_module_morphism(g)),
        "f_injective": f.is_injective(),
        "g_surjective": g.is_surjective(),
        "image_is_kernel": f.image == g.kernel,
    }


def ring_closure(n: FiniteRingModule, gens) -> tuple[int, ...]:
    """Smallest submodule containing ``gens`` (and zero)."""
    s = set(gens) | {n.zero}
    add, act = n.add.tolist(), n.act.tolist()
    while True:
        new = {add[a][b] for a in s for b in s} | {row[a] for row in act for a in s}
        if new <= s:
            return tuple(sorted(s))
        s |= new


def ring_submodules(n: FiniteRingModule) -> list[tuple[int, ...]]:
    """Submodules generated by at most two elements, smallest first."""
    subs = {ring_closure(n, (x, y)) for x in range(n.size) for y in range(x, n.size)}
    return sorted(subs, key=lambda s: (len(s), s))


def ring_submodule(n: FiniteRingModule, elems) -> tuple[FiniteRingModule, RingModuleMorphism]:
    """The submodule on ``elems`` re-indexed ascending, with its inclusion."""
    elems = tuple(sorted(set(elems)))
    if ring_closure(n, elems) != elems:
        raise StructureError(f"{list(elems)} is not a submodule")
    pos = {x: i for i, x in enumerate(elems)}
    idx = np.array(elems)
    add = np.vectorize(pos.get)(n.add[np.ix_(idx, idx)]) if len(elems) > 1 else np.zeros((1, 1), dtype=np.int64)
    act = np.vectorize(pos.get)(n.act[:, idx]) if len(elems) > 1 else np.zeros((n.ring.size, 1), dtype=np.int64)
    sub = FiniteRingModule(n.ring, add, act, pos[n.zero], n.unital)
    return sub, RingModuleMorphism(sub, n, elems)


def ring_quotient(n: FiniteRingModule, elems) -> tuple[FiniteRingModule, RingModuleMorphism]:
    """``N / S`` on cosets ordered by smallest member, with the projection."""
    elems = tuple(sorted(set(elems)))
    if ring_closure(n, elems) != elems:
        raise StructureError(f"{list(elems)} is not a submodule")
    add = n.add.tolist()
    class_of = [-1] * n.size
    reps = []
    for x in range(n.size):
        if class_of[x] < 0:
            for s in elems:
                class_of[add[x][s]] = len(reps)
            reps.append(x)
    cls = np.array(class_of)
    r = np.array(reps)
    q = FiniteRingModule(n.ring, cls[n.add[np.ix_(r, r)]], cls[n.act[:, r]], class_of[n.zero], n.unital)
    return q, RingModuleMorphism(n, q, tuple(class_of))
