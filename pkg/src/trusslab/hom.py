"""Hom sets between finite modules and the ``(-)_Abs`` functor."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import BudgetExceeded, ConsistencyError, PreconditionError, PropertyFalsified, StructureError
from .heap import FiniteGroup, FiniteHeap, group_of_heap, is_abelian, validate_heap
from .module import (
    FiniteModule,
    ModuleMorphism,
    absorbers,
    quotient_module,
    same_truss,
    submodule,
    validate_module,
    validate_module_morphism,
)
from .ringmod import FiniteRingModule, RingModuleMorphism, validate_ring_module, validate_ring_module_morphism
from .truss import FiniteRing

DEFAULT_HOM_BUDGET = 6**6


def hom_budget(budget=None) -> int:
    """Resolve the enumeration cap on ``|N| ** |M|``; ``TRUSSLAB_BUDGET`` overrides the default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("TRUSSLAB_BUDGET")
    return int(env) if env else DEFAULT_HOM_BUDGET


def _check_budget(m: FiniteModule, n: FiniteModule, budget, allowed=None):
    cap = hom_budget(budget)
    if allowed is None:
        if n.size ** m.size > cap:
            raise BudgetExceeded(f"|N|^|M| = {n.size}^{m.size} exceeds the hom budget {cap}")
        return
    space = 1
    for values in allowed:
        space *= len(values)
    if space > cap:
        raise BudgetExceeded(f"constrained search space {space} exceeds the hom budget {cap}")


def _allowed_values(m: FiniteModule, n: FiniteModule, allowed):
    if allowed is None:
        return None
    if len(allowed) != m.size:
        raise StructureError(f"allowed: expected {m.size} value sets, got {len(allowed)}")
    out = []
    for x, values in enumerate(allowed):
        vs = sorted({int(v) for v in values})
        if vs and not (0 <= vs[0] and vs[-1] < n.size):
            raise StructureError(f"allowed[{x}] has values outside 0..{n.size - 1}")
        out.append(tuple(vs))
    return out


@dataclass(frozen=True, eq=False)
class HomSet:
    """All T-linear maps ``dom -> cod``, lexicographically ordered by map table."""

    dom: FiniteModule
    cod: FiniteModule
    maps: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.morphisms)

    @cached_property
    def morphisms(self) -> tuple[ModuleMorphism, ...]:
        return tuple(ModuleMorphism(self.dom, self.cod, f) for f in self.maps)

    @cached_property
    def _index(self):
        return {f: i for i, f in enumerate(self.maps)}

    def index(self, f) -> int:
        key = f.map if isinstance(f, ModuleMorphism) else tuple(f)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"{list(key)} is not in Hom") from None

    def __contains__(self, f):
        key = f.map if isinstance(f, ModuleMorphism) else tuple(f)
        return key in self._index

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.maps, dtype=np.int64).reshape(len(self.maps), self.dom.size)

    def encode(self, rows) -> np.ndarray:
        """Integer code per map (base ``|cod|``, first entry most significant)."""
        weights = self.cod.size ** np.arange(self.dom.size - 1, -1, -1, dtype=np.int64)
        return np.asarray(rows) @ weights

    @cached_property
    def codes(self) -> np.ndarray:
        return self.encode(self.array)

    def lookup(self, rows):
        """Indices of the given maps (any leading shape), or ``None`` where absent."""
        codes = self.encode(rows)
        pos = np.searchsorted(self.codes, codes)
        pos = np.clip(pos, 0, max(len(self.maps) - 1, 0))
        found = self.codes[pos] == codes if len(self.maps) else np.zeros(codes.shape, bool)
        return pos, found


def _step_constraints(m: FiniteModule):
    """Group the heap and action constraints by the last domain index they mention."""
    n = m.size
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    r = m.heap.op.ravel()
    heap_step = np.maximum.reduce([x, y, z, r])
    t, u = np.meshgrid(np.arange(m.truss.size), np.arange(n), indexing="ij")
    t, u = t.ravel(), u.ravel()
    s = m.act.ravel()
    act_step = np.maximum(u, s)
    steps = []
    for k in range(n):
        hk = heap_step == k
        ak = act_step == k
        steps.append((x[hk], y[hk], z[hk], r[hk], t[ak], u[ak], s[ak]))
    return steps


def enumerate_hom(m: FiniteModule, n: FiniteModule, budget=None, allowed=None) -> HomSet:
    """Every T-linear map ``m -> n`` by backtracking.

    Values are assigned in domain order, each candidate tried in ascending
    order, and a branch is cut as soon as a heap or action constraint whose
    indices are all assigned fails.  Output is therefore lexicographic.

    ``allowed[x]``, when given, restricts the value at ``x``; the result is
    then every T-linear map obeying the restriction (not a Hom set proper),
    and the budget applies to the restricted search space.
    """
    if not same_truss(m, n):
        raise PreconditionError("hom", "modules over different trusses")
    allowed = _allowed_values(m, n, allowed)
    _check_budget(m, n, budget, allowed)
    steps = _step_constraints(m)
    op_n, act_n = n.heap.op, n.act
    f = np.zeros(m.size, dtype=np.int64)
    found = []

    def extend(k):
        if k == m.size:
            found.append(tuple(int(v) for v in f))
            return
        x, y, z, r, t, u, s = steps[k]
        for v in (range(n.size) if allowed is None else allowed[k]):
            f[k] = v
            if len(r) and not np.array_equal(f[r], op_n[f[x], f[y], f[z]]):
                continue
            if len(s) and not np.array_equal(f[s], act_n[t, f[u]]):
                continue
            extend(k + 1)

    extend(0)
    return HomSet(m, n, tuple(found))


def enumerate_hom_naive(m: FiniteModule, n: FiniteModule, budget=None) -> HomSet:
    """Unpruned reference: test every one of the ``|N|^|M|`` functions."""
    if not same_truss(m, n):
        raise PreconditionError("hom", "modules over different trusses")
    _check_budget(m, n, budget)
    maps = tuple(
        f for f in product(range(n.size), repeat=m.size)
        if validate_module_morphism(ModuleMorphism(m, n, f))
    )
    return HomSet(m, n, maps)


def pointwise(hs: HomSet, f, g, h) -> tuple[int, ...]:
    """``[f, g, h](x) = [f(x), g(x), h(x)]``."""
    return tuple(hs.cod.op(a, b, c) for a, b, c in zip(f, g, h))


def hom_heap(hs: HomSet) -> FiniteHeap:
    """Heap on morphism indices under the pointwise operation; closure asserted."""
    if not len(hs):
        raise StructureError("Hom set is empty; no heap structure")
    F = hs.array
    combined = hs.cod.heap.op[F[:, None, None, :], F[None, :, None, :], F[None, None, :, :]]
    pos, found = hs.lookup(combined)
    if not found.all():
        i, j, k = (int(v) for v in np.argwhere(~found)[0])
        raise PropertyFalsified(
            f"pointwise [f{i}, f{j}, f{k}] is not T-linear", (i, j, k)
        )
    heap = FiniteHeap(pos)
    if not validate_heap(heap) or not is_abelian(heap):
        raise ConsistencyError("pointwise operation on Hom is not an abelian heap")
    return heap


def hom_module(hs: HomSet) -> FiniteModule:
    """Hom as a module: ``(t.f)(x) = t.f(x)``; closure is checked, not assumed."""
    heap = hom_heap(hs)
    acted = hs.cod.act[:, hs.array]  # (t, f, x)
    pos, found = hs.lookup(acted)
    if not found.all():
        t, i = (int(v) for v in np.argwhere(~found)[0])
        raise PropertyFalsified(f"t.f is not T-linear for t={t}, f=f{i} {list(hs.maps[i])}", (t, i))
    module = FiniteModule(hs.dom.truss, heap, pos, hs.cod.unital)
    report = validate_module(module)
    if not report:
        raise PropertyFalsified(f"Hom module fails {report.describe()}", report.witness)
    return module


# -- the Abs functor --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AbsImage:
    """``M_Abs = G(M / Abs(M); Abs(M))`` with its R-action."""

    source: FiniteModule
    ring: FiniteRing
    absorbers: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    group: FiniteGroup
    ring_module: FiniteRingModule

    @property
    def zero(self) -> int:
        return self.group.identity

    @property
    def size(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict:
        return {
            "classes": [list(c) for c in self.classes],
            "group_mul": self.group.mul.tolist(),
            "action": self.ring_module.act.tolist(),
        }


def _ring_matches(m: FiniteModule, ring: FiniteRing) -> bool:
    t = m.truss
    if t.size != ring.size or not np.array_equal(t.mul, ring.mul):
        return False
    idx = np.arange(ring.size)
    # T(R) heap must be a - b + c in R's additive group
    neg = np.array(ring.additive_group.inv)
    expected = ring.add[ring.add[np.ix_(idx, neg)][:, :, None], idx[None, None, :]]
    return bool(np.array_equal(t.heap.op, expected))


def abs_object(m: FiniteModule, ring: FiniteRing) -> AbsImage:
    if not _ring_matches(m, ring):
        raise PreconditionError("abs", "module is not over T(R) for the given ring")
    abs_m = absorbers(m)
    if not abs_m:
        raise PreconditionError("abs", "Abs(M) is empty")
    q = quotient_module(m, submodule(m, abs_m))
    base = q.class_of[abs_m[0]]
    if q.classes[base] != abs_m:
        raise ConsistencyError("class of an absorber is not Abs(M)")
    group = group_of_heap(q.module.heap, base)
    rmod = FiniteRingModule(ring, group.mul, q.module.act, base, m.unital)
    report = validate_ring_module(rmod)
    if not report:
        raise PropertyFalsified(f"M_Abs is not an R-module: {report.describe()}", report.witness)
    return AbsImage(m, ring, abs_m, q.classes, q.class_of, group, rmod)


def abs_morphism(phi: ModuleMorphism, ring: FiniteRing = None, *, dom: AbsImage = None, cod: AbsImage = None) -> RingModuleMorphism:
    """``phi_Abs``: class of ``m`` to class of ``phi(m)``, checked on every representative."""
    if dom is None or cod is None:
        if ring is None:
            raise ValueError("need the ring or both Abs images")
        dom = dom or abs_object(phi.dom, ring)
        cod = cod or abs_object(phi.cod, ring)
    table = []
    for cls in dom.classes:
        targets = {cod.class_of[phi(x)] for x in cls}
        if len(targets) != 1:
            raise ConsistencyError(f"phi_Abs ill-defined on class {cls}: images {sorted(targets)}")
        table.append(targets.pop())
    f = RingModuleMorphism(dom.ring_module, cod.ring_module, tuple(table))
    report = validate_ring_module_morphism(f)
    if not report:
        raise PropertyFalsified(f"phi_Abs is not R-linear: {report.describe()}", report.witness)
    return f


def sample_hom(m: FiniteModule, n: FiniteModule, rng, allowed=None, node_limit=20000) -> ModuleMorphism | None:
    """A random T-linear map by backtracking with shuffled candidates.

    Returns ``None`` when no map exists inside ``allowed`` or the search
    visits more than ``node_limit`` partial maps.
    """
    if not same_truss(m, n):
        raise PreconditionError("hom", "modules over different trusses")
    allowed = _allowed_values(m, n, allowed)
    steps = _step_constraints(m)
    op_n, act_n = n.heap.op, n.act
    f = np.zeros(m.size, dtype=np.int64)
    visited = 0

    def extend(k):
        nonlocal visited
        if k == m.size:
            return True
        x, y, z, r, t, u, s = steps[k]
        values = list(range(n.size) if allowed is None else allowed[k])
        rng.shuffle(values)
        for v in values:
            visited += 1
            if visited > node_limit:
                return False
            f[k] = v
            if len(r) and not np.array_equal(f[r], op_n[f[x], f[y], f[z]]):
                continue
            if len(s) and not np.array_equal(f[s], act_n[t, f[u]]):
                continue
            if extend(k + 1):
                return True
        return False

    if not extend(0):
        return None
    return ModuleMorphism(m, n, tuple(int(v) for v in f))
