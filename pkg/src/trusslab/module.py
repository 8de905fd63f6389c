"""Finite left modules over a finite truss.

A module stores its own abelian heap and an action table ``act[t, x]``.
Morphisms, sub-/quotient/product modules and kernels all stay table-encoded
and are re-validated whenever a construction could silently go wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConsistencyError, InvalidStructure, PreconditionError, StructureError
from .heap import (
    FiniteHeap,
    congruence_classes,
    fiber,
    heap_of_group,
    induced_table,
    is_abelian,
    is_subheap,
    partition_from_labels,
    product_heap,
    singleton_heap,
    SubHeap,
    validate_heap,
    validate_heap_morphism,
    HeapMorphism,
)
from .report import ValidationReport, coerce_table, first_mismatch
from .ringmod import FiniteRingModule, RingModuleMorphism, validate_ring_module
from .truss import FiniteTruss, truss_of_ring


@dataclass(frozen=True, eq=False)
class FiniteModule:
    truss: FiniteTruss
    heap: FiniteHeap
    act: np.ndarray
    unital: bool = False

    def __post_init__(self):
        shape = (self.truss.size, self.heap.size)
        object.__setattr__(self, "act", coerce_table(self.act, shape, self.heap.size, "act"))
        if self.unital and self.truss.one is None:
            raise StructureError("module declared unital over a truss without a declared one")

    @property
    def size(self) -> int:
        return self.heap.size

    @cached_property
    def _act_rows(self):
        return self.act.tolist()

    def op(self, a, b, c) -> int:
        return self.heap(a, b, c)

    def action(self, t, x) -> int:
        return self._act_rows[t][x]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteModule)
            and self.unital == other.unital
            and self.heap == other.heap
            and np.array_equal(self.act, other.act)
            and self.truss == other.truss
        )

    def __hash__(self):
        return hash((hash(self.heap), self.act.tobytes()))

    def __repr__(self):
        return f"FiniteModule(size={self.size}, truss_size={self.truss.size})"


def same_truss(a: FiniteModule, b: FiniteModule) -> bool:
    return a.truss is b.truss or a.truss == b.truss


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    dom: FiniteModule
    cod: FiniteModule
    map: tuple[int, ...]

    def __post_init__(self):
        if not same_truss(self.dom, self.cod):
            raise StructureError("module morphism between modules over different trusses")
        table = coerce_table(self.map, (self.dom.size,), self.cod.size, "map")
        object.__setattr__(self, "map", tuple(int(x) for x in table))

    def __call__(self, x) -> int:
        return self.map[x]

    @cached_property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def is_injective(self) -> bool:
        return len(self.image) == self.dom.size

    def is_surjective(self) -> bool:
        return len(self.image) == self.cod.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def fiber(self, e) -> tuple[int, ...]:
        return fiber(self.map, e)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMorphism)
            and self.map == other.map
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"ModuleMorphism({self.dom.size}->{self.cod.size}, {list(self.map)})"


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """``g after f``."""
    if f.cod.size != g.dom.size:
        raise StructureError(f"cannot compose: cod has size {f.cod.size}, dom has size {g.dom.size}")
    return ModuleMorphism(f.dom, g.cod, tuple(g.map[x] for x in f.map))


def identity(m: FiniteModule) -> ModuleMorphism:
    return ModuleMorphism(m, m, tuple(range(m.size)))


def constant(dom: FiniteModule, cod: FiniteModule, value: int) -> ModuleMorphism:
    return ModuleMorphism(dom, cod, (value,) * dom.size)


# -- validation -------------------------------------------------------------


def validate_module(m: FiniteModule) -> ValidationReport:
    """Heap laws, then the three action laws, then the unit law if declared.

    Witnesses: ``action_associativity`` ``(t, t', x)``;
    ``truss_distributivity`` ``(t, t', t'', x)``;
    ``module_distributivity`` ``(t, x, y, z)``; ``unit`` ``(x,)``.
    """
    heap_report = validate_heap(m.heap)
    if not heap_report:
        return ValidationReport.failed("heap:" + heap_report.law, heap_report.witness, heap_report.detail)
    abelian = is_abelian(m.heap)
    if not abelian:
        return abelian
    act, mul, op_t, op_m = m.act, m.truss.mul, m.truss.heap.op, m.heap.op
    hit = first_mismatch(act[:, act], act[mul])
    if hit is not None:
        return ValidationReport.failed("action_associativity", hit)
    lhs = act[op_t]
    rhs = op_m[act[:, None, None, :], act[None, :, None, :], act[None, None, :, :]]
    hit = first_mismatch(lhs, rhs)
    if hit is not None:
        return ValidationReport.failed("truss_distributivity", hit)
    for t in range(m.truss.size):
        row = act[t]
        hit = first_mismatch(row[op_m], op_m[np.ix_(row, row, row)])
        if hit is not None:
            return ValidationReport.failed("module_distributivity", (t, *hit))
    if m.unital:
        hit = first_mismatch(act[m.truss.one], np.arange(m.size))
        if hit is not None:
            return ValidationReport.failed("unit", hit)
    return ValidationReport.passed()


def validate_module_morphism(f: ModuleMorphism) -> ValidationReport:
    """Heap-morphism law (witness ``(x, y, z)``), then linearity (``(t, x)``)."""
    report = validate_heap_morphism(HeapMorphism(f.dom.heap, f.cod.heap, f.map))
    if not report:
        return report
    fm = np.array(f.map)
    lhs = fm[f.dom.act]
    rhs = f.cod.act[:, fm]
    hit = first_mismatch(lhs, rhs)
    if hit is None:
        return ValidationReport.passed()
    t, x = hit
    return ValidationReport.failed("linearity", hit, f"f({t}.{x}) = {lhs[hit]} but {t}.f({x}) = {rhs[hit]}")


def require_morphism(f: ModuleMorphism, name="map") -> ModuleMorphism:
    report = validate_module_morphism(f)
    if not report:
        raise PreconditionError(name, f"not T-linear: {report.describe()}", report.witness)
    return f


# -- absorbers and induced actions -------------------------------------------


def absorbers(m: FiniteModule) -> tuple[int, ...]:
    fixed = (m.act == np.arange(m.size)[None, :]).all(axis=0)
    return tuple(int(x) for x in np.flatnonzero(fixed))


def induced_module(m: FiniteModule, e: int) -> FiniteModule:
    """``M^(e)``: ``t ._e x = [t.x, t.e, e]``."""
    if not 0 <= e < m.size:
        raise StructureError(f"base point {e} out of range 0..{m.size - 1}")
    act = m.heap.op[m.act, m.act[:, e][:, None], e]
    return FiniteModule(m.truss, m.heap, act, m.unital)


def trivial_action_module(truss: FiniteTruss, heap: FiniteHeap, unital=False) -> FiniteModule:
    """Every element absorbs: ``t.x = x``."""
    act = np.broadcast_to(np.arange(heap.size), (truss.size, heap.size))
    return FiniteModule(truss, heap, act, unital)


def singleton_module(truss: FiniteTruss) -> FiniteModule:
    return FiniteModule(truss, singleton_heap(), np.zeros((truss.size, 1), dtype=np.int64), truss.one is not None)


def self_module(truss: FiniteTruss) -> FiniteModule:
    """``T`` acting on itself by left multiplication."""
    return FiniteModule(truss, truss.heap, truss.mul, truss.one is not None)


# -- submodules ---------------------------------------------------------------


def _action_closed(m: FiniteModule, elems) -> bool:
    idx = np.array(elems)
    return bool(np.isin(m.act[:, idx], idx).all())


def is_submodule(m: FiniteModule, s) -> bool:
    elems = sorted(set(s))
    if not elems:
        raise StructureError("submodules are non-empty")
    return is_subheap(m.heap, elems) and _action_closed(m, elems)


def is_induced_submodule(m: FiniteModule, s) -> bool:
    elems = sorted(set(s))
    if not elems:
        raise StructureError("induced submodules are non-empty")
    if not is_subheap(m.heap, elems):
        return False
    idx = np.array(elems)
    act_s = m.act[:, idx]
    for e in elems:
        induced = m.heap.op[act_s, m.act[:, e][:, None], e]
        if not np.isin(induced, idx).all():
            return False
    return True


@dataclass(frozen=True, eq=False)
class Submodule:
    """A non-empty sub-heap of a module, with its action-closure status.

    Kernels over a non-absorbing base point are sub-heaps that need not be
    closed under the action; ``action_closed`` records which case we are in.
    """

    parent: FiniteModule
    elems: tuple[int, ...]
    action_closed: bool = field(init=False)

    def __post_init__(self):
        elems = SubHeap(self.parent.heap, tuple(self.elems)).elems
        object.__setattr__(self, "elems", elems)
        object.__setattr__(self, "action_closed", _action_closed(self.parent, elems))

    def __len__(self):
        return len(self.elems)

    def __contains__(self, x):
        return x in self._set

    def __iter__(self):
        return iter(self.elems)

    @cached_property
    def _set(self):
        return frozenset(self.elems)

    def index(self, x) -> int:
        return self._position[x]

    @cached_property
    def _position(self):
        return {x: i for i, x in enumerate(self.elems)}

    @cached_property
    def module(self) -> FiniteModule:
        """The submodule as a module in its own right, elements re-indexed ascending."""
        if not self.action_closed:
            raise PreconditionError("submodule", f"{self.elems} is not closed under the action")
        idx = np.array(self.elems)
        pos = np.full(self.parent.size, -1, dtype=np.int64)
        pos[idx] = np.arange(len(idx))
        op = pos[self.parent.heap.op[np.ix_(idx, idx, idx)]]
        act = pos[self.parent.act[:, idx]]
        return FiniteModule(self.parent.truss, FiniteHeap(op), act, self.parent.unital)

    @cached_property
    def inclusion(self) -> ModuleMorphism:
        return ModuleMorphism(self.module, self.parent, self.elems)


def submodule(m: FiniteModule, s) -> Submodule:
    sub = Submodule(m, tuple(s)) if is_subheap(m.heap, s) else None
    if sub is None:
        raise PreconditionError("submodule", f"{sorted(set(s))} is not a sub-heap")
    if not sub.action_closed:
        raise PreconditionError("submodule", f"{sub.elems} is not closed under the action")
    return sub


def image(f: ModuleMorphism) -> Submodule:
    sub = Submodule(f.cod, f.image)
    if not sub.action_closed:
        raise ConsistencyError(f"image {sub.elems} of a T-linear map is not action-closed")
    return sub


def kernel_e(f: ModuleMorphism, e: int) -> Submodule:
    """``ker_e f``: the fibre over ``e``, flagged with its action-closure status."""
    if e not in set(f.map):
        raise PreconditionError("kernel", f"{e} is not in the image of the map")
    return Submodule(f.dom, f.fiber(e))


# -- quotients ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleQuotient:
    parent: FiniteModule
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    module: FiniteModule
    projection: ModuleMorphism

    def cls(self, x) -> int:
        return self.class_of[x]


def quotient_by_partition(m: FiniteModule, classes, class_of) -> ModuleQuotient:
    """Push heap and action through a partition, asserting both are well defined."""
    heap = FiniteHeap(induced_table(m.heap.op, classes, class_of))
    cls = np.array(class_of)
    reps = np.array([c[0] for c in classes])
    act = cls[m.act[:, reps]]
    hit = first_mismatch(act[:, cls], cls[m.act])
    if hit is not None:
        raise ConsistencyError(f"action not well defined on classes at {hit}")
    q = FiniteModule(m.truss, heap, act, m.unital)
    return ModuleQuotient(m, tuple(classes), tuple(class_of), q, ModuleMorphism(m, q, tuple(class_of)))


def quotient_module(m: FiniteModule, n) -> ModuleQuotient:
    """``M / N`` for a submodule ``N``, classes by smallest member."""
    if not isinstance(n, Submodule):
        n = submodule(m, n)
    elif n.parent is not m and n.parent != m:
        raise PreconditionError("quotient", "submodule belongs to another module")
    if not n.action_closed:
        raise PreconditionError("quotient", f"{n.elems} is not a submodule")
    if not is_abelian(m.heap):
        raise PreconditionError("quotient", "module heap is not abelian")
    classes, class_of = congruence_classes(m.heap, SubHeap(m.heap, n.elems))
    q = quotient_by_partition(m, classes, class_of)
    report = validate_module_morphism(q.projection)
    if not report:
        raise ConsistencyError(f"canonical projection is not T-linear: {report.describe()}")
    return q


# -- products ---------------------------------------------------------------------


def product_module(m: FiniteModule, n: FiniteModule) -> FiniteModule:
    """``M x N`` with componentwise heap and action; ``(a, b)`` at ``a * |N| + b``."""
    if not same_truss(m, n):
        raise PreconditionError("product", "factors are modules over different trusses")
    k = n.size
    idx = np.arange(m.size * k)
    first, second = idx // k, idx % k
    act = m.act[:, first] * k + n.act[:, second]
    return FiniteModule(m.truss, product_heap(m.heap, n.heap), act, m.unital and n.unital)


def pair_index(a, b, n: FiniteModule) -> int:
    return a * n.size + b


def projections(m: FiniteModule, n: FiniteModule, p: FiniteModule = None):
    p = p or product_module(m, n)
    k = n.size
    return (
        ModuleMorphism(p, m, tuple(i // k for i in range(p.size))),
        ModuleMorphism(p, n, tuple(i % k for i in range(p.size))),
    )


def injection_first(m: FiniteModule, n: FiniteModule, base: int, p: FiniteModule = None) -> ModuleMorphism:
    """``a -> (a, base)``; T-linear exactly when ``base`` absorbs."""
    p = p or product_module(m, n)
    return ModuleMorphism(m, p, tuple(a * n.size + base for a in range(m.size)))


def injection_second(m: FiniteModule, n: FiniteModule, base: int, p: FiniteModule = None) -> ModuleMorphism:
    p = p or product_module(m, n)
    return ModuleMorphism(n, p, tuple(base * n.size + b for b in range(n.size)))


# -- first isomorphism theorem ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class FirstIsomorphism:
    quotient: ModuleQuotient
    image: Submodule
    iso: ModuleMorphism
    induced_structure_used: bool


def first_isomorphism(f: ModuleMorphism) -> FirstIsomorphism:
    """``M / Ker f ~= Im f`` through the fibre partition of ``f``.

    The image of a T-linear map is always action-closed, so it is a module
    with the structure restricted from the codomain; the induced-structure
    fallback is therefore never exercised and the flag stays ``False``.
    """
    require_morphism(f)
    classes, class_of = partition_from_labels(f.map)
    q = quotient_by_partition(f.dom, classes, class_of)
    im = image(f)
    iso = ModuleMorphism(q.module, im.module, tuple(im.index(f(c[0])) for c in classes))
    for c in classes:
        if len({f(x) for x in c}) != 1:
            raise ConsistencyError(f"class {c} is not inside one fibre")
    report = validate_module_morphism(iso)
    if not report or not iso.is_bijective():
        raise ConsistencyError(f"canonical map M/Ker f -> Im f is not an isomorphism: {report.describe()}")
    return FirstIsomorphism(q, im, iso, False)


def is_isomorphism(f: ModuleMorphism) -> bool:
    return f.is_bijective() and bool(validate_module_morphism(f))


# -- the functor T on modules -------------------------------------------------------


def module_of_ring_module(n: FiniteRingModule, truss: FiniteTruss = None) -> FiniteModule:
    """``T(N) = (H(N, +), .)`` over ``T(R)``.

    Passing ``truss`` reuses an existing ``T(R)`` object so that all images
    share one truss instance.
    """
    report = validate_ring_module(n)
    if not report:
        raise InvalidStructure("ring module", report)
    truss = truss or truss_of_ring(n.ring)
    return FiniteModule(truss, heap_of_group(n.group), n.act.copy(), n.unital)


def morphism_of_ring_morphism(f: RingModuleMorphism, dom: FiniteModule, cod: FiniteModule) -> ModuleMorphism:
    """``T(f) = f``: the same map table between the images."""
    return ModuleMorphism(dom, cod, f.map)
