"""Finite heaps encoded as ternary operation tables.

A heap on ``{0..n-1}`` is stored as an ``(n, n, n)`` integer array ``op``
with ``op[a, b, c] = [a, b, c]``.  Everything here is exhaustive: laws are
checked on every tuple, never sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConsistencyError, InvalidStructure, PreconditionError, StructureError
from .report import ValidationReport, coerce_table, first_mismatch


@dataclass(frozen=True, eq=False)
class FiniteHeap:
    op: np.ndarray

    def __post_init__(self):
        op = np.asarray(self.op)
        if op.ndim != 3 or len(set(op.shape)) != 1:
            raise StructureError(f"heap op: expected an (n, n, n) table, got shape {op.shape}")
        n = op.shape[0]
        if n == 0:
            raise StructureError("heap op: empty carrier")
        object.__setattr__(self, "op", coerce_table(op, (n, n, n), n, "op"))

    @property
    def size(self) -> int:
        return self.op.shape[0]

    @cached_property
    def _rows(self):
        return self.op.tolist()

    def __call__(self, a, b, c) -> int:
        return self._rows[a][b][c]

    def __eq__(self, other):
        return isinstance(other, FiniteHeap) and np.array_equal(self.op, other.op)

    def __hash__(self):
        return hash(self.op.tobytes())

    def __repr__(self):
        return f"FiniteHeap(size={self.size})"


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: np.ndarray
    identity: int
    inv: tuple[int, ...] | None = None

    def __post_init__(self):
        mul = np.asarray(self.mul)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise StructureError(f"group mul: expected a non-empty square table, got {mul.shape}")
        n = mul.shape[0]
        mul = coerce_table(mul, (n, n), n, "mul")
        object.__setattr__(self, "mul", mul)
        if not 0 <= self.identity < n:
            raise StructureError(f"group id {self.identity} out of range 0..{n - 1}")
        if self.inv is None:
            inv = []
            for a in range(n):
                hits = np.flatnonzero(mul[a] == self.identity)
                # no right inverse: fall back to the identity so validation reports it
                inv.append(int(hits[0]) if hits.size else self.identity)
            object.__setattr__(self, "inv", tuple(inv))
        else:
            inv = tuple(int(x) for x in coerce_table(self.inv, (n,), n, "inv"))
            object.__setattr__(self, "inv", inv)

    @property
    def size(self) -> int:
        return self.mul.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.identity == other.identity
            and np.array_equal(self.mul, other.mul)
            and self.inv == other.inv
        )

    def __hash__(self):
        return hash((self.mul.tobytes(), self.identity))

    def __repr__(self):
        return f"FiniteGroup(size={self.size}, identity={self.identity})"


@dataclass(frozen=True, eq=False)
class SubHeap:
    parent: FiniteHeap
    elems: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted({int(x) for x in self.elems}))
        if not elems:
            raise StructureError("sub-heap must be non-empty")
        if elems[0] < 0 or elems[-1] >= self.parent.size:
            raise StructureError(f"sub-heap elements {elems} outside carrier")
        object.__setattr__(self, "elems", elems)
        if not is_subheap(self.parent, elems):
            raise PreconditionError("subheap", f"{elems} is not closed under the heap operation")

    def __contains__(self, x):
        return x in self._set

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    @cached_property
    def _set(self):
        return frozenset(self.elems)

    def __eq__(self, other):
        return isinstance(other, SubHeap) and self.parent == other.parent and self.elems == other.elems

    def __hash__(self):
        return hash(self.elems)


@dataclass(frozen=True, eq=False)
class HeapMorphism:
    dom: FiniteHeap
    cod: FiniteHeap
    map: tuple[int, ...]

    def __post_init__(self):
        table = coerce_table(self.map, (self.dom.size,), self.cod.size, "map")
        object.__setattr__(self, "map", tuple(int(x) for x in table))

    def __call__(self, x) -> int:
        return self.map[x]

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def __eq__(self, other):
        return (
            isinstance(other, HeapMorphism)
            and self.map == other.map
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        return hash(self.map)


def _as_heap(h) -> FiniteHeap:
    return h if isinstance(h, FiniteHeap) else FiniteHeap(h)


def validate_heap(h) -> ValidationReport:
    """Check the Mal'cev identities, then associativity, on every tuple.

    Accepts a :class:`FiniteHeap` or a raw ``op`` table; malformed tables raise
    :class:`StructureError` rather than producing a failed report.  Mal'cev
    witnesses are the pair ``(a, b)``; associativity witnesses are
    ``(a, b, c, d, e)``.
    """
    op = _as_heap(h).op
    n = op.shape[0]
    idx = np.arange(n)
    # [a, b, b] = a and [b, b, a] = a, scanned pair by pair in (a, b) order
    left = op[idx[:, None], idx[None, :], idx[None, :]] == idx[:, None]
    right = op[idx[None, :], idx[None, :], idx[:, None]] == idx[:, None]
    both = np.stack([left, right], axis=-1)
    hit = first_mismatch(both, True)
    if hit is not None:
        a, b, which = hit
        if which == 0:
            return ValidationReport.failed("malcev", (a, b), f"[{a},{b},{b}] = {op[a, b, b]} != {a}")
        return ValidationReport.failed("malcev", (a, b), f"[{b},{b},{a}] = {op[b, b, a]} != {a}")
    if _is_group_heap(op):
        return ValidationReport.passed()
    # not a group heap, so some associativity instance fails; find the first
    for a in range(n):
        lhs = op[op[a]]  # [[a,b,c],d,e] indexed by (b,c,d,e)
        rhs = op[a][:, op]  # [a,b,[c,d,e]]
        hit = first_mismatch(lhs, rhs)
        if hit is not None:
            b, c, d, e = hit
            return ValidationReport.failed(
                "associativity", (a, b, c, d, e),
                f"[[{a},{b},{c}],{d},{e}] = {lhs[hit]} but [{a},{b},[{c},{d},{e}]] = {rhs[hit]}",
            )
    raise ConsistencyError("table is not a group heap yet satisfies every heap law")


def _is_group_heap(op) -> bool:
    """Does ``op`` equal ``a b^-1 c`` for the retract at 0 being a group?

    A table is a heap exactly when this holds, and it costs n^3 instead of
    the n^5 of scanning associativity directly.
    """
    g = FiniteGroup(op[:, 0, :].copy(), 0, tuple(int(x) for x in op[0, :, 0]))
    if not validate_group(g):
        return False
    mul, inv = g.mul, np.array(g.inv)
    return bool(np.array_equal(op, mul[mul[:, inv]]))


def is_abelian(h: FiniteHeap) -> ValidationReport:
    """``[a,b,c] = [c,b,a]`` everywhere; the failed report carries ``(a, b, c)``."""
    op = h.op
    hit = first_mismatch(op, op.transpose(2, 1, 0))
    if hit is None:
        return ValidationReport.passed()
    a, b, c = hit
    return ValidationReport.failed("abelian", hit, f"[{a},{b},{c}] = {op[a, b, c]} but [{c},{b},{a}] = {op[c, b, a]}")


def validate_group(g: FiniteGroup) -> ValidationReport:
    mul, e = g.mul, g.identity
    n = g.size
    hit = first_mismatch(mul[mul], mul[:, mul])
    if hit is not None:
        return ValidationReport.failed("associativity", hit)
    idx = np.arange(n)
    hit = first_mismatch(np.stack([mul[e], mul[:, e]], axis=-1), np.stack([idx, idx], axis=-1))
    if hit is not None:
        return ValidationReport.failed("identity", hit[:1])
    inv = np.array(g.inv)
    hit = first_mismatch(np.stack([mul[idx, inv], mul[inv, idx]], axis=-1), e)
    if hit is not None:
        return ValidationReport.failed("inverse", hit[:1])
    return ValidationReport.passed()


def group_is_abelian(g: FiniteGroup) -> bool:
    return bool(np.array_equal(g.mul, g.mul.T))


def heap_of_group(g: FiniteGroup) -> FiniteHeap:
    """The heap ``[a, b, c] = a b^-1 c``."""
    report = validate_group(g)
    if not report:
        raise InvalidStructure("group", report)
    a_binv = g.mul[:, np.array(g.inv)]
    return FiniteHeap(g.mul[a_binv])


def group_of_heap(h: FiniteHeap, e: int) -> FiniteGroup:
    """Retract a heap to a group at base point ``e``: ``a.b = [a,e,b]``, ``a^-1 = [e,a,e]``."""
    if not 0 <= e < h.size:
        raise StructureError(f"base point {e} out of range 0..{h.size - 1}")
    return FiniteGroup(h.op[:, e, :].copy(), e, tuple(int(x) for x in h.op[e, :, e]))


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, 0, tuple(int(x) for x in (-idx) % n))


def cyclic_heap(n: int) -> FiniteHeap:
    """Heap of Z/n: ``[a,b,c] = a - b + c mod n``."""
    idx = np.arange(n)
    return FiniteHeap((idx[:, None, None] - idx[None, :, None] + idx[None, None, :]) % n)


def singleton_heap() -> FiniteHeap:
    return FiniteHeap(np.zeros((1, 1, 1), dtype=np.int64))


def product_heap(h: FiniteHeap, k: FiniteHeap) -> FiniteHeap:
    """Componentwise heap on pairs, pair ``(a, b)`` stored at ``a * |k| + b``."""
    m = k.size
    n = h.size * m
    idx = np.arange(n)
    first, second = idx // m, idx % m
    op = (
        h.op[np.ix_(first, first, first)] * m
        + k.op[np.ix_(second, second, second)]
    )
    return FiniteHeap(op)


def solve_fourth(h: FiniteHeap, x=None, y=None, z=None, w=None) -> int:
    """Complete ``[x, y, z] = w`` given any three of the four.

    Uses the closed forms ``x = [w,z,y]``, ``y = [z,w,x]``, ``z = [y,x,w]``
    and cross-checks uniqueness by scanning the whole carrier.
    """
    given = {"x": x, "y": y, "z": z, "w": w}
    missing = [k for k, v in given.items() if v is None]
    if len(missing) != 1:
        raise ValueError("exactly one of x, y, z, w must be omitted")
    for k, v in given.items():
        if v is not None and not 0 <= v < h.size:
            raise StructureError(f"{k}={v} out of range 0..{h.size - 1}")
    unknown = missing[0]
    if unknown == "w":
        return h(x, y, z)
    if unknown == "x":
        candidate = h(w, z, y)
        hits = [a for a in range(h.size) if h(a, y, z) == w]
    elif unknown == "y":
        candidate = h(z, w, x)
        hits = [a for a in range(h.size) if h(x, a, z) == w]
    else:
        candidate = h(y, x, w)
        hits = [a for a in range(h.size) if h(x, y, a) == w]
    if hits != [candidate]:
        raise ConsistencyError(f"solving for {unknown}: closed form {candidate}, scan found {hits}; not a heap")
    return candidate


def is_subheap(h: FiniteHeap, s) -> bool:
    elems = sorted(set(s))
    if not elems:
        return False
    idx = np.array(elems)
    vals = h.op[np.ix_(idx, idx, idx)]
    return bool(np.isin(vals, idx).all())


def subheap_closure(h: FiniteHeap, s) -> SubHeap:
    """Smallest sub-heap containing ``s`` (fixpoint of applying ``op``)."""
    current = {int(x) for x in s}
    if not current:
        raise StructureError("closure of an empty set is undefined (empty sub-heaps are not modelled)")
    while True:
        idx = np.array(sorted(current))
        grown = current | {int(v) for v in np.unique(h.op[np.ix_(idx, idx, idx)])}
        if grown == current:
            return SubHeap(h, tuple(sorted(current)))
        current = grown


@dataclass(frozen=True, eq=False)
class HeapQuotient:
    """``H / S`` together with the data needed to move between levels.

    ``classes[i]`` lists the members of class ``i`` (classes ordered by their
    smallest member) and ``class_of[a]`` is the class index of ``a``.
    """

    parent: FiniteHeap
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    heap: FiniteHeap
    projection: HeapMorphism


def partition_from_labels(labels) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Canonical partition from any labelling: classes by smallest member, ascending."""
    groups: dict = {}
    for a, lab in enumerate(labels):
        groups.setdefault(lab, []).append(a)
    classes = tuple(sorted((tuple(g) for g in groups.values()), key=lambda c: c[0]))
    class_of = [0] * len(labels)
    for i, cls in enumerate(classes):
        for a in cls:
            class_of[a] = i
    return classes, tuple(class_of)


def induced_table(op: np.ndarray, classes, class_of) -> np.ndarray:
    """Push a ternary table through a partition, asserting independence of representatives."""
    reps = np.array([c[0] for c in classes])
    cls = np.array(class_of)
    table = cls[op[np.ix_(reps, reps, reps)]]
    full = cls[op]
    hit = first_mismatch(table[np.ix_(cls, cls, cls)], full)
    if hit is not None:
        raise ConsistencyError(f"operation not well defined on classes at {hit}")
    return table


def congruence_classes(h: FiniteHeap, s: SubHeap):
    """Partition of ``h`` by ``a ~ b iff [a, b, s] in S``, checked for every ``s``."""
    members = np.zeros(h.size, dtype=bool)
    members[list(s.elems)] = True
    rel_all = members[h.op[:, :, list(s.elems)]]  # (a, b, s)
    rel = rel_all[:, :, 0]
    if not (rel_all == rel[:, :, None]).all():
        raise ConsistencyError("relation depends on the chosen element of S")
    labels = [int(np.flatnonzero(rel[a])[0]) for a in range(h.size)]
    for a in range(h.size):
        if not np.array_equal(rel[a], rel[labels[a]]):
            raise ConsistencyError(f"relation ~_S is not an equivalence at {a}")
    return partition_from_labels(labels)


def quotient_heap(h: FiniteHeap, s) -> HeapQuotient:
    if not is_abelian(h):
        raise PreconditionError("quotient", "quotients are only built for abelian heaps")
    if not isinstance(s, SubHeap):
        if not is_subheap(h, s):
            raise PreconditionError("quotient", f"{sorted(set(s))} is not a sub-heap")
        s = SubHeap(h, tuple(s))
    classes, class_of = congruence_classes(h, s)
    for x in s.elems:
        if classes[class_of[x]] != s.elems:
            raise ConsistencyError(f"class of {x} differs from S")
    heap = FiniteHeap(induced_table(h.op, classes, class_of))
    return HeapQuotient(h, classes, class_of, heap, HeapMorphism(h, heap, class_of))


def validate_heap_morphism(f: HeapMorphism) -> ValidationReport:
    fm = np.array(f.map)
    lhs = fm[f.dom.op]
    rhs = f.cod.op[np.ix_(fm, fm, fm)]
    hit = first_mismatch(lhs, rhs)
    if hit is None:
        return ValidationReport.passed()
    x, y, z = hit
    return ValidationReport.failed(
        "heap_morphism", hit, f"f([{x},{y},{z}]) = {lhs[hit]} but [f{x},f{y},f{z}] = {rhs[hit]}"
    )


def fiber(map_, e) -> tuple[int, ...]:
    return tuple(a for a, v in enumerate(map_) if v == e)


def kernel_subheap(f: HeapMorphism, e: int) -> SubHeap:
    """``ker_e f``, the fibre over ``e``; a sub-heap of the *domain*."""
    if e not in set(f.map):
        raise PreconditionError("kernel", f"{e} is not in the image")
    return SubHeap(f.dom, fiber(f.map, e))


def kernel_relation(f) -> tuple[tuple[int, ...], ...]:
    """Partition of the domain by ``f(a) = f(b)``, canonically ordered."""
    return partition_from_labels(f.map)[0]


def identity_heap_morphism(h: FiniteHeap) -> HeapMorphism:
    return HeapMorphism(h, h, tuple(range(h.size)))

