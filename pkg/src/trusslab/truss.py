"""Finite trusses, finite rings, and the truss ``T(R)`` of a ring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStructure, PreconditionError, StructureError
from .heap import (
    FiniteGroup,
    FiniteHeap,
    group_is_abelian,
    heap_of_group,
    is_abelian,
    validate_group,
    validate_heap,
    validate_heap_morphism,
    HeapMorphism,
)
from .report import ValidationReport, coerce_table, first_mismatch


@dataclass(frozen=True, eq=False)
class FiniteTruss:
    """An abelian heap with a multiplication table.

    ``one`` is an explicit unitality declaration; it is never inferred.
    """

    heap: FiniteHeap
    mul: np.ndarray
    one: int | None = None

    def __post_init__(self):
        n = self.heap.size
        object.__setattr__(self, "mul", coerce_table(self.mul, (n, n), n, "mul"))
        if self.one is not None and not 0 <= self.one < n:
            raise StructureError(f"unit {self.one} out of range 0..{n - 1}")

    @property
    def size(self) -> int:
        return self.heap.size

    def __eq__(self, other):
        return (
            isinstance(other, FiniteTruss)
            and self.one == other.one
            and self.heap == other.heap
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self):
        return hash((hash(self.heap), self.mul.tobytes(), self.one))

    def __repr__(self):
        return f"FiniteTruss(size={self.size}, one={self.one})"


@dataclass(frozen=True, eq=False)
class FiniteRing:
    add: np.ndarray
    mul: np.ndarray
    zero: int = 0
    one: int | None = None

    def __post_init__(self):
        add = np.asarray(self.add)
        if add.ndim != 2 or add.shape[0] != add.shape[1] or add.shape[0] == 0:
            raise StructureError(f"ring add: expected a non-empty square table, got {add.shape}")
        n = add.shape[0]
        object.__setattr__(self, "add", coerce_table(add, (n, n), n, "add"))
        object.__setattr__(self, "mul", coerce_table(self.mul, (n, n), n, "mul"))
        for name in ("zero", "one"):
            v = getattr(self, name)
            if v is not None and not 0 <= v < n:
                raise StructureError(f"ring {name} {v} out of range 0..{n - 1}")

    @property
    def size(self) -> int:
        return self.add.shape[0]

    @property
    def additive_group(self) -> FiniteGroup:
        return FiniteGroup(self.add, self.zero)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteRing)
            and (self.zero, self.one) == (other.zero, other.one)
            and np.array_equal(self.add, other.add)
            and np.array_equal(self.mul, other.mul)
        )

    def __hash__(self):
        return hash((self.add.tobytes(), self.mul.tobytes()))

    def __repr__(self):
        return f"FiniteRing(size={self.size})"


@dataclass(frozen=True, eq=False)
class TrussMorphism:
    dom: FiniteTruss
    cod: FiniteTruss
    map: tuple[int, ...]

    def __post_init__(self):
        table = coerce_table(self.map, (self.dom.size,), self.cod.size, "map")
        object.__setattr__(self, "map", tuple(int(x) for x in table))

    def __call__(self, x) -> int:
        return self.map[x]


def _distributivity(heap_op, mul):
    """Left then right distributivity; returns a failed report or None."""
    n = mul.shape[0]
    for w in range(n):
        row = mul[w]
        # w[x,y,z] vs [wx,wy,wz]
        hit = first_mismatch(row[heap_op], heap_op[np.ix_(row, row, row)])
        if hit is not None:
            return ValidationReport.failed("left_distributivity", (w, *hit))
    for w in range(n):
        col = mul[:, w]
        hit = first_mismatch(col[heap_op], heap_op[np.ix_(col, col, col)])
        if hit is not None:
            return ValidationReport.failed("right_distributivity", (w, *hit))
    return None


def validate_truss(t: FiniteTruss) -> ValidationReport:
    """Associativity, two-sided distributivity, and the unit law if declared.

    The heap component must already be a valid abelian heap; otherwise a
    :class:`PreconditionError` is raised (that is a different kind of failure
    from a multiplication law breaking).
    """
    if not validate_heap(t.heap) or not is_abelian(t.heap):
        raise PreconditionError("truss", "heap component is not a valid abelian heap")
    mul = t.mul
    hit = first_mismatch(mul[mul], mul[:, mul])
    if hit is not None:
        return ValidationReport.failed("mul_associativity", hit)
    failed = _distributivity(t.heap.op, mul)
    if failed is not None:
        return failed
    if t.one is not None:
        idx = np.arange(t.size)
        hit = first_mismatch(np.stack([mul[t.one], mul[:, t.one]], axis=-1), np.stack([idx, idx], axis=-1))
        if hit is not None:
            return ValidationReport.failed("unit", hit[:1])
    return ValidationReport.passed()


def validate_ring(r: FiniteRing) -> ValidationReport:
    g = r.additive_group
    report = validate_group(g)
    if not report:
        return ValidationReport.failed("add_" + report.law, report.witness)
    if not group_is_abelian(g):
        hit = first_mismatch(r.add, r.add.T)
        return ValidationReport.failed("add_commutativity", hit)
    mul, add = r.mul, r.add
    hit = first_mismatch(mul[mul], mul[:, mul])
    if hit is not None:
        return ValidationReport.failed("mul_associativity", hit)
    n = r.size
    for a in range(n):
        # a(b+c) = ab+ac and (b+c)a = ba+ca, witnesses (a, b, c)
        hit = first_mismatch(mul[a][add], add[np.ix_(mul[a], mul[a])])
        if hit is not None:
            return ValidationReport.failed("left_distributivity", (a, *hit))
        hit = first_mismatch(mul[:, a][add], add[np.ix_(mul[:, a], mul[:, a])])
        if hit is not None:
            return ValidationReport.failed("right_distributivity", (a, *hit))
    if r.one is not None:
        idx = np.arange(n)
        hit = first_mismatch(np.stack([mul[r.one], mul[:, r.one]], axis=-1), np.stack([idx, idx], axis=-1))
        if hit is not None:
            return ValidationReport.failed("unit", hit[:1])
    return ValidationReport.passed()


def truss_of_ring(r: FiniteRing) -> FiniteTruss:
    """``T(R)``: the additive group replaced by its heap, multiplication kept."""
    report = validate_ring(r)
    if not report:
        raise InvalidStructure("ring", report)
    return FiniteTruss(heap_of_group(r.additive_group), r.mul.copy(), r.one)


def validate_truss_morphism(f: TrussMorphism) -> ValidationReport:
    """Heap-morphism law first, then multiplicativity (witness ``(a, b)``)."""
    heap_report = validate_heap_morphism(HeapMorphism(f.dom.heap, f.cod.heap, f.map))
    if not heap_report:
        return heap_report
    fm = np.array(f.map)
    lhs = fm[f.dom.mul]
    rhs = f.cod.mul[np.ix_(fm, fm)]
    hit = first_mismatch(lhs, rhs)
    if hit is None:
        return ValidationReport.passed()
    a, b = hit
    return ValidationReport.failed("multiplicativity", hit, f"f({a}*{b}) = {lhs[hit]} but f{a}*f{b} = {rhs[hit]}")


def zn_ring(n: int) -> FiniteRing:
    idx = np.arange(n)
    return FiniteRing(
        (idx[:, None] + idx[None, :]) % n,
        (idx[:, None] * idx[None, :]) % n,
        0,
        1 % n if n > 1 else 0,
    )


def zero_ring() -> FiniteRing:
    return FiniteRing(np.zeros((1, 1), dtype=np.int64), np.zeros((1, 1), dtype=np.int64), 0, 0)


def product_ring(r: FiniteRing, s: FiniteRing) -> FiniteRing:
    """Componentwise ring on pairs, ``(a, b)`` stored at ``a * |S| + b``."""
    m = s.size
    idx = np.arange(r.size * m)
    first, second = idx // m, idx % m

    def pair_table(left, right):
        return left[np.ix_(first, first)] * m + right[np.ix_(second, second)]

    one = None
    if r.one is not None and s.one is not None:
        one = r.one * m + s.one
    return FiniteRing(pair_table(r.add, s.add), pair_table(r.mul, s.mul), r.zero * m + s.zero, one)


def zn_truss(n: int) -> FiniteTruss:
    return truss_of_ring(zn_ring(n))


def truss_is_commutative(t: FiniteTruss) -> bool:
    return bool(np.array_equal(t.mul, t.mul.T))


def ring_is_commutative(r: FiniteRing) -> bool:
    return bool(np.array_equal(r.mul, r.mul.T))
