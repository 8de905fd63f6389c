import numpy as np
import pytest

import oracles
from trusslab.errors import PreconditionError, StructureError
from trusslab.heap import cyclic_heap, singleton_heap
from trusslab.truss import (
    FiniteTruss,
    TrussMorphism,
    product_ring,
    truss_is_commutative,
    truss_of_ring,
    validate_ring,
    validate_truss,
    validate_truss_morphism,
    zero_ring,
    zn_ring,
    zn_truss,
)


def test_zn_trusses_valid():
    for n in range(1, 9):
        t = zn_truss(n)
        assert validate_truss(t)
        assert truss_is_commutative(t)


def test_singleton_truss():
    t = FiniteTruss(singleton_heap(), np.zeros((1, 1), dtype=int))
    assert validate_truss(t)
    assert truss_of_ring(zero_ring()).size == 1


def test_additive_multiplication_is_a_truss():
    # w + (x - y + z) = (w + x) - (w + y) + (w + z), so this distributes
    h = cyclic_heap(4)
    idx = np.arange(4)
    t = FiniteTruss(h, (idx[:, None] + idx[None, :]) % 4)
    assert validate_truss(t)
    assert oracles.first_distributivity_failure(h.op.tolist(), t.mul.tolist()) is None


def test_distributivity_witness_matches_oracle():
    # max is associative but does not distribute over a - b + c
    h = cyclic_heap(4)
    idx = np.arange(4)
    t = FiniteTruss(h, np.maximum(idx[:, None], idx[None, :]))
    rep = validate_truss(t)
    assert not rep
    assert (rep.law, rep.witness) == oracles.first_distributivity_failure(h.op.tolist(), t.mul.tolist())
    w, x, y, z = rep.witness
    assert t.mul[w, h(x, y, z)] != h(t.mul[w, x], t.mul[w, y], t.mul[w, z])


def test_broken_heap_is_a_precondition():
    op = cyclic_heap(3).op.copy()
    op[0, 0, 1] = 2
    with pytest.raises(PreconditionError):
        validate_truss(FiniteTruss(type(cyclic_heap(3))(op), np.zeros((3, 3), dtype=int)))


def test_unit_declaration_checked():
    t = zn_truss(4)
    assert validate_truss(FiniteTruss(t.heap, t.mul, 1))
    rep = validate_truss(FiniteTruss(t.heap, t.mul, 3))
    assert not rep and rep.law == "unit"
    with pytest.raises(StructureError):
        FiniteTruss(t.heap, t.mul, 9)


def test_ring_examples():
    assert zn_truss(4).mul[2, 3] == 2
    r = product_ring(zn_ring(2), zn_ring(2))
    assert validate_ring(r)
    # (1,0) * (1,1) = (1,0), stored as 1*2 + 0
    assert r.mul[2, 3] == 2
    t = truss_of_ring(r)
    assert validate_truss(t) and t.size == 4


def test_product_ring_heap_is_componentwise():
    t = truss_of_ring(product_ring(zn_ring(2), zn_ring(3)))
    for a, b, c in [(1, 4, 5), (0, 3, 2), (5, 5, 1)]:
        pa, pb, pc = divmod(a, 3), divmod(b, 3), divmod(c, 3)
        expected = ((pa[0] - pb[0] + pc[0]) % 2) * 3 + (pa[1] - pb[1] + pc[1]) % 3
        assert t.heap(a, b, c) == expected


def test_morphisms():
    ident = TrussMorphism(zn_truss(4), zn_truss(4), (0, 1, 2, 3))
    assert validate_truss_morphism(ident)
    assert validate_truss_morphism(TrussMorphism(zn_truss(4), zn_truss(2), (0, 1, 0, 1)))
    shift = TrussMorphism(zn_truss(4), zn_truss(4), (1, 2, 3, 0))
    rep = validate_truss_morphism(shift)
    assert not rep and rep.law == "multiplicativity"
    # first lexicographic (a, b) with f(ab) != f(a) f(b)
    m = zn_truss(4).mul
    first = next((a, b) for a in range(4) for b in range(4) if shift(m[a, b]) != m[shift(a), shift(b)])
    assert rep.witness == first == (0, 1)
