import numpy as np
import pytest

import oracles
from trusslab.errors import StructureError
from trusslab.heap import (
    FiniteGroup,
    FiniteHeap,
    HeapMorphism,
    congruence_classes,
    cyclic_group,
    cyclic_heap,
    fiber,
    group_of_heap,
    heap_of_group,
    is_abelian,
    is_subheap,
    kernel_subheap,
    product_heap,
    quotient_heap,
    singleton_heap,
    solve_fourth,
    subheap_closure,
    validate_group,
    validate_heap,
    validate_heap_morphism,
)


def mod2():
    return HeapMorphism(cyclic_heap(4), cyclic_heap(2), (0, 1, 0, 1))


class TestValidation:
    def test_singleton(self):
        assert validate_heap(singleton_heap())

    def test_cyclic_three(self):
        assert validate_heap(cyclic_heap(3))
        assert oracles.is_heap(cyclic_heap(3).op.tolist())

    def test_constant_in_first_fails_malcev(self):
        op = np.empty((3, 3, 3), dtype=int)
        op[:] = np.arange(3)[:, None, None]
        rep = validate_heap(op)
        assert not rep and rep.law == "malcev"
        # [b, b, a] = b != a first fails at (a, b) = (0, 1)
        assert rep.witness == (0, 1)
        assert oracles.first_heap_failure(op.tolist()) == ("malcev", (0, 1))

    def test_associativity_witness_matches_oracle(self):
        op = cyclic_heap(4).op.copy()
        op[1, 2, 3] = 0
        op[3, 2, 1] = 0
        rep = validate_heap(op)
        law, witness = oracles.first_heap_failure(op.tolist())
        assert (rep.law, rep.witness) == (law, witness)

    def test_bad_shape(self):
        with pytest.raises(StructureError):
            FiniteHeap(np.zeros((2, 2, 3), dtype=int))

    def test_out_of_range_names_index(self):
        op = cyclic_heap(3).op.copy()
        op[1, 2, 0] = 3
        with pytest.raises(StructureError, match=r"op\[1\]\[2\]\[0\]"):
            FiniteHeap(op)

    def test_group_heap_shortcut_never_hides_a_failure(self):
        # a Latin-cube-ish table that passes Mal'cev but is no heap
        op = np.zeros((3, 3, 3), dtype=int)
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    op[a, b, c] = (a + c - b) % 3 if b != 1 or a == 1 or c == 1 else (a + c + 2) % 3
        rep = validate_heap(op)
        assert bool(rep) == oracles.is_heap(op.tolist())


class TestAbelian:
    def test_small(self):
        assert is_abelian(singleton_heap())
        assert is_abelian(cyclic_heap(3))

    def test_s3_not_abelian(self):
        mul, e = oracles.s3_mul()
        h = heap_of_group(FiniteGroup(np.array(mul), e))
        rep = is_abelian(h)
        assert not rep
        a, b, c = rep.witness
        assert h(a, b, c) != h(c, b, a)
        assert not oracles.is_abelian(h.op.tolist())


class TestGroups:
    def test_evaluation(self):
        assert cyclic_heap(3)(1, 2, 0) == 2
        assert cyclic_heap(4)(3, 1, 2) == 0
        for a in range(5):
            assert cyclic_heap(5)(a, a, a) == a

    def test_retract(self):
        g = group_of_heap(cyclic_heap(3), 0)
        assert g.mul[1, 2] == 0
        assert g.inv[1] == 2
        for e in range(3):
            r = group_of_heap(cyclic_heap(3), e)
            assert all(r.mul[e, a] == a for a in range(3))

    def test_round_trips(self):
        h = product_heap(cyclic_heap(2), cyclic_heap(3))
        for e in range(h.size):
            g = group_of_heap(h, e)
            assert validate_group(g)
            assert np.array_equal(heap_of_group(g).op, h.op)
            assert group_of_heap(heap_of_group(g), g.identity) == g

    def test_invalid_group_rejected(self):
        with pytest.raises(Exception):
            heap_of_group(FiniteGroup(np.array([[0, 0], [0, 0]]), 0))


class TestSolving:
    def test_examples(self):
        assert solve_fourth(cyclic_heap(3), y=1, z=2, w=0) == 2
        assert solve_fourth(cyclic_heap(4), x=1, z=3, w=2) == 2
        for x in range(4):
            assert solve_fourth(cyclic_heap(4), x=x, y=3, z=3) == x

    def test_all_positions_agree_with_table(self):
        h = cyclic_heap(5)
        for x, y, z in [(1, 2, 3), (4, 0, 2), (3, 3, 1)]:
            w = h(x, y, z)
            assert solve_fourth(h, y=y, z=z, w=w) == x
            assert solve_fourth(h, x=x, z=z, w=w) == y
            assert solve_fourth(h, x=x, y=y, w=w) == z


class TestSubheaps:
    def test_examples(self):
        h = cyclic_heap(4)
        assert is_subheap(h, {0, 2})
        assert not is_subheap(h, {0, 1})
        assert subheap_closure(h, {0, 1}).elems == (0, 1, 2, 3)
        assert is_subheap(h, range(4))

    def test_quotients(self):
        q = quotient_heap(cyclic_heap(4), {0, 2})
        assert [list(c) for c in q.classes] == [[0, 2], [1, 3]]
        assert validate_heap(q.heap) and q.heap.size == 2
        q6 = quotient_heap(cyclic_heap(6), {0, 3})
        assert len(q6.classes) == 3
        assert quotient_heap(cyclic_heap(5), range(5)).heap.size == 1

    def test_classes_match_oracle(self):
        h = cyclic_heap(6)
        for s in ({0, 2, 4}, {1, 4}, {3}):
            classes, _ = congruence_classes(h, subheap_closure(h, s))
            assert [list(c) for c in classes] == oracles.coset_classes(h.op.tolist(), subheap_closure(h, s).elems)


class TestMorphisms:
    def test_mod2(self):
        assert validate_heap_morphism(mod2())

    def test_bad_map_witness(self):
        f = HeapMorphism(cyclic_heap(4), cyclic_heap(2), (0, 1, 0, 0))
        rep = validate_heap_morphism(f)
        assert not rep
        x, y, z = rep.witness
        assert f(cyclic_heap(4)(x, y, z)) != cyclic_heap(2)(f(x), f(y), f(z))

    def test_fibers(self):
        assert fiber(mod2().map, 0) == (0, 2)
        assert kernel_subheap(mod2(), 1).elems == (1, 3)
        ident = HeapMorphism(cyclic_heap(3), cyclic_heap(3), (0, 1, 2))
        assert fiber(ident.map, 2) == (2,)
        const = HeapMorphism(cyclic_heap(3), cyclic_heap(3), (1, 1, 1))
        assert fiber(const.map, 1) == (0, 1, 2)


def test_cyclic_group_valid():
    for n in range(1, 7):
        assert validate_group(cyclic_group(n))
