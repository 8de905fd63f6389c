import pytest

from trusslab.diagrams import make_diagram, twist
from trusslab.errors import PreconditionError, StructureError
from trusslab.module import induced_module, product_module, trivial_action_module
from trusslab.snake import snake, snake_all_absorbers


def _snake(z4, verticals):
    modules = {"M1": z4.z2, "M": z4.z4, "M2": z4.z2, "N1": z4.z2, "N": z4.z4, "N2": z4.z2}
    maps = {("M1", "M"): z4.f.map, ("M", "M2"): z4.g.map, ("N1", "N"): z4.f.map, ("N", "N2"): z4.g.map}
    maps.update(zip((("M1", "N1"), ("M", "N"), ("M2", "N2")), verticals))
    return make_diagram("snake", modules, maps)


def test_identity_verticals(z4):
    r = snake(_snake(z4, ((0, 1), (0, 1, 2, 3), (0, 1))))
    assert r.signature() == {"kernel_sizes": [1, 1, 1], "cokernel_sizes": [1, 1, 1], "exact_positions": 4}


def test_doubling_example(z4):
    # f = times 2 on Z/4, zero maps on the ends
    r = snake(_snake(z4, ((0, 0), (0, 2, 0, 2), (0, 0))))
    assert r.signature()["kernel_sizes"] == [2, 2, 2]
    assert r.signature()["cokernel_sizes"] == [2, 2, 2]
    assert len(r.witnesses) == 4
    # every preimage of every kernel element was tried
    assert r.preimages_checked == 4
    assert r.to_dict()["maps"]["delta"] == [0, 1]


def test_non_absorber_rejected(z4):
    d = _snake(z4, ((0, 1), (0, 1, 2, 3), (0, 1)))
    with pytest.raises(PreconditionError):
        snake(d, 1)


def test_non_commuting_square_rejected(z4):
    with pytest.raises(PreconditionError) as info:
        _snake(z4, ((0, 1), (0, 0, 0, 0), (0, 1)))
    assert "square" in info.value.name


def test_wrong_shape(z4):
    d = make_diagram("ses", {"M1": z4.z2, "M": z4.z4, "M2": z4.z2}, {("M1", "M"): z4.f.map, ("M", "M2"): z4.g.map})
    with pytest.raises(StructureError):
        snake(d)


def test_all_absorbers_on_wide_snake(z4):
    # M1 with two absorbers: Z/2 x (trivial Z/2)
    triv = trivial_action_module(z4.truss, z4.z2.heap)
    m1 = product_module(z4.z2, triv)
    m = product_module(z4.z4, triv)
    f = tuple(z4.f.map[a] * 2 + b for a in range(2) for b in range(2))
    g = tuple(z4.g.map[x // 2] for x in range(8))
    modules = {"M1": m1, "M": m, "M2": z4.z2, "N1": m1, "N": m, "N2": z4.z2}
    d = make_diagram("snake", modules, {
        ("M1", "M"): f, ("M", "M2"): g, ("N1", "N"): f, ("N", "N2"): g,
        ("M1", "N1"): tuple(range(4)), ("M", "N"): tuple(range(8)), ("M2", "N2"): (0, 1),
    })
    out = snake_all_absorbers(d)
    assert out["absorbers"] == [0, 1]
    assert out["stable"]


def test_twisted_snake(z4):
    d = _snake(z4, ((0, 0), (0, 2, 0, 2), (0, 0)))
    t = twist(d, 1)
    assert t.module("M1") == induced_module(z4.z2, 1)
    assert snake(t).signature() == snake(d).signature()


def test_corpus_snakes(corpus):
    assert len(corpus.snakes) >= 12
    for entry in corpus.snakes:
        out = snake_all_absorbers(entry.item)
        assert out["stable"], entry.name
        assert all(len(r.witnesses) == 4 for r in out["results"])
