import pytest

import oracles
from trusslab.corpus import degenerate_grid
from trusslab.diagrams import make_diagram
from trusslab.errors import HypothesisError, PreconditionError, StructureError
from trusslab.exact import is_short_exact
from trusslab.factor import factor_through_epi, factor_through_mono, splitting
from trusslab.lemmas import five_lemma, induced_epi_map, induced_mono_map, nine_lemma, short_five
from trusslab.module import (
    ModuleMorphism,
    constant,
    identity,
    injection_first,
    product_module,
    projections,
    quotient_module,
    singleton_module,
    submodule,
)


def _ident(m):
    return tuple(range(m.size))


def _snake(z4, verticals):
    modules = {"M1": z4.z2, "M": z4.z4, "M2": z4.z2, "N1": z4.z2, "N": z4.z4, "N2": z4.z2}
    maps = {("M1", "M"): z4.f.map, ("M", "M2"): z4.g.map, ("N1", "N"): z4.f.map, ("N", "N2"): z4.g.map}
    maps.update(zip((("M1", "N1"), ("M", "N"), ("M2", "N2")), verticals))
    return make_diagram("snake", modules, maps)


# -- short five and five ------------------------------------------------------------


def test_short_five_identity(z4):
    r = short_five(_snake(z4, ((0, 1), (0, 1, 2, 3), (0, 1))))
    assert r.holds and all(h for _, h, _ in r.clauses)


def test_short_five_zero_ends(z4):
    r = short_five(_snake(z4, ((0, 0), (0, 2, 0, 2), (0, 0))))
    assert r.holds and not any(h for _, h, _ in r.clauses)


def test_short_five_corpus(corpus):
    mono = epi = 0
    for entry in corpus.snakes:
        r = short_five(entry.item)
        assert r.holds, entry.name
        mono += dict((n, h) for n, h, _ in r.clauses)["mono"]
        epi += dict((n, h) for n, h, _ in r.clauses)["epi"]
    assert mono and epi


def test_short_five_wrong_shape(z4):
    with pytest.raises(StructureError):
        short_five(make_diagram("ses", {"M1": z4.z2, "M": z4.z4, "M2": z4.z2},
                                {("M1", "M"): z4.f.map, ("M", "M2"): z4.g.map}))


def _row(z4):
    point = singleton_module(z4.truss)
    mods = (point, z4.z2, z4.z4, z4.z2, point)
    maps = ((0,), z4.f.map, z4.g.map, (0, 0))
    return mods, maps


def test_five_identity(z4):
    mods, maps = _row(z4)
    names = "ABCDE"
    modules = {x: mods[i] for i, x in enumerate(names)}
    modules.update({x + "1": mods[i] for i, x in enumerate(names)})
    arrows = {(names[i], names[i + 1]): maps[i] for i in range(4)}
    arrows.update({(names[i] + "1", names[i + 1] + "1"): maps[i] for i in range(4)})
    arrows.update({(x, x + "1"): _ident(mods[i]) for i, x in enumerate(names)})
    r = five_lemma(make_diagram("row2x5", modules, arrows))
    assert r.holds and r.facts["C_mono"] and r.facts["C_epi"]


def test_five_corpus(corpus):
    assert corpus.five_rows
    for entry in corpus.five_rows:
        assert five_lemma(entry.item).holds, entry.name


# -- nine ---------------------------------------------------------------------------


def test_nine_exact_outer_columns(z4):
    # rows * * *, * X X, * X X with identities: every column exact
    point, x = singleton_module(z4.truss), z4.self4
    modules = {"A1": point, "B1": point, "C1": point, "A": point, "B": x, "C": x, "A2": point, "B2": x, "C2": x}
    i = _ident(x)
    maps = {
        ("A1", "B1"): (0,), ("B1", "C1"): (0,), ("A", "B"): (0,), ("B", "C"): i, ("A2", "B2"): (0,), ("B2", "C2"): i,
        ("A1", "A"): (0,), ("A", "A2"): (0,), ("B1", "B"): (0,), ("B", "B2"): i, ("C1", "C"): (0,), ("C", "C2"): i,
    }
    r = nine_lemma(make_diagram("grid3x3", modules, maps))
    assert r.facts == {"first_exact": True, "last_exact": True} and r.holds


def test_nine_broken_columns(z4):
    r = nine_lemma(degenerate_grid(z4.self4))
    assert r.facts == {"first_exact": False, "last_exact": False} and r.holds


def test_nine_corpus(corpus):
    for entry in corpus.grids + corpus.broken_grids:
        r = nine_lemma(entry.item)
        assert r.holds, entry.name
        d = entry.item
        col = is_short_exact(d.map("A1", "A"), d.map("A", "A2"))
        assert r.facts["first_exact"] == col.exact


def test_nine_mutated_grid_reports_precondition(corpus):
    d = corpus.grids[0].item
    maps = {k: list(f.map) for k, f in d.maps.items()}
    key = ("B", "C")
    maps[key][0] = (maps[key][0] + 1) % d.module("C").size
    with pytest.raises(PreconditionError):
        make_diagram("grid3x3", d.modules, maps)


# -- induced maps ----------------------------------------------------------------------


def test_induced_epi_identity(z4):
    modules = {"A1": z4.z2, "A": z4.z4, "A2": z4.z2, "B1": z4.z2, "B": z4.z4, "B2": z4.z2}
    maps = {("A1", "A"): z4.f.map, ("A", "A2"): z4.g.map, ("B1", "B"): z4.f.map, ("B", "B2"): z4.g.map,
            ("A1", "B1"): (0, 1), ("A", "B"): (0, 1, 2, 3)}
    r = induced_epi_map(make_diagram("epi2x3", modules, maps))
    assert r.h.map == (0, 1) and r.uniqueness == "verified"
    assert r.report.holds and r.report.facts["h_iso"]


def test_induced_mono_identity(z4):
    modules = {"A1": z4.z2, "A": z4.z4, "A2": z4.z2, "B1": z4.z2, "B": z4.z4, "B2": z4.z2}
    maps = {("A1", "A"): z4.f.map, ("A", "A2"): z4.g.map, ("B1", "B"): z4.f.map, ("B", "B2"): z4.g.map,
            ("A", "B"): (0, 1, 2, 3), ("A2", "B2"): (0, 1)}
    r = induced_mono_map(make_diagram("mono2x3", modules, maps))
    assert r.h.map == (0, 1) and r.report.holds


def test_induced_maps_corpus(corpus):
    assert corpus.epi_squares and corpus.mono_squares
    for entry in corpus.epi_squares:
        r = induced_epi_map(entry.item)
        assert r.report.holds and r.uniqueness.startswith("verified"), entry.name
    for entry in corpus.mono_squares:
        r = induced_mono_map(entry.item)
        assert r.report.holds and r.uniqueness.startswith("verified"), entry.name


# -- factorization ------------------------------------------------------------------


def test_factor_through_identity(z4):
    r = factor_through_epi(z4.g, identity(z4.z4), 0, 0)
    assert r.h.map == z4.g.map and r.holds and r.uniqueness == "verified"
    r = factor_through_mono(z4.f, identity(z4.z4))
    assert r.h.map == z4.f.map and r.holds


def test_factor_mod2_through_quotient(z4):
    q = quotient_module(z4.self4, {0, 2})
    mod2 = ModuleMorphism(z4.self4, z4.z2, (0, 1, 0, 1))
    r = factor_through_epi(mod2, q.projection, 0, 0)
    assert r.h.is_bijective() and r.holds


def test_factor_hypothesis_violation(z4):
    # ker_0 of the quotient is {0, 2} but f = id separates 0 and 2
    q = quotient_module(z4.self4, {0, 2})
    with pytest.raises(HypothesisError) as info:
        factor_through_epi(identity(z4.self4), q.projection, 0, 0)
    assert info.value.witness == 2


def test_factor_through_inclusion(z4):
    double = ModuleMorphism(z4.z2, z4.self4, (0, 2))
    inc = submodule(z4.self4, {0, 2}).inclusion
    r = factor_through_mono(double, inc)
    assert r.h.is_surjective() and r.holds


def test_factor_through_mono_constant(z4):
    c = constant(z4.z2, z4.self4, 0)
    r = factor_through_mono(c, z4.f)
    assert r.h.map == (0, 0)
    with pytest.raises(HypothesisError):
        factor_through_mono(identity(z4.z4), z4.f)


# -- splitting ------------------------------------------------------------------------


def test_nonsplit_z2_z4_z2(z4):
    r = splitting(z4.f, z4.g)
    assert not r.has_section and not r.has_retraction and not r.has_product_iso
    assert r.agree and not r.split
    # cross-check the section search by brute force
    assert oracles.sections(list(z4.f.map), list(z4.g.map), z4.z4, z4.z2) == []
    assert oracles.retractions(list(z4.f.map), list(z4.g.map), z4.z2, z4.z4) == []


def test_product_splits(z4):
    p = product_module(z4.z2, z4.z2)
    inj = injection_first(z4.z2, z4.z2, 0, p)
    _, pi2 = projections(z4.z2, z4.z2, p)
    r = splitting(inj, pi2)
    assert r.split and r.agree
    assert r.phi_from_section is not None and r.phi_from_retraction is not None


def test_singleton_quotient_splits(z4):
    point = singleton_module(z4.truss)
    r = splitting(identity(z4.self4), constant(z4.self4, point, 0))
    assert r.split


def test_splitting_needs_exact(z4):
    with pytest.raises(PreconditionError):
        splitting(identity(z4.self4), identity(z4.self4))


def test_splitting_corpus(corpus):
    for s in corpus.sequences:
        r = splitting(s.f, s.g)
        assert r.agree, s.name
        if s.f.cod.size ** s.g.cod.size <= 4096:
            secs = oracles.sections(list(s.f.map), list(s.g.map), s.f.cod, s.g.cod)
            assert r.has_section == bool(secs), s.name
