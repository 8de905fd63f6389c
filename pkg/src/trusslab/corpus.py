"""Deterministic corpus of structures, sequences and diagrams over ``T(Z/n)``.

Everything is built from modules over the rings ``Z/n``: cyclic modules,
direct sums, their submodules and quotients.  The functor ``T`` carries
these to truss modules; induced-action twists then move the examples away
from the ring case.  Each family draws from its own RNG stream derived from
the seed, so asking for one family never changes another.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement

from .diagrams import Diagram, get_shape, make_diagram, twist
from .errors import PreconditionError, TrussLabError
from .exact import t_functor_ses
from .heap import cyclic_heap, product_heap
from .hom import sample_hom
from .module import (
    FiniteModule,
    ModuleMorphism,
    Submodule,
    absorbers,
    compose,
    constant,
    identity,
    induced_module,
    injection_first,
    module_of_ring_module,
    product_module,
    projections,
    quotient_module,
    self_module,
    singleton_module,
    trivial_action_module,
)
from .ringmod import (
    FiniteRingModule,
    cyclic_ring_module,
    direct_sum,
    ring_closure,
    ring_quotient,
    ring_submodule,
    ring_submodules,
)
from .truss import FiniteRing, FiniteTruss, product_ring, truss_of_ring, zn_ring


@dataclass(frozen=True)
class CorpusConfig:
    rings: tuple[int, ...] = (2, 3, 4)
    max_size: int = 8
    seed: int = 0
    count: int = 10

    def __post_init__(self):
        if not self.rings or any(n < 1 for n in self.rings):
            raise ValueError("rings must be a non-empty list of positive integers")
        if self.max_size < 1 or self.count < 0:
            raise ValueError("max_size must be positive and count non-negative")

    def to_dict(self) -> dict:
        return {"rings": list(self.rings), "max_size": self.max_size, "seed": self.seed, "count": self.count}


@dataclass(frozen=True, eq=False)
class Named:
    name: str
    item: object


@dataclass(frozen=True, eq=False)
class Sequence3:
    """A pair ``M -f-> N -g-> P`` with a label saying how it was produced."""

    name: str
    f: ModuleMorphism
    g: ModuleMorphism
    kind: str = "exact"


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class Corpus:
    def __init__(self, cfg: CorpusConfig):
        self.cfg = cfg

    def rng(self, family: str) -> random.Random:
        return random.Random(f"{self.cfg.seed}/{family}")

    # -- rings and structures ------------------------------------------------

    @cached_property
    def rings(self) -> dict[int, FiniteRing]:
        return {n: zn_ring(n) for n in self.cfg.rings}

    @cached_property
    def trusses(self) -> dict[int, FiniteTruss]:
        return {n: truss_of_ring(r) for n, r in self.rings.items()}

    @cached_property
    def ring_modules(self) -> list[Named]:
        """Cyclic modules and two-term direct sums, as ``(n, name)`` keyed entries."""
        out = []
        for n, r in self.rings.items():
            cyc = {d: cyclic_ring_module(r, d) for d in divisors(n)}
            for d in divisors(n):
                if d <= self.cfg.max_size:
                    out.append(Named(f"Z{n}:Z{d}", (n, cyc[d])))
            for a, b in combinations_with_replacement(sorted(d for d in divisors(n) if d > 1), 2):
                if a * b <= self.cfg.max_size:
                    out.append(Named(f"Z{n}:Z{b}+Z{a}", (n, direct_sum(cyc[b], cyc[a]))))
        return out

    @cached_property
    def heaps(self) -> list[Named]:
        out = []
        for n in self.cfg.rings:
            if n <= self.cfg.max_size:
                out.append(Named(f"H(Z{n})", cyclic_heap(n)))
        for a, b in combinations_with_replacement(sorted(self.cfg.rings), 2):
            if a * b <= self.cfg.max_size:
                out.append(Named(f"H(Z{a})xH(Z{b})", product_heap(cyclic_heap(a), cyclic_heap(b))))
        return out

    @cached_property
    def structure_trusses(self) -> list[Named]:
        out = [Named(f"T(Z{n})", t) for n, t in self.trusses.items() if n <= self.cfg.max_size]
        for a, b in combinations_with_replacement(sorted(self.cfg.rings), 2):
            if a * b <= self.cfg.max_size:
                out.append(Named(f"T(Z{a}xZ{b})", truss_of_ring(product_ring(zn_ring(a), zn_ring(b)))))
        return out

    @cached_property
    def modules(self) -> list[Named]:
        """T-modules: images of ring modules, products, trivial actions, twists."""
        out = []
        for entry in self.ring_modules:
            n, rm = entry.item
            out.append(Named(f"T({entry.name})", module_of_ring_module(rm, self.trusses[n])))
        for n, t in self.trusses.items():
            if n > self.cfg.max_size:
                continue
            own = self_module(t)
            out.append(Named(f"Z{n}:self", own))
            out.append(Named(f"Z{n}:trivial", trivial_action_module(t, t.heap)))
            out.append(Named(f"Z{n}:point", singleton_module(t)))
            if n > 1:
                out.append(Named(f"Z{n}:self^(1)", induced_module(own, 1)))
            if n * n <= self.cfg.max_size:
                out.append(Named(f"Z{n}:self x trivial", product_module(own, trivial_action_module(t, t.heap))))
        return out

    # -- ring-level exact sequences ------------------------------------------

    @cached_property
    def ring_sequences(self) -> list[Named]:
        """``0 -> A -> B -> B/A -> 0`` for every listed ``B`` and submodule ``A``."""
        out = []
        for entry in self.ring_modules:
            n, b = entry.item
            for s in ring_submodules(b):
                a, inc = ring_submodule(b, s)
                _, proj = ring_quotient(b, s)
                out.append(Named(f"{entry.name}/{list(s)}", (n, inc, proj)))
        return out

    @cached_property
    def sequences(self) -> list[Sequence3]:
        """T-images of the ring sequences plus twisted copies; all short exact."""
        rng = self.rng("sequences")
        out = []
        for entry in self.ring_sequences:
            n, inc, proj = entry.item
            tf, tg, _ = t_functor_ses(inc, proj, self.trusses[n])
            out.append(Sequence3(f"T({entry.name})", tf, tg))
            if tf.dom.size > 1:
                e = rng.randrange(tf.dom.size)
                d = twist(make_diagram("ses", {"M1": tf.dom, "M": tf.cod, "M2": tg.cod},
                                       {("M1", "M"): tf.map, ("M", "M2"): tg.map}), e)
                out.append(Sequence3(f"T({entry.name})^({e})", d.map("M1", "M"), d.map("M", "M2"), "twisted"))
        return out

    def sequences_over(self, n: int) -> list[Sequence3]:
        t = self.trusses[n]
        return [s for s in self.sequences if s.f.dom.truss is t]

    @cached_property
    def mutants(self) -> list[Sequence3]:
        """Linear but (mostly) not short exact: one map replaced by a random T-linear map."""
        rng = self.rng("mutants")
        out = []
        for s in self.sequences:
            m, n, p = s.f.dom, s.f.cod, s.g.cod
            if rng.random() < 0.5:
                f = sample_hom(m, n, rng)
                if f is not None and f.map != s.f.map:
                    out.append(Sequence3(s.name + ":f*", f, s.g, "mutant"))
            else:
                g = sample_hom(n, p, rng)
                if g is not None and g.map != s.g.map:
                    out.append(Sequence3(s.name + ":g*", s.f, g, "mutant"))
            if n.size > 1:
                out.append(Sequence3(s.name + ":id", identity(n), identity(n), "mutant"))
        return out

    # -- diagrams ---------------------------------------------------------------

    def _pick_ring(self, rng, allowed=None):
        choices = [n for n in self.cfg.rings if (allowed is None or n in allowed) and self.sequences_over(n)]
        return rng.choice(choices) if choices else None

    @cached_property
    def snakes(self) -> list[Named]:
        rng = self.rng("snakes")
        out = []
        attempts = 0
        while len(out) < self.cfg.count and attempts < 50 * max(self.cfg.count, 1):
            attempts += 1
            n = self._pick_ring(rng)
            if n is None:
                break
            d = self._snake_candidate(rng, n)
            if d is not None:
                out.append(Named(f"snake{len(out)}:Z{n}:{d[0]}", d[1]))
        return out

    def _snake_candidate(self, rng, n):
        pool = self.sequences_over(n)
        top = rng.choice(pool)
        mode = rng.choice(("identity", "scalar", "random", "random", "random"))
        bottom = top if mode in ("identity", "scalar") else rng.choice(pool)
        phi, psi, phi1, psi1 = top.f, top.g, bottom.f, bottom.g
        t = self.trusses[n]
        if mode == "identity":
            f = identity(phi.cod)
        elif mode == "scalar":
            r = rng.randrange(t.size)
            f = ModuleMorphism(phi.cod, phi.cod, tuple(int(v) for v in phi.cod.act[r]))
        else:
            im1 = set(phi1.image)
            allowed = [im1 if x in set(phi.image) else range(phi1.cod.size) for x in range(phi.cod.size)]
            f = sample_hom(phi.cod, phi1.cod, rng, allowed)
            if f is None:
                return None
        pre1 = {v: x for x, v in enumerate(phi1.map)}
        try:
            f1 = tuple(pre1[f(phi(x))] for x in range(phi.dom.size))
        except KeyError:
            return None
        f2 = [None] * psi.cod.size
        for a in range(psi.dom.size):
            f2[psi(a)] = psi1(f(a))
        modules = {"M1": phi.dom, "M": phi.cod, "M2": psi.cod, "N1": phi1.dom, "N": phi1.cod, "N2": psi1.cod}
        maps = {("M1", "M"): phi.map, ("M", "M2"): psi.map, ("N1", "N"): phi1.map, ("N", "N2"): psi1.map,
                ("M1", "N1"): f1, ("M", "N"): f.map, ("M2", "N2"): tuple(f2)}
        label = f"{top.name}|{bottom.name}|{mode}"
        # a non-injective first map or non-surjective last map, now and then
        extra = rng.random()
        k = singleton_module(self.trusses[n]) if n == 1 else module_of_ring_module(cyclic_ring_module(self.rings[n], n), t)
        # every element of a trivial-action factor absorbs, so M1 gets several absorbers
        triv = trivial_action_module(t, t.heap)
        if extra < 0.2 and phi.dom.size * triv.size <= self.cfg.max_size:
            pr = product_module(phi.dom, triv)
            p1, _ = projections(phi.dom, triv, pr)
            modules["M1"] = pr
            maps[("M1", "M")] = compose(phi, p1).map
            maps[("M1", "N1")] = tuple(f1[p1(x)] for x in range(pr.size))
            label += "|wide"
        elif extra < 0.4 and psi1.cod.size * k.size <= self.cfg.max_size:
            pr = product_module(psi1.cod, k)
            i1 = injection_first(psi1.cod, k, absorbers(k)[0], pr)
            modules["N2"] = pr
            maps[("N", "N2")] = compose(i1, psi1).map
            maps[("M2", "N2")] = tuple(i1(v) for v in f2)
            label += "|tall"
        if any(m.size > self.cfg.max_size for m in modules.values()):
            return None
        try:
            d = make_diagram("snake", modules, maps)
            if rng.random() < 0.5 and d.module("M1").size > 1:
                e = rng.randrange(d.module("M1").size)
                d = twist(d, e)
                label += f"|^({e})"
        except PreconditionError:
            return None
        return label, d

    @cached_property
    def grids(self) -> list[Named]:
        """3x3 grids from a module with two submodules, plus degenerate ones."""
        rng = self.rng("grids")
        out = []
        candidates = []
        for entry in self.ring_modules:
            n, b = entry.item
            subs = ring_submodules(b)
            for a in subs:
                for c in subs:
                    candidates.append((entry.name, n, b, a, c))
        rng.shuffle(candidates)
        for name, n, b, a, c in candidates[: self.cfg.count]:
            d = subquotient_grid(b, a, c, self.trusses[n])
            label = f"grid:{name}:{list(a)}:{list(c)}"
            if rng.random() < 0.5 and d.module("A1").size > 1:
                e = rng.randrange(d.module("A1").size)
                d = twist(d, e)
                label += f"^({e})"
            out.append(Named(label, d))
        return out

    @cached_property
    def broken_grids(self) -> list[Named]:
        """Valid grids whose outer columns are not exact."""
        out = []
        for entry in self.modules:
            m = entry.item
            if m.size > 1 and absorbers(m) and len(out) < max(self.cfg.count // 4, 1):
                out.append(Named(f"broken:{entry.name}", degenerate_grid(m)))
        return out

    @cached_property
    def five_rows(self) -> list[Named]:
        rng = self.rng("five")
        out = []
        attempts = 0
        while len(out) < self.cfg.count and attempts < 50 * max(self.cfg.count, 1):
            attempts += 1
            n = self._pick_ring(rng)
            if n is None:
                break
            d = self._five_candidate(rng, n)
            if d is not None:
                out.append(Named(f"five{len(out)}:Z{n}:{d[0]}", d[1]))
        return out

    def _five_row(self, rng, n):
        """``W -const-> X -f1-> Y -a g1-> Z -g2-> V`` from two chained sequences."""
        pool = self.sequences_over(n)
        first = rng.choice(pool)
        follow = [s for s in pool if s.f.dom == first.g.cod]
        if not follow:
            return None
        second = rng.choice(follow)
        x = first.f.dom
        w = rng.choice([s.f.dom for s in pool])
        c = constant(w, x, absorbers(x)[0]) if absorbers(x) else None
        if c is None:
            return None
        mods = (w, x, first.f.cod, second.f.cod, second.g.cod)
        maps = (c, first.f, compose(second.f, first.g), second.g)
        return f"{first.name}+{second.name}", mods, maps

    def _five_candidate(self, rng, n):
        top = self._five_row(rng, n)
        if top is None:
            return None
        mode = rng.choice(("identity", "scalar", "scalar", "random", "random"))
        bottom = top if mode != "random" else self._five_row(rng, n)
        if bottom is None:
            return None
        names = "ABCDE"
        modules = {x: top[1][i] for i, x in enumerate(names)}
        modules.update({x + "1": bottom[1][i] for i, x in enumerate(names)})
        if any(m.size > self.cfg.max_size for m in modules.values()):
            return None
        maps = {(names[i], names[i + 1]): top[2][i] for i in range(4)}
        maps.update({(names[i] + "1", names[i + 1] + "1"): bottom[2][i] for i in range(4)})
        t = self.trusses[n]
        verticals = []
        for i, x in enumerate(names):
            src, dst = top[1][i], bottom[1][i]
            if mode == "identity":
                v = identity(src)
            elif mode == "scalar":
                r = rng.randrange(t.size)
                v = ModuleMorphism(src, src, tuple(int(u) for u in src.act[r]))
            else:
                allowed = [range(dst.size)] * src.size
                if i:
                    prev_top, prev_bot, prev_v = top[2][i - 1], bottom[2][i - 1], verticals[-1]
                    allowed = [set(range(dst.size)) for _ in range(src.size)]
                    for a in range(prev_top.dom.size):
                        allowed[prev_top(a)] &= {prev_bot(prev_v(a))}
                    if any(not s for s in allowed):
                        return None
                v = sample_hom(src, dst, rng, allowed)
                if v is None:
                    return None
            verticals.append(v)
            maps[(x, x + "1")] = v
        try:
            d = make_diagram("row2x5", modules, maps)
            if rng.random() < 0.5 and d.module("A").size > 1:
                e = rng.randrange(d.module("A").size)
                d = twist(d, e)
                mode += f"^({e})"
        except PreconditionError:
            return None
        return f"{top[0]}|{mode}", d

    @cached_property
    def epi_squares(self) -> list[Named]:
        out = []
        for entry in self.snakes:
            d = entry.item
            if not d.map("N", "N2").is_surjective():
                continue
            names = {"M1": "A1", "M": "A", "M2": "A2", "N1": "B1", "N": "B", "N2": "B2"}
            modules = {names[k]: v for k, v in d.modules.items()}
            maps = {(names[a], names[b]): f for (a, b), f in d.maps.items() if (a, b) != ("M2", "N2")}
            try:
                out.append(Named("epi:" + entry.name, make_diagram("epi2x3", modules, maps)))
            except PreconditionError:
                continue
        return out

    @cached_property
    def mono_squares(self) -> list[Named]:
        out = []
        for entry in self.snakes:
            d = entry.item
            if not d.map("M1", "M").is_injective():
                continue
            names = {"M1": "A1", "M": "A", "M2": "A2", "N1": "B1", "N": "B", "N2": "B2"}
            modules = {names[k]: v for k, v in d.modules.items()}
            maps = {(names[a], names[b]): f for (a, b), f in d.maps.items() if (a, b) != ("M1", "N1")}
            try:
                out.append(Named("mono:" + entry.name, make_diagram("mono2x3", modules, maps)))
            except PreconditionError:
                continue
        return out

    @cached_property
    def hom_sources(self) -> list[Named]:
        """Small modules to use as ``Q`` in Hom(Q, -)."""
        return [e for e in self.modules if e.item.size <= 4]

    def instances(self) -> list[Named]:
        """Every diagram and sequence, in a fixed order."""
        seqs = [Named(s.name, s) for s in self.sequences + self.mutants]
        return seqs + self.snakes + self.grids + self.broken_grids + self.five_rows + self.epi_squares + self.mono_squares


def generate_corpus(cfg: CorpusConfig = None) -> Corpus:
    return Corpus(cfg or CorpusConfig())


# -- grid builders ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Piece:
    """A subquotient of ``T(B)``: a module whose elements are cosets in ``B``."""

    module: FiniteModule
    cosets: tuple[frozenset, ...]


def _sub_piece(tb: FiniteModule, elems) -> _Piece:
    sub = Submodule(tb, tuple(elems))
    return _Piece(sub.module, tuple(frozenset((x,)) for x in sub.elems))


def _quotient_piece(p: _Piece, elems) -> _Piece:
    inside = [i for i, c in enumerate(p.cosets) if c & set(elems)]
    q = quotient_module(p.module, inside)
    cosets = tuple(frozenset().union(*(p.cosets[i] for i in cls)) for cls in q.classes)
    return _Piece(q.module, cosets)


def _coset_map(src: _Piece, dst: _Piece) -> tuple[int, ...]:
    table = []
    for c in src.cosets:
        hits = [j for j, d in enumerate(dst.cosets) if c <= d]
        if len(hits) != 1:
            raise TrussLabError("coset does not land in exactly one target coset")
        table.append(hits[0])
    return tuple(table)


def subquotient_grid(b: FiniteRingModule, a, c, truss: FiniteTruss = None) -> Diagram:
    """The grid of ``A cap C``, ``C``, ``A``, ``B`` and their quotients, via ``T``."""
    tb = module_of_ring_module(b, truss)
    a, c = set(a), set(c)
    meet = sorted(a & c)
    join = ring_closure(b, a | c)
    whole = _sub_piece(tb, range(b.size))
    pa, pc = _sub_piece(tb, sorted(a)), _sub_piece(tb, sorted(c))
    pieces = {
        "A1": _sub_piece(tb, meet), "B1": pc, "C1": _quotient_piece(pc, meet),
        "A": pa, "B": whole, "C": _quotient_piece(whole, a),
        "A2": _quotient_piece(pa, meet), "B2": _quotient_piece(whole, c), "C2": _quotient_piece(whole, join),
    }
    shape = get_shape("grid3x3")
    modules = {k: p.module for k, p in pieces.items()}
    maps = {(x, y): _coset_map(pieces[x], pieces[y]) for x, y in shape.arrows}
    return make_diagram(shape, modules, maps)


def degenerate_grid(x: FiniteModule) -> Diagram:
    """Rows ``* * *``, ``* X X``, ``X X *``: valid, with both outer columns inexact."""
    point = singleton_module(x.truss)
    e = absorbers(x)[0]
    idx = tuple(range(x.size))
    modules = {"A1": point, "B1": point, "C1": point, "A": point, "B": x, "C": x, "A2": x, "B2": x, "C2": point}
    maps = {
        ("A1", "B1"): (0,), ("B1", "C1"): (0,),
        ("A", "B"): (e,), ("B", "C"): idx,
        ("A2", "B2"): idx, ("B2", "C2"): (0,) * x.size,
        ("A1", "A"): (0,), ("A", "A2"): (e,),
        ("B1", "B"): (e,), ("B", "B2"): idx,
        ("C1", "C"): (e,), ("C", "C2"): (0,) * x.size,
    }
    return make_diagram("grid3x3", modules, maps)
