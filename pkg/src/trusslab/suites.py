"""Suites that run the engines over a generated corpus and tally verdicts.

Reports are plain data with a fixed field order, so two runs with the same
configuration serialise to the same bytes.  Wall-clock times are left out
unless asked for.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import naive
from .corpus import Corpus, CorpusConfig
from .diagrams import Diagram, check_semantics, check_structure, make_diagram
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    HypothesisError,
    PreconditionError,
    StructureError,
    TrussLabError,
)
from .exact import abs_exact, hom_left_exact, is_exact_at, is_short_exact, witness_holds
from .factor import factor_through_epi, factor_through_mono, splitting
from .heap import FiniteHeap, group_of_heap, heap_of_group, is_abelian, validate_heap
from .hom import abs_morphism, abs_object, enumerate_hom, enumerate_hom_naive
from .lemmas import five_lemma, induced_epi_map, induced_mono_map, nine_lemma, short_five
from .module import (
    FiniteModule,
    ModuleMorphism,
    absorbers,
    compose,
    first_isomorphism,
    identity,
    image,
    induced_module,
    module_of_ring_module,
    quotient_module,
    same_truss,
    self_module,
    validate_module,
)
from .ringmod import compose_ring, cyclic_ring_module, find_ring_module_iso, ring_identity
from .snake import snake_all_absorbers
from .truss import FiniteTruss, truss_of_ring, validate_truss, zn_ring

SUITES = ("axioms", "section2", "exact", "snake", "nine", "five", "split", "hom", "abs")
MUTANTS_PER_KIND = 100
MUTATION_THRESHOLD = 0.99


def _plain(x):
    """Make witnesses JSON friendly."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return x


@dataclass
class Check:
    name: str
    total: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)
    seconds: float = 0.0

    @property
    def verdict(self) -> str:
        return "falsified" if self.failures else "verified"

    def fail(self, instance, message, witness=None):
        self.failures.append({"instance": instance, "message": message, "witness": _plain(witness)})

    def run(self, instance, fn):
        """Call ``fn``; ``None`` means pass, a string is a failure message."""
        self.total += 1
        try:
            outcome = fn()
        except BudgetExceeded:
            self.skipped += 1
            return
        except TrussLabError as exc:
            self.fail(instance, f"{type(exc).__name__}: {exc}", getattr(exc, "witness", None))
            return
        if outcome is None:
            self.passed += 1
        else:
            self.fail(instance, outcome)

    def to_dict(self, timing=False) -> dict:
        out = {
            "check": self.name,
            "verdict": self.verdict,
            "instances": self.total,
            "passed": self.passed,
            "skipped": self.skipped,
            "stats": {k: self.stats[k] for k in sorted(self.stats)},
            "failures": self.failures,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class Report:
    suite: str
    config: dict
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.verdict == "verified" for c in self.checks)

    @property
    def verdict(self) -> str:
        return "verified" if self.ok else "falsified"

    def check(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, timing=False) -> dict:
        return {
            "suite": self.suite,
            "verdict": self.verdict,
            "config": self.config,
            "checks": [c.to_dict(timing) for c in self.checks],
        }

    def to_json(self, timing=False, indent=2) -> str:
        return json.dumps(self.to_dict(timing), indent=indent)


class _Runner:
    def __init__(self, corpus: Corpus, hom_budget=None, inject_broken=False):
        self.corpus = corpus
        self.budget = hom_budget
        self.inject_broken = inject_broken
        self.checks = []

    def check(self, name) -> Check:
        c = Check(name)
        self.checks.append(c)
        return c

    def timed(self, name, body):
        c = self.check(name)
        start = time.perf_counter()
        body(c)
        c.seconds = time.perf_counter() - start

    def ring_of(self, m: FiniteModule) -> int:
        for n, t in self.corpus.trusses.items():
            if m.truss is t or m.truss == t:
                return n
        raise StructureError("module is not over a corpus truss")

    def diagrams(self, entries, family):
        """Corpus diagrams, plus a corrupted one when asked to inject it."""
        out = [(e.name, e.item) for e in entries]
        if self.inject_broken and out:
            name, d = out[0]
            out.append((f"corrupted:{name}", corrupt(d, self.corpus.rng(f"corrupt/{family}"))))
        return out


def revalidate(d: Diagram):
    """Preconditions again, just before an engine sees the diagram."""
    check_structure(d.shape, d.modules, d.maps)
    check_semantics(d.shape, d.modules, d.maps)


def corrupt(d: Diagram, rng) -> Diagram:
    """A copy with one map entry changed so that some precondition fails."""
    arrows = [a for a in d.shape.arrows if d.maps[a].cod.size > 1]
    for _ in range(1000):
        key = rng.choice(arrows)
        f = d.maps[key]
        x = rng.randrange(f.dom.size)
        v = rng.choice([y for y in range(f.cod.size) if y != f(x)])
        table = list(f.map)
        table[x] = v
        maps = dict(d.maps)
        maps[key] = ModuleMorphism(f.dom, f.cod, tuple(table))
        try:
            check_semantics(d.shape, d.modules, maps)
        except PreconditionError:
            return Diagram(d.shape, d.modules, maps, d.witnesses)
    raise ConsistencyError("could not corrupt the diagram")


# -- axioms ----------------------------------------------------------------------


def _mutate(table, rng, bound):
    arr = np.array(table)
    idx = tuple(rng.randrange(s) for s in arr.shape)
    arr[idx] = rng.choice([v for v in range(bound) if v != arr[idx]])
    return arr, idx


def _heap_ok(op) -> bool:
    h = FiniteHeap(op)
    return bool(validate_heap(h)) and bool(is_abelian(h))


def _caught_truss(t: FiniteTruss) -> bool:
    try:
        return not validate_truss(t)
    except PreconditionError:
        return True


def _mutation_check(c: Check, pool, rng, mutate_one):
    """Corrupt one table entry at a time and count the mutants some law rejects.

    A surviving mutant may simply be another valid structure.  Those are
    confirmed with the loop checkers in :mod:`naive` and left out of the
    rate; survivors too large to confirm count as missed.
    """
    pool = [e for e in pool if e.item.size > 1]
    c.stats["mutants"] = 0
    if not pool:
        return
    caught = equivalent = 0
    missed = []
    for _ in range(MUTANTS_PER_KIND):
        entry = rng.choice(pool)
        hit, where, still_valid = mutate_one(entry.item, rng)
        c.total += 1
        c.passed += 1
        if hit:
            caught += 1
        elif entry.item.size <= naive.MAX_NAIVE and still_valid():
            equivalent += 1
            c.stats["equivalent"] += 1
        else:
            c.passed -= 1
            missed.append(f"{entry.name}@{where}")
    c.stats["mutants"] = MUTANTS_PER_KIND
    c.stats["caught"] = caught
    rate = caught / (MUTANTS_PER_KIND - equivalent) if equivalent < MUTANTS_PER_KIND else 1.0
    c.stats["rate"] = round(rate, 4)
    if rate < MUTATION_THRESHOLD:
        c.fail("mutants", f"{caught} of {MUTANTS_PER_KIND - equivalent} non-equivalent mutants caught", missed[:5])


def _mutate_heap(h, rng):
    op, idx = _mutate(h.op, rng, h.size)
    return not _heap_ok(op), f"op{list(idx)}", lambda: naive.heap_laws(op.tolist()) and naive.abelian(op.tolist())


def _mutate_truss(t, rng):
    if rng.random() < 0.5:
        op, idx = _mutate(t.heap.op, rng, t.size)
        u = FiniteTruss(FiniteHeap(op), t.mul, t.one)
        where = f"heap{list(idx)}"
    else:
        mul, idx = _mutate(t.mul, rng, t.size)
        u = FiniteTruss(t.heap, mul, t.one)
        where = f"mul{list(idx)}"
    return _caught_truss(u), where, lambda: naive.truss_laws(u.heap.op.tolist(), u.mul.tolist(), u.one)


def _mutate_module(m, rng):
    if rng.random() < 0.5:
        op, idx = _mutate(m.heap.op, rng, m.size)
        u = FiniteModule(m.truss, FiniteHeap(op), m.act, m.unital)
        where = f"op{list(idx)}"
    else:
        act, idx = _mutate(m.act, rng, m.size)
        u = FiniteModule(m.truss, m.heap, act, m.unital)
        where = f"act{list(idx)}"
    t = m.truss
    return not validate_module(u), where, lambda: naive.module_laws(
        t.heap.op.tolist(), t.mul.tolist(), u.heap.op.tolist(), u.act.tolist(), t.one if u.unital else None
    )


def suite_axioms(r: _Runner):
    cp = r.corpus

    def heaps(c):
        for e in cp.heaps:
            def one(h=e.item):
                rep = validate_heap(h)
                if not rep:
                    return rep.describe()
                ab = is_abelian(h)
                return None if ab else ab.describe()
            c.run(e.name, one)

    def trusses(c):
        for e in cp.structure_trusses:
            c.run(e.name, lambda t=e.item: None if (rep := validate_truss(t)) else rep.describe())

    def modules(c):
        entries = list(cp.modules)
        for e in cp.structure_trusses:
            entries.append(type(e)(f"self({e.name})", self_module(e.item)))
        for e in entries:
            c.run(e.name, lambda m=e.item: None if (rep := validate_module(m)) else rep.describe())

    r.timed("heap_axioms", heaps)
    r.timed("truss_axioms", trusses)
    r.timed("module_axioms", modules)
    mod_pool = list(cp.modules) + [type(e)(f"self({e.name})", self_module(e.item)) for e in cp.structure_trusses]
    r.timed("mutants:heap", lambda c: _mutation_check(c, cp.heaps, cp.rng("mutate/heap"), _mutate_heap))
    r.timed("mutants:truss", lambda c: _mutation_check(c, cp.structure_trusses, cp.rng("mutate/truss"), _mutate_truss))
    r.timed("mutants:module", lambda c: _mutation_check(c, mod_pool, cp.rng("mutate/module"), _mutate_module))


# -- heaps, groups, modules ---------------------------------------------------------


def suite_section2(r: _Runner):
    cp = r.corpus

    def roundtrip(c):
        heaps = list(cp.heaps) + [type(e)(e.name + ".heap", e.item.heap) for e in cp.modules]
        for e in heaps:
            h = e.item
            for base in range(h.size):
                def one(h=h, base=base):
                    g = group_of_heap(h, base)
                    if not np.array_equal(heap_of_group(g).op, h.op):
                        return f"heap_of_group(group_of_heap(H, {base})) differs from H"
                    back = group_of_heap(heap_of_group(g), g.identity)
                    if back != g:
                        return f"group_of_heap(heap_of_group(G), id) differs from G at base {base}"
                    return None
                c.run(f"{e.name}@{base}", one)

    def first_iso(c):
        small = [e for e in cp.modules if e.item.size <= 4]
        for a in small:
            for b in small:
                if not same_truss(a.item, b.item):
                    continue
                def one(m=a.item, n=b.item):
                    homs = enumerate_hom(m, n, r.budget)
                    for f in homs:
                        first_isomorphism(f)
                    c.stats["maps"] += len(homs)
                c.run(f"{a.name}->{b.name}", one)

    def induced(c):
        for e in cp.modules:
            m = e.item
            for base in range(m.size):
                def one(m=m, base=base):
                    k = induced_module(m, base)
                    rep = validate_module(k)
                    if not rep:
                        return f"induced action at {base} fails: {rep.describe()}"
                    if base not in absorbers(k):
                        return f"{base} does not absorb the action it induces"
                    if base in absorbers(m) and k != m:
                        return f"inducing at the absorber {base} changed the action"
                    return None
                c.run(f"{e.name}^({base})", one)

    r.timed("heap_group_roundtrip", roundtrip)
    r.timed("first_isomorphism", first_iso)
    r.timed("induced_actions", induced)


# -- exactness ---------------------------------------------------------------------


def suite_exact(r: _Runner):
    cp = r.corpus

    def routes(c):
        for s in cp.sequences + cp.mutants:
            def one(s=s):
                rep = is_short_exact(s.f, s.g)  # raises if the routes disagree
                c.stats["exact" if rep.exact else "not_exact"] += 1
                if rep.witness is not None and not witness_holds(s.f, s.g, rep.witness.element):
                    return f"witness {rep.witness.element} does not hold element-wise"
                if s.kind != "mutant" and not rep.exact:
                    return "generated sequence is not short exact"
                return None
            c.run(s.name, one)

    def factorization(c):
        for s in cp.sequences:
            def one(s=s):
                f, g = s.f, s.g
                q = quotient_module(g.dom, image(f))
                e = is_exact_at(f, g).element
                s_ = q.projection(f(0))
                epi = factor_through_epi(g, q.projection, s_, e, r.budget)
                im = image(f)
                mono = factor_through_mono(f, im.inclusion, r.budget)
                for name, res in (("epi", epi), ("mono", mono)):
                    bad = [k for k, v in res.checks.items() if not v]
                    if bad:
                        return f"{name} factorization: {', '.join(bad)}"
                    c.stats[res.uniqueness] += 1
                if not epi.h.is_bijective():
                    return "N/Im f -> P is not bijective on a short exact sequence"
                return None
            c.run(s.name, one)

    r.timed("short_exact_routes", routes)
    r.timed("factorization", factorization)


# -- diagrams ------------------------------------------------------------------------


def suite_snake(r: _Runner):
    def body(c):
        for name, d in r.diagrams(r.corpus.snakes, "snake"):
            def one(d=d):
                revalidate(d)
                out = snake_all_absorbers(d)
                c.stats["absorbers"] += len(out["absorbers"])
                c.stats["preimages"] += sum(x.preimages_checked for x in out["results"])
                return None
            c.run(name, one)
    r.timed("snake", body)


def suite_nine(r: _Runner):
    cp = r.corpus

    def valid(c):
        entries = cp.grids + cp.broken_grids
        for name, d in r.diagrams(entries, "nine"):
            def one(d=d):
                revalidate(d)
                rep = nine_lemma(d)
                c.stats["first_exact" if rep.facts["first_exact"] else "first_not_exact"] += 1
                return None if rep.holds else f"violated: {rep.violations}"
            c.run(name, one)

    def mutated(c):
        rng = cp.rng("nine/mutants")
        for e in cp.grids:
            d = e.item
            key = rng.choice([a for a in d.shape.arrows if d.maps[a].cod.size > 1] or [d.shape.arrows[0]])
            f = d.maps[key]
            table = list(f.map)
            if f.cod.size > 1:
                x = rng.randrange(f.dom.size)
                table[x] = rng.choice([y for y in range(f.cod.size) if y != table[x]])

            def one(d=d, key=key, table=table):
                maps = dict(d.maps)
                maps[key] = table
                try:
                    g = make_diagram(d.shape, d.modules, maps)
                except PreconditionError as exc:
                    c.stats["precondition:" + exc.name.split(" ")[0]] += 1
                    return None
                c.stats["still_valid"] += 1
                rep = nine_lemma(g)
                return None if rep.holds else f"violated on a valid mutant: {rep.violations}"
            c.run(f"{e.name}:{key[0]}->{key[1]}", one)

    r.timed("nine_valid", valid)
    r.timed("nine_mutants", mutated)


def suite_five(r: _Runner):
    cp = r.corpus

    def lemma(check, entries, family, fn):
        for name, d in r.diagrams(entries, family):
            def one(d=d):
                revalidate(d)
                rep = fn(d)
                for clause, hyp, _ in rep.clauses:
                    if hyp:
                        check.stats["hypotheses:" + clause] += 1
                return None if rep.holds else f"violated: {rep.violations}"
            check.run(name, one)

    def induced(check, entries, fn):
        for e in entries:
            def one(d=e.item):
                res = fn(d, r.budget)
                check.stats[res.uniqueness] += 1
                return None if res.report.holds else f"violated: {res.report.violations}"
            check.run(e.name, one)

    r.timed("short_five", lambda c: lemma(c, cp.snakes, "short_five", short_five))
    r.timed("five", lambda c: lemma(c, cp.five_rows, "five", five_lemma))
    r.timed("induced_epi", lambda c: induced(c, cp.epi_squares, induced_epi_map))
    r.timed("induced_mono", lambda c: induced(c, cp.mono_squares, induced_mono_map))


# -- splitting, hom, abs ----------------------------------------------------------------


def canonical_nonsplit():
    """``Z/2 -> Z/4 -> Z/2`` over ``T(Z/4)``."""
    ring = zn_ring(4)
    t = truss_of_ring(ring)
    z2 = module_of_ring_module(cyclic_ring_module(ring, 2), t)
    z4 = module_of_ring_module(cyclic_ring_module(ring, 4), t)
    return ModuleMorphism(z2, z4, (0, 2)), ModuleMorphism(z4, z2, (0, 1, 0, 1))


def suite_split(r: _Runner):
    cp = r.corpus

    def body(c):
        for s in cp.sequences:
            def one(s=s):
                rep = splitting(s.f, s.g, budget=r.budget)
                if not rep.agree:
                    return f"section/retraction/product disagree: {rep.to_dict()}"
                c.stats["split" if rep.split else "not_split"] += 1
                return None
            c.run(s.name, one)

    def witness(c):
        def one():
            rep = splitting(*canonical_nonsplit(), budget=r.budget)
            if rep.has_section or rep.has_retraction or rep.has_product_iso:
                return f"expected no section, retraction or product iso: {rep.to_dict()}"
            return None
        c.run("Z2-Z4-Z2", one)

    r.timed("splitting", body)
    r.timed("nonsplit_witness", witness)


def suite_hom(r: _Runner):
    cp = r.corpus

    def left_exact(c):
        for q in cp.hom_sources:
            for s in cp.sequences:
                if not same_truss(q.item, s.f.dom):
                    continue
                def one(q=q.item, s=s):
                    res = hom_left_exact(q, s.f, s.g, budget=r.budget)
                    if not res.h_injective:
                        return "h is not injective"
                    if not res.image_is_kernel:
                        return f"Im h != ker_{res.gamma} l"
                    return None
                c.run(f"Hom({q.name}, {s.name})", one)

    def enumeration(c):
        small = cp.hom_sources
        for a in small:
            for b in small:
                if not same_truss(a.item, b.item):
                    continue
                def one(m=a.item, n=b.item):
                    fast = [f.map for f in enumerate_hom(m, n, r.budget)]
                    slow = [f.map for f in enumerate_hom_naive(m, n, r.budget)]
                    c.stats["maps"] += len(fast)
                    return None if fast == slow else "pruned and naive enumeration differ"
                c.run(f"{a.name}->{b.name}", one)

    r.timed("hom_left_exact", left_exact)
    r.timed("hom_enumeration", enumeration)


def suite_abs(r: _Runner):
    cp = r.corpus

    def roundtrip(c):
        for e in cp.ring_modules:
            n, rm = e.item
            def one(n=n, rm=rm):
                tm = module_of_ring_module(rm, cp.trusses[n])
                a = abs_object(tm, cp.rings[n])
                return None if find_ring_module_iso(a.ring_module, rm) is not None else "T(N)_Abs is not isomorphic to N"
            c.run(e.name, one)

    def exactness(c):
        for s in cp.sequences:
            def one(s=s):
                ring = cp.rings[r.ring_of(s.f.dom)]
                res = abs_exact(s.f, s.g, ring)
                return None if res.exact else "Abs image is not short exact"
            c.run(s.name, one)

    def functoriality(c):
        for s in cp.sequences:
            def one(s=s):
                ring = cp.rings[r.ring_of(s.f.dom)]
                am, an, ap = (abs_object(x, ring) for x in (s.f.dom, s.f.cod, s.g.cod))
                for x, img in ((s.f.dom, am), (s.f.cod, an), (s.g.cod, ap)):
                    if abs_morphism(identity(x), dom=img, cod=img).map != ring_identity(img.ring_module).map:
                        return "(id)_Abs is not the identity"
                fa = abs_morphism(s.f, dom=am, cod=an)
                ga = abs_morphism(s.g, dom=an, cod=ap)
                gf = abs_morphism(compose(s.g, s.f), dom=am, cod=ap)
                return None if gf.map == compose_ring(ga, fa).map else "(g f)_Abs != g_Abs f_Abs"
            c.run(s.name, one)

    def hypotheses(c):
        for s in cp.sequences:
            if s.g.cod.size < 2:
                continue
            def one(s=s):
                ring = cp.rings[r.ring_of(s.f.dom)]
                good = is_exact_at(s.f, s.g).element
                wrong = next(x for x in range(s.g.cod.size) if x != good)
                try:
                    abs_exact(s.f, s.g, ring, e=wrong)
                except HypothesisError:
                    return None
                return f"accepted {wrong} although the witness is {good}"
            c.run(s.name, one)

    r.timed("t_abs_roundtrip", roundtrip)
    r.timed("abs_exact", exactness)
    r.timed("abs_functoriality", functoriality)
    r.timed("abs_hypotheses", hypotheses)


_SUITES = {
    "axioms": suite_axioms,
    "section2": suite_section2,
    "exact": suite_exact,
    "snake": suite_snake,
    "nine": suite_nine,
    "five": suite_five,
    "split": suite_split,
    "hom": suite_hom,
    "abs": suite_abs,
}


def run_suite(name: str, cfg: CorpusConfig = None, *, hom_budget=None, inject_broken=False) -> Report:
    if name != "all" and name not in _SUITES:
        raise ValueError(f"unknown suite {name!r} (known: {', '.join(SUITES)}, all)")
    cfg = cfg or CorpusConfig()
    runner = _Runner(Corpus(cfg), hom_budget, inject_broken)
    for suite in SUITES if name == "all" else (name,):
        before = len(runner.checks)
        _SUITES[suite](runner)
        if name == "all":
            for c in runner.checks[before:]:
                c.name = f"{suite}/{c.name}"
    config = {**cfg.to_dict(), "hom_budget": hom_budget, "inject_broken": inject_broken}
    return Report(name, config, runner.checks)
