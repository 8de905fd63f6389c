"""Command line entry point.

Exit codes: 0 when everything checked out, 1 when some property failed on
a concrete instance, 2 for unreadable input or input outside a command's
preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .corpus import CorpusConfig, generate_corpus
from .diagrams import Diagram
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    LoadError,
    PreconditionError,
    PropertyFalsified,
    StructureError,
)
from .exact import is_short_exact
from .factor import splitting
from .heap import FiniteGroup, FiniteHeap, HeapMorphism, is_abelian, validate_group, validate_heap, validate_heap_morphism
from .hom import enumerate_hom
from .lemmas import five_lemma, nine_lemma, short_five
from .module import FiniteModule, ModuleMorphism, validate_module, validate_module_morphism
from .snake import snake, snake_all_absorbers
from .suites import SUITES, run_suite
from .truss import FiniteRing, FiniteTruss, TrussMorphism, validate_ring, validate_truss, validate_truss_morphism

OK, FALSIFIED, INPUT_ERROR = 0, 1, 2


class Falsified(Exception):
    """Raised by a command to end with exit code 1 after printing its report."""


def _emit(args, report: dict, summary: str):
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(summary)


def _load_diagram(path, shapes) -> Diagram:
    spec = io.load(path)
    if not isinstance(spec, io.DiagramSpec):
        raise StructureError(f"{path}: expected a diagram document")
    if spec.shape not in shapes:
        raise StructureError(f"{path}: expected shape {' or '.join(shapes)}, got {spec.shape}")
    return spec.build()


# -- check ---------------------------------------------------------------------


def _truss_report(t: FiniteTruss):
    try:
        return validate_truss(t)
    except PreconditionError:
        heap = validate_heap(t.heap)
        return heap if not heap else is_abelian(t.heap)


def _validate(obj) -> list[tuple[str, object]]:
    if isinstance(obj, FiniteHeap):
        return [("heap", validate_heap(obj))]
    if isinstance(obj, FiniteGroup):
        return [("group", validate_group(obj))]
    if isinstance(obj, FiniteRing):
        return [("ring", validate_ring(obj))]
    if isinstance(obj, FiniteTruss):
        return [("truss", _truss_report(obj))]
    if isinstance(obj, FiniteModule):
        return [("truss", _truss_report(obj.truss)), ("module", validate_module(obj))]
    if isinstance(obj, HeapMorphism):
        return [("dom", validate_heap(obj.dom)), ("cod", validate_heap(obj.cod)), ("morphism", validate_heap_morphism(obj))]
    if isinstance(obj, TrussMorphism):
        return [("dom", _truss_report(obj.dom)), ("cod", _truss_report(obj.cod)), ("morphism", validate_truss_morphism(obj))]
    if isinstance(obj, ModuleMorphism):
        return [("dom", validate_module(obj.dom)), ("cod", validate_module(obj.cod)), ("morphism", validate_module_morphism(obj))]
    raise TypeError(type(obj).__name__)


def cmd_check(args):
    obj = io.load(args.file)
    if isinstance(obj, io.DiagramSpec):
        parts = [(f"module {k}", validate_module(m)) for k, m in obj.modules.items()]
        report = {"kind": "diagram", "shape": obj.shape, "checks": [{"name": n, **r.to_dict()} for n, r in parts]}
        if all(r for _, r in parts):
            try:
                d = obj.build()
                report["witnesses"] = {"-".join(k): v for k, v in d.witnesses.items()}
                report["valid"] = True
            except PreconditionError as exc:
                report["valid"] = False
                report["failure"] = {"name": exc.name, "message": str(exc)}
        else:
            report["valid"] = False
        bad = report.get("failure", {}).get("message") or next((f"{n}: {r.describe()}" for n, r in parts if not r), "")
    else:
        parts = _validate(obj)
        kind = type(obj).__name__
        report = {"kind": kind, "valid": all(r for _, r in parts), "checks": [{"name": n, **r.to_dict()} for n, r in parts]}
        bad = next((f"{n}: {r.describe()}" for n, r in parts if not r), "")
    _emit(args, report, f"{args.file}: " + ("valid" if report["valid"] else f"INVALID ({bad})"))
    if not report["valid"]:
        raise Falsified


# -- theorem commands -------------------------------------------------------------


def cmd_snake(args):
    d = _load_diagram(args.file, ("snake",))
    if args.all_absorbers:
        out = snake_all_absorbers(d)
        report = {"absorbers": out["absorbers"], "stable": out["stable"], "results": [r.to_dict() for r in out["results"]]}
        sig = out["results"][0].signature()
        summary = f"snake: exact at all four positions for every absorber {out['absorbers']}; {sig}"
    else:
        r = snake(d, args.e_prime)
        report = r.to_dict()
        summary = f"snake: exact at all four positions (e'={r.e_prime}); {r.signature()}"
    _emit(args, report, summary)


def _lemma(args, report):
    _emit(args, report.to_dict(), f"{report.name}: " + ("holds" if report.holds else f"VIOLATED {report.violations}"))
    if not report.holds:
        raise Falsified


def cmd_nine(args):
    _lemma(args, nine_lemma(_load_diagram(args.file, ("grid3x3",))))


def cmd_five(args):
    d = _load_diagram(args.file, ("row2x5", "snake"))
    _lemma(args, five_lemma(d) if d.shape.name == "row2x5" else short_five(d))


def cmd_split(args):
    d = _load_diagram(args.file, ("ses",))
    f, g = d.map("M1", "M"), d.map("M", "M2")
    if not is_short_exact(f, g).exact:
        raise PreconditionError("row M1-M-M2", "not short exact")
    rep = splitting(f, g, args.e2, args.hom_budget)
    state = "split" if rep.split else "not split"
    _emit(args, rep.to_dict(), f"split: {state} (section={rep.has_section}, retraction={rep.has_retraction}, product iso={rep.has_product_iso})")
    if not rep.agree:
        raise Falsified


def cmd_hom(args):
    m, n = io.load(args.m), io.load(args.n)
    for path, x in ((args.m, m), (args.n, n)):
        if not isinstance(x, FiniteModule):
            raise StructureError(f"{path}: expected a module document")
    homs = enumerate_hom(m, n, args.hom_budget)
    tables = [list(f.map) for f in homs]
    _emit(args, tables, f"|Hom(M, N)| = {len(tables)}" + "".join(f"\n  {t}" for t in tables))


def _config(args) -> CorpusConfig:
    rings = tuple(args.n) if args.n else CorpusConfig().rings
    return CorpusConfig(rings=rings, max_size=args.max_size, seed=args.seed, count=args.count)


def cmd_corpus(args):
    if args.truss != "Zn":
        raise StructureError(f"unknown truss family {args.truss!r} (only Zn)")
    c = generate_corpus(_config(args))
    families = {
        "sequences": [s.name for s in c.sequences],
        "mutants": [s.name for s in c.mutants],
        "snakes": [e.name for e in c.snakes],
        "grids": [e.name for e in c.grids + c.broken_grids],
        "five_rows": [e.name for e in c.five_rows],
    }
    report = {"config": c.cfg.to_dict(), "counts": {k: len(v) for k, v in families.items()}, "instances": families}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        diagrams = [e for e in c.snakes + c.grids + c.broken_grids + c.five_rows]
        for i, e in enumerate(diagrams):
            (out / f"{e.item.shape.name}_{i:03d}.json").write_text(io.dumps(e.item))
        for i, s in enumerate(c.sequences):
            d = Diagram(io.get_shape("ses"), {"M1": s.f.dom, "M": s.f.cod, "M2": s.g.cod},
                        {("M1", "M"): s.f, ("M", "M2"): s.g})
            (out / f"ses_{i:03d}.json").write_text(io.dumps(d))
        report["written"] = len(diagrams) + len(c.sequences)
    summary = ", ".join(f"{k}: {v}" for k, v in report["counts"].items())
    _emit(args, report, f"corpus seed={args.seed}: {summary}")


def cmd_suite(args):
    report = run_suite(args.name, _config(args), hom_budget=args.hom_budget, inject_broken=args.inject_broken)
    if args.json:
        print(report.to_json(timing=args.timing))
    else:
        for c in report.checks:
            line = f"{c.verdict.upper():9} {c.name}: {c.passed}/{c.total}"
            if c.skipped:
                line += f" ({c.skipped} over budget)"
            print(line)
            for f in c.failures[:3]:
                print(f"          {f['instance']}: {f['message']}")
        print(f"suite {report.suite}: {report.verdict}")
    if not report.ok:
        raise Falsified


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full report as JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-size", type=int, default=8, help="largest carrier in generated corpora")
    common.add_argument("--hom-budget", type=int, default=None, help="cap on |N|^|M| for Hom enumeration")

    p = argparse.ArgumentParser(prog="trusslab", description="Finite trusses, modules and exact sequences.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="validate the laws of a structure file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("snake", parents=[common], help="six-term sequence of a snake diagram")
    s.add_argument("file")
    s.add_argument("--all-absorbers", action="store_true", help="run for every absorber of M1")
    s.add_argument("--e-prime", type=int, default=None)
    s.set_defaults(func=cmd_snake)

    for name, func, text in (("nine", cmd_nine, "nine lemma on a 3x3 grid"),
                             ("five", cmd_five, "five lemma (or short five on a snake diagram)")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("split", parents=[common], help="section, retraction and product iso of a sequence")
    s.add_argument("file")
    s.add_argument("--e2", type=int, default=None)
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("hom", parents=[common], help="all T-linear maps M -> N")
    s.add_argument("m")
    s.add_argument("n")
    s.set_defaults(func=cmd_hom)

    for name, func, text in (("corpus", cmd_corpus, "generate the corpus"), ("suite", cmd_suite, "run a suite")):
        s = sub.add_parser(name, parents=[common], help=text)
        if name == "suite":
            s.add_argument("name", choices=SUITES + ("all",))
            s.add_argument("--inject-broken", action="store_true", help="add a corrupted diagram")
            s.add_argument("--timing", action="store_true", help="include wall-clock times in the JSON report")
        else:
            s.add_argument("--truss", default="Zn")
            s.add_argument("--out", default=None, help="write every instance as a JSON file here")
        s.add_argument("--n", type=int, nargs="+", default=None, help="ring sizes n of Z/n")
        s.add_argument("--count", type=int, default=10)
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except Falsified:
        return FALSIFIED
    except (PropertyFalsified, ConsistencyError) as exc:
        print(json.dumps({"verdict": "falsified", "error": type(exc).__name__, "message": str(exc),
                          "witness": getattr(exc, "witness", None)}, default=str))
        return FALSIFIED
    except (LoadError, StructureError, PreconditionError, BudgetExceeded, ValueError) as exc:
        print(f"trusslab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    return OK


if __name__ == "__main__":
    sys.exit(main())
