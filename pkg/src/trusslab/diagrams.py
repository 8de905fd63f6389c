"""Fixed-shape commutative diagrams of T-modules.

Every shape has named nodes and arrows.  A diagram is checked eagerly when
built: maps must be T-linear, squares must commute and the rows or columns
the shape declares exact must be exact.  Theorem engines downstream assume
all of this and do not re-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConsistencyError, PreconditionError, StructureError
from .exact import is_exact_at, is_short_exact
from .module import FiniteModule, ModuleMorphism, absorbers, induced_module, same_truss, validate_module_morphism


@dataclass(frozen=True)
class Shape:
    name: str
    nodes: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]
    # each square is two paths with the same ends
    squares: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = ()
    # ("exact", a, b, c) | ("short", a, b, c) | ("mono", a, b) | ("epi", a, b)
    declared: tuple[tuple[str, ...], ...] = ()


def _path(*nodes):
    return tuple(nodes)


SHAPES = {
    "ses": Shape("ses", ("M1", "M", "M2"), (("M1", "M"), ("M", "M2"))),
    "snake": Shape(
        "snake",
        ("M1", "M", "M2", "N1", "N", "N2"),
        (("M1", "M"), ("M", "M2"), ("N1", "N"), ("N", "N2"), ("M1", "N1"), ("M", "N"), ("M2", "N2")),
        (
            (_path("M1", "M", "N"), _path("M1", "N1", "N")),
            (_path("M", "M2", "N2"), _path("M", "N", "N2")),
        ),
        (("exact", "M1", "M", "M2"), ("epi", "M", "M2"), ("mono", "N1", "N"), ("exact", "N1", "N", "N2")),
    ),
    "epi2x3": Shape(
        "epi2x3",
        ("A1", "A", "A2", "B1", "B", "B2"),
        (("A1", "A"), ("A", "A2"), ("B1", "B"), ("B", "B2"), ("A1", "B1"), ("A", "B")),
        ((_path("A1", "A", "B"), _path("A1", "B1", "B")),),
        (("exact", "A1", "A", "A2"), ("epi", "A", "A2"), ("exact", "B1", "B", "B2"), ("epi", "B", "B2")),
    ),
    "mono2x3": Shape(
        "mono2x3",
        ("A1", "A", "A2", "B1", "B", "B2"),
        (("A1", "A"), ("A", "A2"), ("B1", "B"), ("B", "B2"), ("A", "B"), ("A2", "B2")),
        ((_path("A", "A2", "B2"), _path("A", "B", "B2")),),
        (("mono", "A1", "A"), ("exact", "A1", "A", "A2"), ("mono", "B1", "B"), ("exact", "B1", "B", "B2")),
    ),
    "grid3x3": Shape(
        "grid3x3",
        ("A1", "B1", "C1", "A", "B", "C", "A2", "B2", "C2"),
        (
            ("A1", "B1"), ("B1", "C1"), ("A", "B"), ("B", "C"), ("A2", "B2"), ("B2", "C2"),
            ("A1", "A"), ("A", "A2"), ("B1", "B"), ("B", "B2"), ("C1", "C"), ("C", "C2"),
        ),
        (
            (_path("A1", "B1", "B"), _path("A1", "A", "B")),
            (_path("B1", "C1", "C"), _path("B1", "B", "C")),
            (_path("A", "B", "B2"), _path("A", "A2", "B2")),
            (_path("B", "C", "C2"), _path("B", "B2", "C2")),
        ),
        (
            ("short", "A1", "B1", "C1"),
            ("short", "A", "B", "C"),
            ("short", "A2", "B2", "C2"),
            ("short", "B1", "B", "B2"),
        ),
    ),
    "row2x5": Shape(
        "row2x5",
        ("A", "B", "C", "D", "E", "A1", "B1", "C1", "D1", "E1"),
        (
            ("A", "B"), ("B", "C"), ("C", "D"), ("D", "E"),
            ("A1", "B1"), ("B1", "C1"), ("C1", "D1"), ("D1", "E1"),
            ("A", "A1"), ("B", "B1"), ("C", "C1"), ("D", "D1"), ("E", "E1"),
        ),
        tuple(
            (_path(x, y, y + "1"), _path(x, x + "1", y + "1"))
            for x, y in (("A", "B"), ("B", "C"), ("C", "D"), ("D", "E"))
        ),
        tuple(("exact", *row[i:i + 3]) for row in (("A", "B", "C", "D", "E"), ("A1", "B1", "C1", "D1", "E1")) for i in range(3)),
    ),
}


def get_shape(name: str) -> Shape:
    try:
        return SHAPES[name]
    except KeyError:
        raise StructureError(f"unknown diagram shape {name!r} (known: {', '.join(SHAPES)})") from None


@dataclass(frozen=True, eq=False)
class Diagram:
    shape: Shape
    modules: dict
    maps: dict
    witnesses: dict = field(default_factory=dict)

    def module(self, name) -> FiniteModule:
        return self.modules[name]

    def map(self, a, b) -> ModuleMorphism:
        return self.maps[(a, b)]

    def composite(self, path) -> tuple[int, ...]:
        table = tuple(range(self.modules[path[0]].size))
        for a, b in zip(path, path[1:]):
            f = self.maps[(a, b)]
            table = tuple(f.map[x] for x in table)
        return table

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.name,
            "sizes": {k: self.modules[k].size for k in self.shape.nodes},
            "maps": [{"from": a, "to": b, "map": list(self.maps[(a, b)].map)} for a, b in self.shape.arrows],
        }


def _square_name(square) -> str:
    return "square " + "-".join(square[0]) + " / " + "-".join(square[1])


def check_structure(shape: Shape, modules: dict, maps: dict):
    for name in shape.nodes:
        if name not in modules:
            raise StructureError(f"{shape.name}: missing module {name}")
    for key in maps:
        if key not in shape.arrows:
            raise StructureError(f"{shape.name}: unexpected map {key[0]} -> {key[1]}")
    first = modules[shape.nodes[0]]
    for name in shape.nodes:
        if not same_truss(first, modules[name]):
            raise StructureError(f"{shape.name}: module {name} is over a different truss")
    for a, b in shape.arrows:
        if (a, b) not in maps:
            raise StructureError(f"{shape.name}: missing map {a} -> {b}")
        f = maps[(a, b)]
        if not (f.dom == modules[a] and f.cod == modules[b]):
            raise StructureError(f"{shape.name}: map {a} -> {b} does not match its modules")


def check_semantics(shape: Shape, modules: dict, maps: dict) -> dict:
    """Linearity, commutativity, declared exactness.  Returns the exactness witnesses."""
    for (a, b), f in maps.items():
        report = validate_module_morphism(f)
        if not report:
            raise PreconditionError(f"map {a}->{b}", f"not T-linear: {report.describe()}", report.witness)
    tmp = Diagram(shape, modules, maps)
    for square in shape.squares:
        left, right = tmp.composite(square[0]), tmp.composite(square[1])
        if left != right:
            x = next(i for i, (u, v) in enumerate(zip(left, right)) if u != v)
            raise PreconditionError(
                _square_name(square), f"does not commute at {x}: {left[x]} != {right[x]}", x
            )
    witnesses = {}
    for decl in shape.declared:
        kind, names = decl[0], decl[1:]
        label = "row/column " + "-".join(names)
        if kind == "mono":
            if not maps[names].is_injective():
                raise PreconditionError(f"map {names[0]}->{names[1]}", "not injective")
        elif kind == "epi":
            if not maps[names].is_surjective():
                raise PreconditionError(f"map {names[0]}->{names[1]}", "not surjective")
        elif kind == "exact":
            f, g = maps[names[:2]], maps[names[1:]]
            w = is_exact_at(f, g, names[1])
            if w is None:
                raise PreconditionError(label, f"not exact at {names[1]}")
            witnesses[names] = w.element
        elif kind == "short":
            f, g = maps[names[:2]], maps[names[1:]]
            report = is_short_exact(f, g)
            if not report.exact:
                raise PreconditionError(label, "not short exact", report.to_dict())
            witnesses[names] = report.witness.element
        else:
            raise StructureError(f"unknown declaration {kind!r}")
    return witnesses


def _extra_checks(d: Diagram):
    if d.shape.name == "snake" and not absorbers(d.module("M1")):
        raise PreconditionError("module M1", "Abs(M1) is empty")
    if d.shape.name == "mono2x3":
        a2 = d.witnesses[("A1", "A", "A2")]
        b2 = d.witnesses[("B1", "B", "B2")]
        if d.map("A2", "B2")(a2) != b2:
            raise PreconditionError("base points", f"g({a2}) = {d.map('A2', 'B2')(a2)} is not the bottom witness {b2}", a2)


def make_diagram(shape, modules: dict, maps: dict) -> Diagram:
    """Build and fully validate a diagram; maps may be tables or morphisms."""
    shape = get_shape(shape) if isinstance(shape, str) else shape
    built = {}
    for key, f in maps.items():
        key = tuple(key)
        if key not in shape.arrows:
            raise StructureError(f"{shape.name}: unexpected map {key[0]} -> {key[1]}")
        if not isinstance(f, ModuleMorphism):
            f = ModuleMorphism(modules[key[0]], modules[key[1]], tuple(f))
        built[key] = f
    check_structure(shape, modules, built)
    witnesses = check_semantics(shape, modules, built)
    d = Diagram(shape, dict(modules), built, witnesses)
    _extra_checks(d)
    return d


def push_base_point(d: Diagram, e: int, source: str = None) -> dict:
    """Images of ``e`` at every node reachable from ``source`` along arrows."""
    source = source or d.shape.nodes[0]
    base = {source: e}
    changed = True
    while changed:
        changed = False
        for a, b in d.shape.arrows:
            if a in base:
                v = d.maps[(a, b)](base[a])
                if b not in base:
                    base[b] = v
                    changed = True
                elif base[b] != v:
                    raise ConsistencyError(f"base point reaches {b} as {base[b]} and {v}")
    return base


def twist(d: Diagram, e: int, source: str = None) -> Diagram:
    """Replace every action by the one induced at the pushed base point.

    Heaps and map tables are unchanged, so exactness is too; linearity
    survives because each map sends base point to base point.
    """
    base = push_base_point(d, e, source)
    missing = [n for n in d.shape.nodes if n not in base]
    if missing:
        raise StructureError(f"nodes {missing} are not reachable from the twist source")
    modules = {k: induced_module(m, base[k]) for k, m in d.modules.items()}
    return make_diagram(d.shape, modules, {k: f.map for k, f in d.maps.items()})
