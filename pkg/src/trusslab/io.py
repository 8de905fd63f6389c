"""JSON documents for structures, morphisms and diagrams.

Loading checks shapes and ranges only.  Axioms are checked by the ``check``
command, never implicitly, so a file holding a broken heap still loads.

A document may carry a ``"trusses"`` table (and, for morphisms, a
``"modules"`` table); modules then name their truss instead of inlining it,
and every module naming the same entry shares one truss object.  Names of
the form ``Z<n>`` that are not in the table resolve to ``T(Z/n)``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagrams import Diagram, check_structure, get_shape, make_diagram
from .errors import LoadError, ParseError, StructureError, UnknownKindError
from .heap import FiniteGroup, FiniteHeap, HeapMorphism
from .module import FiniteModule, ModuleMorphism
from .truss import FiniteRing, FiniteTruss, TrussMorphism, truss_of_ring, zn_truss

KINDS = ("heap", "group", "ring", "truss", "module", "morphism", "diagram")
_PRESET = re.compile(r"Z(\d+)$")


@dataclass(frozen=True, eq=False)
class DiagramSpec:
    """A structurally checked diagram whose laws have not been looked at yet."""

    shape: str
    modules: dict
    maps: dict

    def build(self) -> Diagram:
        return make_diagram(self.shape, self.modules, self.maps)


class _Loader:
    def __init__(self, doc: dict):
        self.doc = doc
        self.trusses = {}
        self.modules = {}

    # -- helpers -------------------------------------------------------------

    @staticmethod
    def field(obj, key, path, required=True):
        if not isinstance(obj, dict):
            raise StructureError(f"{path}: expected an object, got {type(obj).__name__}")
        if key not in obj:
            if required:
                raise StructureError(f"{path}: missing field {key!r}")
            return None
        return obj[key]

    @staticmethod
    def integer(value, path, bound=None):
        if isinstance(value, bool) or not isinstance(value, int):
            raise StructureError(f"{path}: expected an integer, got {value!r}")
        if bound is not None and not 0 <= value < bound:
            raise StructureError(f"{path} = {value} out of range 0..{bound - 1}")
        return value

    @staticmethod
    def table(value, path, ndim):
        try:
            arr = np.array(value, dtype=np.int64)
        except (ValueError, TypeError):
            raise StructureError(f"{path}: ragged or non-integer table") from None
        if arr.ndim != ndim:
            raise StructureError(f"{path}: expected a {ndim}-dimensional table, got {arr.ndim}")
        return arr

    def sized(self, obj, path, n):
        size = self.field(obj, "size", path, required=False)
        if size is not None and self.integer(size, path + ".size") != n:
            raise StructureError(f"{path}: size is {size} but the tables have {n} rows")

    @staticmethod
    def wrap(path, build):
        try:
            return build()
        except StructureError as exc:
            raise StructureError(f"{path}: {exc}") from None

    # -- kinds ---------------------------------------------------------------

    def heap(self, obj, path) -> FiniteHeap:
        op = self.table(self.field(obj, "op", path), path + ".op", 3)
        self.sized(obj, path, op.shape[0])
        return self.wrap(path, lambda: FiniteHeap(op))

    def group(self, obj, path) -> FiniteGroup:
        mul = self.table(self.field(obj, "mul", path), path + ".mul", 2)
        n = mul.shape[0]
        self.sized(obj, path, n)
        e = self.integer(self.field(obj, "id", path), path + ".id", n)
        return self.wrap(path, lambda: FiniteGroup(mul, e))

    def ring(self, obj, path) -> FiniteRing:
        add = self.table(self.field(obj, "add", path), path + ".add", 2)
        n = add.shape[0]
        self.sized(obj, path, n)
        mul = self.table(self.field(obj, "mul", path), path + ".mul", 2)
        zero = self.integer(self.field(obj, "zero", path), path + ".zero", n)
        one = self.field(obj, "one", path, required=False)
        if one is not None:
            one = self.integer(one, path + ".one", n)
        return self.wrap(path, lambda: FiniteRing(add, mul, zero, one))

    def truss(self, obj, path) -> FiniteTruss:
        if isinstance(obj, str):
            return self.named_truss(obj, path)
        ring = self.field(obj, "ring", path, required=False)
        if ring is not None:
            return truss_of_ring(self.ring(ring, path + ".ring"))
        heap = self.heap(self.field(obj, "heap", path), path + ".heap")
        mul = self.table(self.field(obj, "mul", path), path + ".mul", 2)
        one = self.field(obj, "one", path, required=False)
        if one is not None:
            one = self.integer(one, path + ".one", heap.size)
        return self.wrap(path, lambda: FiniteTruss(heap, mul, one))

    def named_truss(self, name, path) -> FiniteTruss:
        if name not in self.trusses:
            table = self.doc.get("trusses") or {}
            if name in table:
                self.trusses[name] = self.truss(table[name], f"trusses.{name}")
            elif _PRESET.match(name) and int(name[1:]) >= 1:
                self.trusses[name] = zn_truss(int(name[1:]))
            else:
                raise StructureError(f"{path}: unknown truss {name!r}")
        return self.trusses[name]

    def module(self, obj, path) -> FiniteModule:
        if isinstance(obj, str):
            if obj not in self.modules:
                table = self.doc.get("modules") or {}
                if obj not in table or isinstance(table[obj], str):
                    raise StructureError(f"{path}: unknown module {obj!r}")
                self.modules[obj] = self.module(table[obj], f"modules.{obj}")
            return self.modules[obj]
        truss = self.truss(self.field(obj, "truss", path), path + ".truss")
        op = self.table(self.field(obj, "op", path), path + ".op", 3)
        self.sized(obj, path, op.shape[0])
        act = self.table(self.field(obj, "act", path), path + ".act", 2)
        unital = bool(self.field(obj, "unital", path, required=False))
        return self.wrap(path, lambda: FiniteModule(truss, FiniteHeap(op), act, unital))

    def morphism(self, obj, path):
        role = self.field(obj, "role", path, required=False) or "module"
        builders = {
            "heap": (self.heap, HeapMorphism),
            "truss": (self.truss, TrussMorphism),
            "module": (self.module, ModuleMorphism),
        }
        if role not in builders:
            raise StructureError(f"{path}.role: unknown role {role!r} (known: {', '.join(builders)})")
        part, cls = builders[role]
        dom = part(self.field(obj, "dom", path), path + ".dom")
        cod = part(self.field(obj, "cod", path), path + ".cod")
        table = self.table(self.field(obj, "map", path), path + ".map", 1)
        return self.wrap(path, lambda: cls(dom, cod, tuple(int(x) for x in table)))

    def diagram(self, obj, path) -> DiagramSpec:
        shape = get_shape(self.field(obj, "shape", path))
        mods = self.field(obj, "modules", path)
        if not isinstance(mods, dict):
            raise StructureError(f"{path}.modules: expected an object of named modules")
        modules = {}
        for name, m in mods.items():
            self.modules[name] = modules[name] = self.module(m, f"{path}.modules.{name}")
        arrows = self.field(obj, "maps", path)
        if not isinstance(arrows, list):
            raise StructureError(f"{path}.maps: expected a list")
        maps = {}
        for i, entry in enumerate(arrows):
            p = f"{path}.maps[{i}]"
            key = (self.field(entry, "from", p), self.field(entry, "to", p))
            if key not in shape.arrows:
                raise StructureError(f"{p}: {shape.name} has no arrow {key[0]} -> {key[1]}")
            if key in maps:
                raise StructureError(f"{p}: duplicate arrow {key[0]} -> {key[1]}")
            for node in key:
                if node not in modules:
                    raise StructureError(f"{p}: unknown module {node!r}")
            table = self.table(self.field(entry, "map", p), p + ".map", 1)
            maps[key] = self.wrap(p, lambda: ModuleMorphism(modules[key[0]], modules[key[1]], tuple(int(x) for x in table)))
        check_structure(shape, modules, maps)
        return DiagramSpec(shape.name, modules, maps)

    def load(self):
        kind = self.field(self.doc, "kind", "document")
        if kind not in KINDS:
            raise UnknownKindError(f"unknown kind {kind!r} (known: {', '.join(KINDS)})")
        return getattr(self, kind)(self.doc, kind)


def from_dict(doc):
    if not isinstance(doc, dict):
        raise StructureError(f"document: expected a JSON object, got {type(doc).__name__}")
    return _Loader(doc).load()


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_dict(doc)


def load(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


# -- writing -----------------------------------------------------------------


def _heap_doc(h: FiniteHeap) -> dict:
    return {"kind": "heap", "size": h.size, "op": h.op.tolist()}


def _truss_doc(t: FiniteTruss) -> dict:
    doc = {"kind": "truss", "heap": _heap_doc(t.heap), "mul": t.mul.tolist()}
    if t.one is not None:
        doc["one"] = t.one
    return doc


def _module_doc(m: FiniteModule, truss) -> dict:
    doc = {"kind": "module", "truss": truss, "size": m.size, "op": m.heap.op.tolist(), "act": m.act.tolist()}
    if m.unital:
        doc["unital"] = True
    return doc


class _TrussNames:
    def __init__(self):
        self.names = []
        self.trusses = []

    def name(self, t: FiniteTruss) -> str:
        for name, u in zip(self.names, self.trusses):
            if u is t or u == t:
                return name
        self.names.append(f"T{len(self.names)}")
        self.trusses.append(t)
        return self.names[-1]

    def table(self) -> dict:
        return {n: _truss_doc(t) for n, t in zip(self.names, self.trusses)}


def dump(obj) -> dict:
    """The JSON document for a structure, morphism or diagram."""
    if isinstance(obj, FiniteHeap):
        return _heap_doc(obj)
    if isinstance(obj, FiniteGroup):
        return {"kind": "group", "size": obj.size, "mul": obj.mul.tolist(), "id": obj.identity}
    if isinstance(obj, FiniteRing):
        doc = {"kind": "ring", "size": obj.size, "add": obj.add.tolist(), "mul": obj.mul.tolist(), "zero": obj.zero}
        if obj.one is not None:
            doc["one"] = obj.one
        return doc
    if isinstance(obj, FiniteTruss):
        return _truss_doc(obj)
    if isinstance(obj, FiniteModule):
        return _module_doc(obj, _truss_doc(obj.truss))
    if isinstance(obj, HeapMorphism):
        return {"kind": "morphism", "role": "heap", "dom": _heap_doc(obj.dom), "cod": _heap_doc(obj.cod), "map": list(obj.map)}
    if isinstance(obj, TrussMorphism):
        return {"kind": "morphism", "role": "truss", "dom": _truss_doc(obj.dom), "cod": _truss_doc(obj.cod), "map": list(obj.map)}
    if isinstance(obj, ModuleMorphism):
        names = _TrussNames()
        dom, cod = _module_doc(obj.dom, names.name(obj.dom.truss)), _module_doc(obj.cod, names.name(obj.cod.truss))
        return {"kind": "morphism", "role": "module", "trusses": names.table(), "dom": dom, "cod": cod, "map": list(obj.map)}
    if isinstance(obj, (Diagram, DiagramSpec)):
        shape = obj.shape if isinstance(obj.shape, str) else obj.shape.name
        names = _TrussNames()
        nodes = get_shape(shape).nodes
        modules = {k: _module_doc(obj.modules[k], names.name(obj.modules[k].truss)) for k in nodes}
        maps = [{"from": a, "to": b, "map": list(obj.maps[(a, b)].map)} for a, b in get_shape(shape).arrows]
        return {"kind": "diagram", "shape": shape, "trusses": names.table(), "modules": modules, "maps": maps}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent=None) -> str:
    return json.dumps(dump(obj), indent=indent)
