"""JSON network documents: parsing with located diagnostics and a
canonical serialization.

Homogeneous form::

    {"cells": 3, "dim": 1, "params": 1,
     "maps": {"s1": [1, 2, 3], "s2": [1, 1, 2]}, "order": ["s1", "s2"],
     "functions": {"f": "l1*X1 - X1^3 + X2"}}

Colored form: ``"colors": [{"cells": 2, "dim": 1}, ...]`` replaces cells
and dim, map keys read ``"name@(d<-c)"`` for a map from color c cells to
color d cells, and each function is an object with one entry per color.

Functions are written in the input variables of the closed network, so
X3 is available in the example above even though only two maps are given.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .colored import (ColoredNetworkSpec, ColoredPolyFamily, colored_variable_names, parse_colored_polymap,
                      semigroupoid_closure)
from .errors import DocumentError, ValidationError
from .finmap import FiniteMap
from .network import NetworkSpec
from .polyspace import format_polymap, parse_polymap

_TYPED_KEY = re.compile(r"^(.+)@\((\d+)<-(\d+)\)$")
_HOM_KEYS = {"cells", "dim", "params", "maps", "order", "functions"}
_COL_KEYS = {"colors", "params", "maps", "order", "functions"}


@dataclass
class NetworkDocument:
    """A parsed document.  ``spec`` holds the maps exactly as written."""

    spec: object
    map_names: list
    params: int = 0
    functions: dict = field(default_factory=dict)

    @property
    def colored(self) -> bool:
        return isinstance(self.spec, ColoredNetworkSpec)


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise DocumentError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _load(text):
    if isinstance(text, dict):
        return text
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None


def _int(value, path, minimum):
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise DocumentError(f"expected an integer >= {minimum}, got {value!r}", path=path)
    return value


def _images(value, path, size, top):
    if not isinstance(value, list) or len(value) != size:
        raise DocumentError(f"expected a list of {size} cell indices", path=path)
    for pos, x in enumerate(value, start=1):
        if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= top:
            raise DocumentError(f"entry {pos}: image {x!r} is outside 1..{top}", path=path)
    return tuple(value)


def _order(data, names):
    order = data.get("order")
    if order is None:
        return list(names)
    if not isinstance(order, list) or sorted(order) != sorted(names) or len(set(order)) != len(order):
        raise DocumentError("order must list every map name exactly once", path="order")
    return list(order)


def parse_network(document) -> NetworkDocument:
    """Parse JSON text (or an already loaded dict) into a NetworkDocument."""
    data = _load(document)
    if not isinstance(data, dict):
        raise DocumentError("the document must be a JSON object")
    if "colors" in data:
        return _parse_colored(data)
    unknown = set(data) - _HOM_KEYS
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}")
    if "cells" not in data or "maps" not in data:
        raise DocumentError("the document needs 'cells' and 'maps'")
    N = _int(data["cells"], "cells", 1)
    m = _int(data.get("dim", 1), "dim", 1)
    p = _int(data.get("params", 0), "params", 0)
    maps = data["maps"]
    if not isinstance(maps, dict) or not maps:
        raise DocumentError("maps must be a non-empty object", path="maps")
    images = {}
    for name, value in maps.items():
        if "@" in name:
            raise DocumentError("typed map keys need a 'colors' section", path=f"maps.{name}")
        images[name] = _images(value, f"maps.{name}", N, N)
    names = _order(data, list(maps))
    seen = {}
    for name in names:
        if images[name] in seen:
            raise DocumentError(f"map {name!r} repeats map {seen[images[name]]!r}", path=f"maps.{name}")
        seen[images[name]] = name
    spec = NetworkSpec.from_maps([FiniteMap(images[nm]) for nm in names], m, close=False)
    doc = NetworkDocument(spec, names, p)
    arity = spec.n if spec.is_semigroup else spec.closure().n
    for fname, text in (data.get("functions") or {}).items():
        try:
            doc.functions[fname] = parse_polymap(text, arity, m, p)
        except ValidationError as exc:
            raise DocumentError(str(exc), path=f"functions.{fname}") from None
    return doc


def _parse_colored(data) -> NetworkDocument:
    unknown = set(data) - _COL_KEYS
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}")
    colors = data["colors"]
    if not isinstance(colors, list) or not colors:
        raise DocumentError("colors must be a non-empty list", path="colors")
    counts, dims = [], []
    for c, entry in enumerate(colors, start=1):
        if not isinstance(entry, dict) or set(entry) - {"cells", "dim"} or "cells" not in entry:
            raise DocumentError("each color needs 'cells' and optionally 'dim'", path=f"colors[{c}]")
        counts.append(_int(entry["cells"], f"colors[{c}].cells", 1))
        dims.append(_int(entry.get("dim", 1), f"colors[{c}].dim", 1))
    p = _int(data.get("params", 0), "params", 0)
    maps = data.get("maps")
    if not isinstance(maps, dict) or not maps:
        raise DocumentError("maps must be a non-empty object", path="maps")
    typed, names = {}, {}
    for key, value in maps.items():
        mt = _TYPED_KEY.match(key)
        if not mt:
            raise DocumentError("colored map keys look like 'name@(d<-c)'", path=f"maps.{key}")
        name, d, c = mt.group(1), int(mt.group(2)), int(mt.group(3))
        if not (1 <= d <= len(counts) and 1 <= c <= len(counts)):
            raise DocumentError(f"color pair ({d},{c}) outside 1..{len(counts)}", path=f"maps.{key}")
        if name in names:
            raise DocumentError(f"duplicate map name {name!r}", path=f"maps.{key}")
        names[name] = key
        typed[key] = (d, c, _images(value, f"maps.{key}", counts[c - 1], counts[d - 1]))
    order = _order(data, list(maps))
    grid: dict = {}
    for key in order:
        d, c, img = typed[key]
        if img in grid.setdefault((d, c), []):
            raise DocumentError(f"map repeats another map of type ({d},{c})", path=f"maps.{key}")
        grid[(d, c)].append(img)
    spec = ColoredNetworkSpec.build(counts, dims, grid, close=False)
    doc = NetworkDocument(spec, order, p)
    closed = spec if spec.is_semigroupoid else semigroupoid_closure(spec)
    for fname, per_color in (data.get("functions") or {}).items():
        path = f"functions.{fname}"
        if not isinstance(per_color, dict) or sorted(per_color) != [str(c) for c in range(1, len(counts) + 1)]:
            raise DocumentError("colored functions need one entry per color, keyed '1', '2', ...", path=path)
        try:
            fam = [parse_colored_polymap(closed, c, per_color[str(c)], p) for c in range(1, len(counts) + 1)]
        except ValidationError as exc:
            raise DocumentError(str(exc), path=path) from None
        doc.functions[fname] = ColoredPolyFamily(fam)
    return doc


def _typed_position(names):
    """(d, c, j) for every typed key, j counting within its type in listed order."""
    out, seen = {}, {}
    for key in names:
        mt = _TYPED_KEY.match(key)
        d, c = int(mt.group(2)), int(mt.group(3))
        seen[(d, c)] = seen.get((d, c), 0) + 1
        out[key] = (d, c, seen[(d, c)])
    return out


def serialize(doc: NetworkDocument) -> dict:
    """Canonical dict form; parse_network(serialize(d)) reproduces d."""
    if doc.colored:
        spec = doc.spec
        closed = spec if spec.is_semigroupoid else semigroupoid_closure(spec)
        pos = _typed_position(doc.map_names)
        maps = {}
        for key in doc.map_names:
            d, c, j = pos[key]
            maps[key] = list(spec.typed(d, c)[j - 1].images)
        return {
            "colors": [{"cells": spec.N(c), "dim": spec.dim(c)} for c in range(1, spec.C + 1)],
            "params": doc.params,
            "maps": maps,
            "order": list(doc.map_names),
            "functions": {
                name: {str(c): format_polymap(fam.color(c), colored_variable_names(closed, c, fam.p))
                       for c in range(1, spec.C + 1)}
                for name, fam in doc.functions.items()},
        }
    spec = doc.spec
    return {
        "cells": spec.N,
        "dim": spec.m,
        "params": doc.params,
        "maps": {name: list(s.images) for name, s in zip(doc.map_names, spec.maps)},
        "order": list(doc.map_names),
        "functions": {name: format_polymap(f) for name, f in doc.functions.items()},
    }


def normalize(document) -> dict:
    return serialize(parse_network(document))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
