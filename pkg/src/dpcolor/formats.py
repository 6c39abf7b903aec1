"""JSON file formats for graphs and list/matching assignments.

Graph file::

    {"vertices": [0, 1, ...],
     "rotation": {"0": [neighbours counterclockwise], ...},
     "outer": [cycle]}            # optional

Matching file::

    {"lists": {"0": [1, 2, 3], ...},
     "matchings": {"0-1": [[1, 2], [2, 1]], ...}}

Vertex ids are nonnegative integers; edge keys are ``"min-max"``.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .dp_cover import build_cover
from .errors import DPColorError
from .plane_graph import PlaneGraph, edge_key


class InputError(DPColorError):
    code = "input"


def read_json(path) -> tuple[object, str]:
    """Parsed JSON and the sha256 of the raw bytes."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}", "io") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason})", "parse") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", "parse") from exc
    return data, hashlib.sha256(raw).hexdigest()


def _vertex(x, where: str) -> int:
    if isinstance(x, bool):
        raise InputError(f"{where}: vertex id {x!r} is not a nonnegative integer", "schema")
    if isinstance(x, str) and x.isdigit():
        x = int(x)
    if not isinstance(x, int) or x < 0:
        raise InputError(f"{where}: vertex id {x!r} is not a nonnegative integer", "schema")
    return x


def _color(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: color {x!r} is not an integer", "schema")
    return x


def graph_from_dict(data) -> PlaneGraph:
    if not isinstance(data, dict) or "rotation" not in data:
        raise InputError("graph file must be an object with a 'rotation' field", "schema")
    rotation_in = data["rotation"]
    if not isinstance(rotation_in, dict):
        raise InputError("'rotation' must be an object", "schema")
    rotation = {}
    for key, ns in rotation_in.items():
        v = _vertex(key, "rotation")
        if not isinstance(ns, list):
            raise InputError(f"rotation of {v} must be a list", "schema")
        rotation[v] = [_vertex(w, f"rotation of {v}") for w in ns]
    vertices = [_vertex(v, "vertices") for v in data.get("vertices", rotation)]
    if len(set(vertices)) != len(vertices):
        raise InputError("'vertices' repeats an id", "schema")
    if set(vertices) != set(rotation):
        missing = sorted(set(vertices) ^ set(rotation))
        raise InputError(f"'vertices' and 'rotation' disagree on {missing}", "schema")
    for v, ns in rotation.items():
        for w in ns:
            if w not in rotation or v not in rotation[w]:
                raise InputError(f"asymmetric rotation entry {v}-{w}", "asymmetric")
    outer = data.get("outer")
    if outer is not None:
        if not isinstance(outer, list):
            raise InputError("'outer' must be a list", "schema")
        outer = [_vertex(v, "outer") for v in outer]
    return PlaneGraph(rotation, outer)


def graph_to_dict(g: PlaneGraph) -> dict:
    out = {"vertices": list(g.vertices), "rotation": {str(v): list(g.rotation[v]) for v in g.vertices}}
    if g.outer is not None:
        out["outer"] = list(g.outer)
    return out


def load_graph(path) -> tuple[PlaneGraph, str]:
    data, digest = read_json(path)
    return graph_from_dict(data), digest


def matching_from_dict(data, g) -> tuple[dict, dict]:
    if not isinstance(data, dict) or "lists" not in data:
        raise InputError("matching file must be an object with a 'lists' field", "schema")
    if not isinstance(data["lists"], dict) or not isinstance(data.get("matchings", {}), dict):
        raise InputError("'lists' and 'matchings' must be objects", "schema")
    lists = {}
    for key, colors in data["lists"].items():
        v = _vertex(key, "lists")
        if not isinstance(colors, list):
            raise InputError(f"list of {v} must be an array", "schema")
        lists[v] = frozenset(_color(c, f"list of {v}") for c in colors)
    matchings = {}
    for key, pairs in data.get("matchings", {}).items():
        parts = key.split("-") if isinstance(key, str) else []
        if len(parts) != 2:
            raise InputError(f"edge key {key!r} is not of the form 'u-v'", "schema")
        u, v = (_vertex(p, f"edge key {key!r}") for p in parts)
        if (u, v) != edge_key(u, v):
            raise InputError(f"edge key {key!r} must be written min-max", "schema")
        if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise InputError(f"matching on {key} must be a list of color pairs", "schema")
        matchings[(u, v)] = frozenset((_color(a, key), _color(b, key)) for a, b in pairs)
    missing = [v for v in g.vertices if v not in lists]
    extra = [v for v in lists if v not in g]
    if missing or extra:
        raise InputError(f"matching file does not fit the graph (missing {missing}, unknown {extra})", "mismatch")
    build_cover(g, lists, matchings)
    return lists, matchings


def matching_to_dict(lists, matchings) -> dict:
    return {
        "lists": {str(v): sorted(lists[v]) for v in sorted(lists)},
        "matchings": {f"{u}-{v}": sorted(map(list, pairs)) for (u, v), pairs in sorted(matchings.items())},
    }


def load_matching(path, g) -> tuple[dict, dict, str]:
    data, digest = read_json(path)
    lists, matchings = matching_from_dict(data, g)
    return lists, matchings, digest


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
