"""Simple graphs and plane graphs given by a rotation system.

A :class:`PlaneGraph` stores, for every vertex, the counterclockwise cyclic
order of its neighbours.  Faces are traced with the usual rule: arriving at
``v`` along the dart ``u -> v`` we leave along ``v -> w`` where ``w`` is the
neighbour immediately *before* ``u`` in the rotation of ``v``.  Each dart then
has its face on the left.

Vertex ids must be mutually comparable (all ints, or all strings) because
every enumeration in this package is done in sorted order for determinism.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import GraphError, IdentificationError

Vertex = Hashable
Edge = tuple
Cycle = tuple

MAX_CYCLE_LENGTH = 12


def edge_key(u, v) -> Edge:
    return (u, v) if u <= v else (v, u)


class Graph:
    """Finite simple undirected graph."""

    def __init__(self, adjacency: Mapping[Vertex, Iterable[Vertex]]):
        adj = {v: frozenset(ns) for v, ns in adjacency.items()}
        for v, ns in adj.items():
            if v in ns:
                raise GraphError(f"loop at vertex {v!r}", "loop")
            for w in ns:
                if w not in adj or v not in adj[w]:
                    raise GraphError(f"asymmetric adjacency between {v!r} and {w!r}", "asymmetric")
        self._adj = adj

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[Vertex]], vertices: Iterable[Vertex] = ()) -> "Graph":
        adj: dict = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u!r}", "loop")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls(adj)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted(self._adj))

    @cached_property
    def edges(self) -> tuple:
        return tuple(sorted({edge_key(u, v) for u in self._adj for v in self._adj[u]}))

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def subgraph(self, keep: Iterable[Vertex]) -> "Graph":
        keep = set(keep)
        return Graph({v: self._adj[v] & keep for v in keep})

    def remove_vertices(self, drop: Iterable[Vertex]) -> "Graph":
        drop = set(drop)
        return self.subgraph(v for v in self._adj if v not in drop)

    def distances_from(self, sources: Iterable[Vertex]) -> dict:
        dist = {}
        queue = deque()
        for s in sources:
            dist[s] = 0
            queue.append(s)
        while queue:
            v = queue.popleft()
            for w in self._adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        if not self._adj:
            return True
        return len(self.distances_from([self.vertices[0]])) == len(self._adj)

    def components(self) -> list[tuple]:
        seen: set = set()
        comps = []
        for v in self.vertices:
            if v not in seen:
                comp = self.distances_from([v])
                seen.update(comp)
                comps.append(tuple(sorted(comp)))
        return comps


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple          # vertices of the boundary walk, in walk order
    darts: tuple             # (u, v) steps; darts[i] = (boundary[i], boundary[i+1])

    @property
    def degree(self) -> int:
        return len(self.darts)

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.boundary)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(edge_key(u, v) for u, v in self.darts)


class PlaneGraph(Graph):
    """Simple graph with a counterclockwise rotation system.

    ``outer`` optionally designates the outer face by its boundary cycle.
    """

    def __init__(self, rotation: Mapping[Vertex, Sequence[Vertex]], outer: Sequence[Vertex] | None = None):
        rot = {v: tuple(ns) for v, ns in rotation.items()}
        for v, ns in rot.items():
            if len(set(ns)) != len(ns):
                raise GraphError(f"rotation of {v!r} repeats a neighbour (parallel edge)", "parallel")
        super().__init__(rot)
        self.rotation = rot
        self._pos = {v: {w: i for i, w in enumerate(ns)} for v, ns in rot.items()}
        self.outer = tuple(outer) if outer is not None else None
        if self.outer is not None:
            check_cycle(self, self.outer)

    def with_outer(self, outer: Sequence[Vertex] | None) -> "PlaneGraph":
        return PlaneGraph(self.rotation, outer)

    def next_dart(self, u, v) -> tuple:
        rot = self.rotation[v]
        return (v, rot[self._pos[v][u] - 1])

    @cached_property
    def faces(self) -> tuple:
        return tuple(trace_faces(self))

    @cached_property
    def dart_face(self) -> dict:
        return {d: f.id for f in self.faces for d in f.darts}

    def outer_face(self) -> Face:
        if self.outer is None:
            raise GraphError("no outer face designated", "no-outer")
        face = find_face(self, self.outer)
        if face is None:
            raise GraphError(f"designated outer cycle {self.outer} is not a face", "outer-not-face")
        return face

    def remove_vertices(self, drop: Iterable[Vertex]) -> "PlaneGraph":
        drop = set(drop)
        rot = {v: [w for w in ns if w not in drop] for v, ns in self.rotation.items() if v not in drop}
        outer = self.outer if self.outer is not None and not drop.intersection(self.outer) else None
        return PlaneGraph(rot, outer)

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> "PlaneGraph":
        def m(v):
            return mapping.get(v, v)
        rot = {m(v): [m(w) for w in ns] for v, ns in self.rotation.items()}
        outer = None if self.outer is None else [m(v) for v in self.outer]
        return PlaneGraph(rot, outer)


def trace_faces(g: PlaneGraph) -> list[Face]:
    """All faces of the embedding of a connected plane graph.

    Faces are numbered by their smallest dart, so ids are stable for a given
    rotation system.  The face degree is the length of the boundary walk, so
    a bridge contributes twice to the one face it lies on.
    """
    if not g.is_connected():
        raise GraphError("face tracing requires connected graph", "disconnected")
    if not g.edges:
        return [Face(0, tuple(g.vertices[:1]), ())]
    darts = sorted((u, v) for u in g.vertices for v in g.rotation[u])
    seen: set = set()
    faces = []
    for start in darts:
        if start in seen:
            continue
        walk = []
        d = start
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = g.next_dart(*d)
        if d != start:
            raise GraphError("malformed rotation: face walk does not close", "rotation")
        faces.append(Face(len(faces), tuple(u for u, _ in walk), tuple(walk)))
    n_v, n_e, n_f = len(g.vertices), len(g.edges), len(faces)
    if n_v - n_e + n_f != 2:
        raise GraphError(f"rotation is not planar: V-E+F = {n_v - n_e + n_f}", "rotation")
    return faces


def from_faces(faces: Sequence[Sequence[Vertex]], outer: Sequence[Vertex] | None = None) -> PlaneGraph:
    """Plane graph whose faces are exactly the given vertex cycles.

    Every edge must lie on exactly two of the cycles.  Orientations are
    propagated across shared edges, so the cycles may be listed in either
    direction.
    """
    faces = [list(f) for f in faces]
    if not faces:
        raise GraphError("no faces given", "rotation")
    sides: dict = {}
    for i, f in enumerate(faces):
        if len(f) < 3 or len(set(f)) != len(f):
            raise GraphError(f"face {tuple(f)} is not a cycle", "rotation")
        for j, u in enumerate(f):
            v = f[(j + 1) % len(f)]
            sides.setdefault(edge_key(u, v), []).append((i, (u, v)))
    for e, s in sides.items():
        if len(s) != 2:
            raise GraphError(f"edge {e} lies on {len(s)} faces, expected 2", "rotation")
    sign = {0: 1}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        f = faces[i]
        for j, u in enumerate(f):
            v = f[(j + 1) % len(f)]
            dart = (u, v) if sign[i] == 1 else (v, u)
            for k, d in sides[edge_key(u, v)]:
                if k == i:
                    continue
                want = -1 if d == dart else 1
                if k not in sign:
                    sign[k] = want
                    queue.append(k)
                elif sign[k] != want:
                    raise GraphError("faces cannot be oriented consistently", "rotation")
    if len(sign) != len(faces):
        raise GraphError("faces do not form a connected surface", "rotation")
    faces = [f if sign[i] == 1 else f[::-1] for i, f in enumerate(faces)]
    succ: dict = {}
    for f in faces:
        n = len(f)
        for j, v in enumerate(f):
            u, w = f[j - 1], f[(j + 1) % n]
            succ.setdefault(v, {})[w] = u
    rotation = {}
    for v, s in succ.items():
        start = min(s)
        order = [start]
        while s[order[-1]] != start:
            order.append(s[order[-1]])
            if len(order) > len(s):
                break
        if len(order) != len(s):
            raise GraphError(f"faces around {v!r} do not form a single disk", "rotation")
        rotation[v] = order
    g = PlaneGraph(rotation, outer)
    if len(g.faces) != len(faces):
        raise GraphError("face list does not describe a sphere embedding", "rotation")
    return g


def spanning_forest(g: Graph) -> list:
    """BFS spanning forest, roots taken in vertex order."""
    seen: set = set()
    tree = []
    for root in g.vertices:
        if root in seen:
            continue
        seen.add(root)
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in sorted(g.neighbors(u)):
                    if w not in seen:
                        seen.add(w)
                        tree.append(edge_key(u, w))
                        nxt.append(w)
            frontier = nxt
    return tree


def canonical_cycle(cycle: Sequence[Vertex]) -> Cycle:
    """Smallest rotation/reflection representative of a vertex cycle."""
    n = len(cycle)
    i = min(range(n), key=lambda j: cycle[j])
    fwd = tuple(cycle[(i + j) % n] for j in range(n))
    bwd = tuple(cycle[(i - j) % n] for j in range(n))
    return min(fwd, bwd)


def check_cycle(g: Graph, cycle: Sequence[Vertex]) -> None:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise GraphError(f"{tuple(cycle)} is not a cycle", "not-cycle")
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        if not g.has_edge(u, v):
            raise GraphError(f"{tuple(cycle)} is not a cycle of the graph (missing {u}-{v})", "not-cycle")


def find_face(g: PlaneGraph, cycle: Sequence[Vertex]) -> Face | None:
    target = canonical_cycle(cycle)
    for f in g.faces:
        if len(f.boundary) == len(target) and len(f.vertex_set) == len(target):
            if canonical_cycle(f.boundary) == target:
                return f
    return None


def cycles_of_length(g: Graph, k: int) -> list[Cycle]:
    """Every simple cycle with exactly ``k`` vertices, once each.

    Each cycle is reported in canonical form: it starts at its smallest
    vertex and its second vertex is smaller than its last.
    """
    if not 3 <= k <= MAX_CYCLE_LENGTH:
        raise GraphError(f"cycle length {k} outside 3..{MAX_CYCLE_LENGTH}", "range")
    found = []
    for s in g.vertices:
        path = [s]
        on_path = {s}

        def dfs(v):
            if len(path) == k:
                if g.has_edge(v, s) and path[1] < path[-1]:
                    found.append(tuple(path))
                return
            for w in sorted(g.neighbors(v)):
                if w > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    dfs(w)
                    path.pop()
                    on_path.discard(w)

        dfs(s)
    return found


def triangles(g: Graph) -> list[Cycle]:
    return cycles_of_length(g, 3)


def triangle_distance(g: Graph) -> float:
    """Smallest graph distance between two distinct triangles.

    Distance between triangles is the minimum distance between a vertex of
    one and a vertex of the other, so triangles sharing a vertex are at
    distance 0.  Returns ``math.inf`` with fewer than two triangles.
    """
    tris = triangles(g)
    best = math.inf
    for i, t in enumerate(tris):
        dist = g.distances_from(t)
        for other in tris[i + 1:]:
            d = min((dist.get(v, math.inf) for v in other), default=math.inf)
            best = min(best, d)
        if best == 0:
            break
    return best


def has_chord(g: Graph, cycle: Sequence[Vertex]) -> bool:
    check_cycle(g, cycle)
    n = len(cycle)
    index = {v: i for i, v in enumerate(cycle)}
    for i, u in enumerate(cycle):
        for w in g.neighbors(u):
            j = index.get(w)
            if j is not None and (j - i) % n not in (1, n - 1):
                return True
    return False


def cycle_sides(g: PlaneGraph, cycle: Sequence[Vertex]) -> tuple[frozenset, frozenset]:
    """(interior, exterior) vertex sets of a cycle, relative to the outer face."""
    check_cycle(g, cycle)
    outer = g.outer_face()
    cyc_edges = {edge_key(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
    dart_face = g.dart_face
    faces = g.faces

    def region(seeds):
        todo = list(seeds)
        got = set(todo)
        while todo:
            f = faces[todo.pop()]
            for u, v in f.darts:
                if edge_key(u, v) in cyc_edges:
                    continue
                h = dart_face[(v, u)]
                if h not in got:
                    got.add(h)
                    todo.append(h)
        return got

    n = len(cycle)
    left = region(dart_face[(cycle[i], cycle[(i + 1) % n])] for i in range(n))
    right = region(dart_face[(cycle[(i + 1) % n], cycle[i])] for i in range(n))
    if left & right:
        raise GraphError("cycle does not separate the embedding; rotation is inconsistent", "rotation")
    on_cycle = set(cycle)

    def verts(region_faces):
        return frozenset(v for fid in region_faces for v in faces[fid].boundary if v not in on_cycle)

    if outer.id in left:
        return verts(right), verts(left)
    return verts(left), verts(right)


def is_separating(g: PlaneGraph, cycle: Sequence[Vertex]) -> bool:
    inside, outside = cycle_sides(g, cycle)
    return bool(inside) and bool(outside)


def common_face(g: PlaneGraph, u, v) -> Face | None:
    for f in g.faces:
        if u in f.vertex_set and v in f.vertex_set:
            return f
    return None


def identify(g: PlaneGraph, u, v) -> PlaneGraph:
    """Merge ``v`` into ``u`` through a face incident to both.

    The merged vertex keeps the id ``u``.  Its rotation is the rotation of
    ``u`` opened at the corner of the shared face with the whole rotation of
    ``v`` spliced in, so the shared face splits in two and the result is
    still a plane graph.
    """
    if u == v:
        raise IdentificationError("cannot identify a vertex with itself", "same-vertex")
    if g.has_edge(u, v):
        raise IdentificationError(f"{u!r} and {v!r} are adjacent", "adjacent")
    shared = g.neighbors(u) & g.neighbors(v)
    if shared:
        raise IdentificationError(
            f"{u!r} and {v!r} have a common neighbor {sorted(shared)[0]!r}; merging would create parallel edges",
            "common-neighbor",
        )
    face = common_face(g, u, v)
    if face is None:
        raise IdentificationError(f"{u!r} and {v!r} share no face", "no-common-face")

    def opened(x):
        # rotation of x starting at the neighbour we arrive from along the face
        rot = g.rotation[x]
        if not rot:
            return []
        for a, b in face.darts:
            if b == x:
                i = g._pos[x][a]
                return list(rot[i:] + rot[:i])
        raise AssertionError("vertex not on face")

    merged = opened(u) + opened(v)
    rot = {}
    for x, ns in g.rotation.items():
        if x == v:
            continue
        if x == u:
            rot[x] = merged
        else:
            rot[x] = [u if w == v else w for w in ns]
    outer = None
    if g.outer is not None:
        if v not in g.outer:
            outer = g.outer
        elif u not in g.outer:
            outer = tuple(u if w == v else w for w in g.outer)
    return PlaneGraph(rot, outer)


def classify_9cycle(g: Graph, cycle: Sequence[Vertex], templates: Sequence | None = None) -> str:
    """Return ``"bad"`` when ``cycle`` is the outer 9-cycle of an induced copy
    of one of ``templates``, ``"good"`` otherwise.

    Templates are objects with ``graph`` and ``outer`` attributes (see
    :mod:`dpcolor.reducibility`); the default is the shipped pair.
    """
    if len(cycle) != 9:
        raise GraphError(f"expected a 9-cycle, got length {len(cycle)}", "not-9-cycle")
    check_cycle(g, cycle)
    if templates is None:
        from .reducibility import bad_nine_cycle_templates
        templates = bad_nine_cycle_templates()
    for t in templates:
        if pinned_match(g, cycle, t.graph, t.outer) is not None:
            return "bad"
    return "good"


def pinned_match(g: Graph, cycle: Sequence[Vertex], pattern: Graph, pattern_cycle: Sequence[Vertex]) -> dict | None:
    """Induced embedding of ``pattern`` into ``g`` sending ``pattern_cycle``
    onto ``cycle`` (up to rotation and reflection), or None."""
    n = len(cycle)
    if len(pattern_cycle) != n:
        return None
    cycle = list(cycle)
    on_cycle = set(cycle)
    rest = [v for v in pattern.vertices if v not in set(pattern_cycle)]
    # interior pattern vertices ordered so each has an already-placed neighbour when possible
    dist = pattern.distances_from(pattern_cycle)
    rest.sort(key=lambda v: (dist.get(v, math.inf), v))
    candidates = [w for w in g.vertices if w not in on_cycle]
    for shift in range(n):
        for step in (1, -1):
            phi = {pattern_cycle[i]: cycle[(shift + step * i) % n] for i in range(n)}
            if not _consistent(g, pattern, phi, pattern_cycle):
                continue
            got = _extend_match(g, pattern, phi, rest, 0, candidates, set(phi.values()))
            if got is not None:
                return got
    return None


def _consistent(g, pattern, phi, placed) -> bool:
    placed = list(placed)
    for i, a in enumerate(placed):
        for b in placed[i + 1:]:
            if pattern.has_edge(a, b) != g.has_edge(phi[a], phi[b]):
                return False
    return True


def _extend_match(g, pattern, phi, rest, i, candidates, used):
    if i == len(rest):
        return dict(phi)
    p = rest[i]
    for w in candidates:
        if w in used:
            continue
        ok = True
        for q, img in phi.items():
            if pattern.has_edge(p, q) != g.has_edge(w, img):
                ok = False
                break
        if ok:
            phi[p] = w
            used.add(w)
            got = _extend_match(g, pattern, phi, rest, i + 1, candidates, used)
            if got is not None:
                return got
            del phi[p]
            used.discard(w)
    return None
