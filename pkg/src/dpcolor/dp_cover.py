"""List assignments, matching assignments and cover graphs.

Conventions
-----------
* A list assignment is a mapping ``vertex -> frozenset of colors``.
* A matching assignment maps each edge key ``(u, v)`` with ``u < v`` to a
  frozenset of color pairs ``(c_u, c_v)``.  Use :func:`oriented` to read a
  matching from either end.
* A (partial) coloring maps vertices to colors.

The cover graph has a node ``(v, c)`` for each listed color; the nodes of a
vertex form a clique and the cross edges between two adjacent vertices are
exactly their matching.  A coloring is a DP-coloring when the chosen nodes
are pairwise non-adjacent in the cover.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping

from .errors import CoverError, StraightenError
from .plane_graph import Graph, edge_key

Lists = Mapping
Matchings = Mapping
Coloring = Mapping


def uniform_lists(g: Graph, k: int) -> dict:
    colors = frozenset(range(1, k + 1))
    return {v: colors for v in g.vertices}


def oriented(m: Matchings, u, v) -> frozenset:
    """Pairs ``(c_u, c_v)`` of the matching on edge uv, read from ``u``."""
    pairs = m.get(edge_key(u, v), frozenset())
    if u <= v:
        return pairs
    return frozenset((b, a) for a, b in pairs)


def from_lists(lists: Lists, g: Graph) -> dict:
    """Identity matchings, so that DP-colorings are exactly list colorings."""
    return {(u, v): frozenset((c, c) for c in lists[u] & lists[v]) for u, v in g.edges}


def identity_matchings(g: Graph, k: int) -> dict:
    return from_lists(uniform_lists(g, k), g)


class CoverGraph:
    """Cover graph of ``(g, lists, matchings)``; validated on construction."""

    def __init__(self, graph: Graph, lists: Lists, matchings: Matchings):
        self.graph = graph
        self.lists = {v: frozenset(lists[v]) for v in graph.vertices}
        self.matchings = {e: frozenset(matchings.get(e, ())) for e in graph.edges}
        conflicts: dict = {(v, c): set() for v in graph.vertices for c in self.lists[v]}
        for (u, v), pairs in self.matchings.items():
            for a, b in pairs:
                conflicts[(u, a)].add((v, b))
                conflicts[(v, b)].add((u, a))
        self.conflicts = {node: frozenset(ns) for node, ns in conflicts.items()}

    @cached_property
    def nodes(self) -> tuple:
        return tuple(sorted(self.conflicts))

    @property
    def n_clique_edges(self) -> int:
        return sum(len(c) * (len(c) - 1) // 2 for c in self.lists.values())

    @property
    def n_cross_edges(self) -> int:
        return sum(len(p) for p in self.matchings.values())

    @property
    def n_edges(self) -> int:
        return self.n_clique_edges + self.n_cross_edges

    def has_edge(self, a, b) -> bool:
        if a == b:
            return False
        if a[0] == b[0]:
            return True
        return b in self.conflicts.get(a, ())

    def forbidden(self, v, colored: Coloring) -> set:
        """Colors of ``v`` matched to a colored neighbour's chosen color."""
        out = set()
        for w in self.graph.neighbors(v):
            c = colored.get(w)
            if c is not None:
                for x, y in self.conflicts.get((w, c), ()):
                    if x == v:
                        out.add(y)
        return out

    @cached_property
    def kernel(self):
        from .solver import SearchKernel
        return SearchKernel.from_cover(self)

    def __repr__(self) -> str:
        return f"CoverGraph(nodes={len(self.nodes)}, edges={self.n_edges})"


def _check_matchings(g: Graph, lists: Lists, m: Matchings) -> None:
    for v in g.vertices:
        if v not in lists:
            raise CoverError(f"vertex {v!r} has no list", "missing-list")
    for key, pairs in m.items():
        u, v = key
        if key != edge_key(u, v) or not g.has_edge(u, v):
            raise CoverError(f"matching given on {u}-{v}, which is not an edge key of the graph", "not-an-edge")
        seen_u, seen_v = set(), set()
        for a, b in pairs:
            if a not in lists[u] or b not in lists[v]:
                raise CoverError(f"edge {u}-{v}: pair ({a}, {b}) uses an unlisted color", "unlisted-color")
            if a in seen_u or b in seen_v:
                raise CoverError(f"edge {u}-{v}: pairs do not form a matching", "not-a-matching")
            seen_u.add(a)
            seen_v.add(b)


def build_cover(g: Graph, lists: Lists, matchings: Matchings) -> CoverGraph:
    """Validated cover graph.  Edges missing from ``matchings`` get the empty matching."""
    _check_matchings(g, lists, matchings)
    return CoverGraph(g, lists, matchings)


def coloring_problem(cov: CoverGraph, a: Coloring) -> str | None:
    """Why ``a`` is not a DP-coloring of ``cov``, or None when it is one."""
    for v, c in a.items():
        if v not in cov.lists:
            return f"unknown vertex {v!r}"
        if c not in cov.lists[v]:
            return f"color {c} not in list of {v!r}"
    for (u, v), pairs in cov.matchings.items():
        if u in a and v in a and (a[u], a[v]) in pairs:
            return f"conflict on edge {u}-{v}"
    if len(a) != len(cov.lists):
        return "incomplete"
    return None


def is_dp_coloring(cov: CoverGraph, a: Coloring) -> bool:
    return coloring_problem(cov, a) is None


def is_valid_partial(cov: CoverGraph, a: Coloring) -> bool:
    problem = coloring_problem(cov, a)
    return problem is None or problem == "incomplete"


def residual_lists(cov: CoverGraph, phi: Coloring) -> dict:
    """Remaining lists of the uncolored vertices under the partial coloring ``phi``."""
    return {v: cov.lists[v] - cov.forbidden(v, phi) for v in cov.graph.vertices if v not in phi}


def _check_forest(edges: list) -> None:
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            raise StraightenError("cannot straighten a cycle", "cycle")
        parent[ru] = rv


def straighten(g: Graph, lists: Lists, matchings: Matchings, edges: Iterable, roots: Iterable = ()):
    """Rename colors so that every edge in the forest ``edges`` is straight.

    Each tree is walked outward from its root (the listed ``roots`` first,
    otherwise its smallest vertex); a child's colors are renamed to the
    colors they are matched with at the parent.  Returns the new lists, the
    new matchings (on all edges) and ``relabel[v][old] = new``.
    """
    edges = [edge_key(u, v) for u, v in edges]
    for u, v in edges:
        if not g.has_edge(u, v):
            raise StraightenError(f"{u}-{v} is not an edge", "not-an-edge")
    _check_matchings(g, lists, matchings)
    _check_forest(edges)
    for u, v in edges:
        pairs = matchings.get((u, v), frozenset())
        if not (len(pairs) == len(lists[u]) == len(lists[v])):
            raise StraightenError(f"edge {u}-{v}: matching is not perfect between equal-size lists", "not-perfect")
    tree_adj: dict = {}
    for u, v in edges:
        tree_adj.setdefault(u, []).append(v)
        tree_adj.setdefault(v, []).append(u)
    relabel = {v: {c: c for c in lists[v]} for v in g.vertices}
    done: set = set()
    order = [r for r in roots if r in tree_adj] + sorted(tree_adj)
    for root in order:
        if root in done:
            continue
        done.add(root)
        stack = [root]
        while stack:
            p = stack.pop()
            for w in sorted(tree_adj[p]):
                if w in done:
                    continue
                done.add(w)
                for cp, cw in oriented(matchings, p, w):
                    relabel[w][cw] = relabel[p][cp]
                stack.append(w)
    new_lists = {v: frozenset(relabel[v][c] for c in lists[v]) for v in g.vertices}
    new_matchings = {
        (u, v): frozenset((relabel[u][a], relabel[v][b]) for a, b in matchings.get((u, v), ()))
        for u, v in g.edges
    }
    return new_lists, new_matchings, relabel


def is_straight(m: Matchings, u, v) -> bool:
    return all(a == b for a, b in m.get(edge_key(u, v), ()))


def apply_relabel(a: Coloring, relabel: Mapping) -> dict:
    return {v: relabel[v][c] for v, c in a.items()}


def undo_relabel(a: Coloring, relabel: Mapping) -> dict:
    inverse = {v: {new: old for old, new in r.items()} for v, r in relabel.items()}
    return {v: inverse[v][c] for v, c in a.items()}
