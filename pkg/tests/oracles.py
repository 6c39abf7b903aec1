"""Independent reference implementations used to cross-check the package.

Nothing here imports the code under test except for plain data types; each
oracle is a direct, slow transcription of a definition.
"""

from __future__ import annotations

import itertools
import math
from collections import deque

import networkx as nx


def naive_dp_colorings(vertices, edges, lists, matchings):
    """Every DP-coloring, by product-space enumeration."""
    vertices = list(vertices)
    for combo in itertools.product(*(sorted(lists[v]) for v in vertices)):
        col = dict(zip(vertices, combo))
        if all((col[u], col[v]) not in matchings.get((u, v), ()) for u, v in edges):
            yield col


def naive_dp_colorable(vertices, edges, lists, matchings) -> bool:
    return next(naive_dp_colorings(vertices, edges, lists, matchings), None) is not None


def naive_list_colorable(vertices, edges, lists) -> bool:
    vertices = list(vertices)
    for combo in itertools.product(*(sorted(lists[v]) for v in vertices)):
        col = dict(zip(vertices, combo))
        if all(col[u] != col[v] for u, v in edges):
            return True
    return False


def to_nx(adj) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(adj)
    g.add_edges_from((u, v) for u in adj for v in adj[u])
    return g


def bfs(adj, s) -> dict:
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def naive_triangles(adj) -> list:
    out = []
    for a, b, c in itertools.combinations(sorted(adj), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            out.append((a, b, c))
    return out


def naive_triangle_distance(adj) -> float:
    tris = naive_triangles(adj)
    dist = {v: bfs(adj, v) for v in adj}
    best = math.inf
    for s, t in itertools.combinations(tris, 2):
        for x in s:
            for y in t:
                best = min(best, dist[x].get(y, math.inf))
    return best


def nx_cycle_count(adj, k) -> int:
    return sum(1 for c in nx.simple_cycles(to_nx(adj), length_bound=k) if len(c) == k)


def nx_faces(rotation) -> list:
    """Face vertex-sets via networkx's embedding (given clockwise orders)."""
    emb = nx.PlanarEmbedding()
    emb.set_data({v: list(reversed(ns)) for v, ns in rotation.items()})
    emb.check_structure()
    seen = set()
    faces = []
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        walk = emb.traverse_face(u, v, mark_half_edges=seen)
        faces.append(walk)
    return faces
