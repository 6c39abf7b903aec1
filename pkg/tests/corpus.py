"""Plane graphs used across the test suite, each with an outer cycle."""

from __future__ import annotations

import random

import networkx as nx

from dpcolor.plane_graph import PlaneGraph, from_faces


def cycle(n: int) -> PlaneGraph:
    c = list(range(n))
    return from_faces([c, c[::-1]], outer=c)


def wheel(n: int) -> PlaneGraph:
    rim = list(range(1, n + 1))
    faces = [[0, rim[i], rim[(i + 1) % n]] for i in range(n)] + [rim[::-1]]
    return from_faces(faces, outer=rim)


def prism(n: int) -> PlaneGraph:
    top = list(range(n))
    bot = list(range(n, 2 * n))
    faces = [top, bot[::-1]]
    faces += [[top[i], bot[i], bot[(i + 1) % n], top[(i + 1) % n]] for i in range(n)]
    return from_faces(faces, outer=top)


def k4() -> PlaneGraph:
    return from_faces([[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]], outer=[0, 1, 2])


def octahedron() -> PlaneGraph:
    # equator 0..3, apexes 4 (inside) and 5 (outside)
    eq = [0, 1, 2, 3]
    faces = [[4, eq[i], eq[(i + 1) % 4]] for i in range(4)]
    faces += [[5, eq[(i + 1) % 4], eq[i]] for i in range(4)]
    return from_faces(faces, outer=[5, 1, 0])


def from_networkx(g: nx.Graph) -> PlaneGraph:
    ok, emb = nx.check_planarity(nx.convert_node_labels_to_integers(g, ordering="sorted"))
    assert ok
    rotation = {v: list(reversed(ns)) for v, ns in emb.get_data().items()}
    pg = PlaneGraph(rotation)
    outer = max((f for f in pg.faces if len(set(f.boundary)) == f.degree), key=lambda f: (f.degree, f.id))
    return pg.with_outer(outer.boundary)


def random_plane(seed: int, n: int, delete: float = 0.3, subdivide: int = 0) -> PlaneGraph:
    """Stacked triangulation on ``n`` vertices, thinned and subdivided."""
    rng = random.Random(seed)
    faces = [[0, 1, 2], [0, 2, 1]]
    for x in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [[a, b, x], [b, c, x], [c, a, x]]
    rot = {v: list(ns) for v, ns in from_faces(faces).rotation.items()}
    edges = sorted((u, v) for u in rot for v in rot[u] if u < v)
    rng.shuffle(edges)
    for u, v in edges[: int(delete * len(edges))]:
        if len(rot[u]) <= 2 or len(rot[v]) <= 2:
            continue
        saved = list(rot[u]), list(rot[v])
        rot[u].remove(v)
        rot[v].remove(u)
        if not PlaneGraph(rot).is_connected():
            rot[u], rot[v] = saved
    nxt = max(rot) + 1
    for _ in range(subdivide):
        u = rng.choice(sorted(rot))
        v = rng.choice(rot[u])
        rot[u][rot[u].index(v)] = nxt
        rot[v][rot[v].index(u)] = nxt
        rot[nxt] = [u, v]
        nxt += 1
    g = PlaneGraph(rot)
    simple = [f for f in g.faces if len(set(f.boundary)) == f.degree]
    outer = max(simple, key=lambda f: (f.degree, -f.id))
    return g.with_outer(outer.boundary)


def named_graphs() -> list:
    return [
        ("C5", cycle(5)),
        ("C9", cycle(9)),
        ("C12", cycle(12)),
        ("K4", k4()),
        ("W6", wheel(6)),
        ("W11", wheel(11)),
        ("Q3", prism(4)),
        ("prism7", prism(7)),
        ("octahedron", octahedron()),
        ("dodecahedron", from_networkx(nx.dodecahedral_graph())),
        ("icosahedron", from_networkx(nx.icosahedral_graph())),
        ("grid5x6", from_networkx(nx.grid_2d_graph(5, 6))),
    ]


def random_graphs() -> list:
    specs = [(1, 8, 0.2, 2), (2, 12, 0.3, 4), (3, 16, 0.35, 6), (4, 20, 0.4, 10), (5, 25, 0.3, 12),
             (6, 30, 0.4, 15), (7, 35, 0.35, 15), (8, 40, 0.3, 20), (9, 30, 0.5, 25), (10, 45, 0.3, 15)]
    return [(f"random-{s}", random_plane(s, n, d, k)) for s, n, d, k in specs]


def corpus() -> list:
    return named_graphs() + random_graphs()
