"""Hand-built plane graphs with known discharging outcomes.

Expected values are doubled charges, worked out by hand from the rule
tables and recorded here before running the code.
"""

from dpcolor.plane_graph import from_faces

from corpus import cycle


def c9_alone():
    return cycle(9)


C9_ALONE_FINAL = {"outer": 0, "vertices": 0, "inner_face": 0, "x2": 6}


def c9_with_inner_triangle():
    c = list(range(9))
    faces = [c, [9, 10, 11], [0, 1, 2, 3, 10, 9], [3, 4, 5, 6, 11, 10], [6, 7, 8, 0, 9, 11]]
    return from_faces(faces, outer=c)


# every element ends at 0: the triangle takes 2 from each hexagon, each
# hexagon is refunded 2 by the outer face, which also absorbs the 2-vertices
C9_TRIANGLE_FINAL = {"outer": 0, "all": 0, "outer_initial": 30, "x2": 0}


def heptagon_with_far_triangle():
    """Outer 7-cycle, a 9-face, a 7-face, an 8-face and one inner triangle."""
    c = list(range(7))
    faces = [c, [0, 1, 2, 3, 4, 11, 10, 8, 7], [4, 5, 13, 12, 9, 10, 11],
             [5, 6, 0, 7, 8, 9, 12, 13], [8, 9, 10]]
    return from_faces(faces, outer=c)


HEPTAGON_FINAL = {
    "outer": 16,
    "x2": 6,
    "vertices": {0: 0, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0, 7: -4, 8: 0, 9: 0, 10: 0, 11: -4, 12: -4, 13: -4},
    "faces": {(8, 9, 10): 0, 9: 0, 7: 0, 8: 0},
    # face degree -> (longest friendly path, bound2, gave2)
    "paths": {9: (7, 4, 4), 7: (5, 0, 0), 8: (6, 2, 2)},
}


def five_vertex_on_triangle_and_hexagons():
    """Internal 5-vertex 0 on one triangle and four internal 6-faces.

    The disc around 0 is wrapped in a band of 4-faces so that nothing near
    0 touches the outer cycle.
    """
    ring = list(range(1, 18))
    n = len(ring)
    faces = [[0, 1, 2]]
    for s in (2, 6, 10, 14):
        faces.append([0, s, s + 1, s + 2, s + 3, ring[(s + 3) % n]])
    outer = list(range(100, 100 + n))
    faces += [[ring[(i + 1) % n], ring[i], outer[i], outer[(i + 1) % n]] for i in range(n)]
    faces.append(outer[::-1])
    return from_faces(faces, outer=outer)


# plane graphs with no 4-, 5- or 6-cycles, triangles at distance >= 2 and a
# 7-cycle as the outer face; each has at most 14 vertices
def heptagon_theta():
    c = list(range(7))
    return from_faces([c, [0, 1, 2, 3, 10, 9, 8], [3, 4, 5, 6, 0, 8, 9, 10]], outer=c)


def heptagon_two_ears():
    c = list(range(7))
    faces = [c, [0, 7, 1], [3, 8, 4], [7, 9, 10, 8, 3, 2, 1], [0, 6, 5, 4, 8, 10, 9, 7]]
    return from_faces(faces, outer=c)


HEPTAGON_INSTANCES = [
    ("theta", heptagon_theta),
    ("far-triangle", heptagon_with_far_triangle),
    ("two-ears", heptagon_two_ears),
]
