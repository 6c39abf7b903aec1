import pytest

from corpus import corpus, cycle, k4, wheel
from dpcolor.discharging import (
    FIXED_AMOUNTS,
    NO_45,
    NO_456,
    RULESETS,
    ChargeLedger,
    audit_nonnegativity,
    compute_tags,
    discharge,
    fkey,
    initial_charges,
    outer_audit,
    vkey,
)
from dpcolor.errors import DischargingError
from dpcolor.plane_graph import from_faces
from fixtures import (
    C9_ALONE_FINAL,
    C9_TRIANGLE_FINAL,
    HEPTAGON_FINAL,
    c9_alone,
    c9_with_inner_triangle,
    five_vertex_on_triangle_and_hexagons,
    heptagon_with_far_triangle,
)

CORPUS = corpus()


def face_id(g, boundary):
    key = frozenset(boundary)
    return next(f.id for f in g.faces if f.vertex_set == key and f.degree == len(boundary))


def test_initial_charges_examples():
    g = c9_with_inner_triangle()
    led = initial_charges(g, g.outer)
    assert led.charge2[vkey(0)] == 0 and led.charge2[vkey(1)] == -4
    assert led.charge2[fkey(face_id(g, [9, 10, 11]))] == -6
    assert led.charge2[fkey(face_id(g, [0, 1, 2, 3, 10, 9]))] == 0
    assert led.charge2[fkey(g.outer_face().id)] == 30
    assert sum(led.charge2.values()) == 0


def test_outer_must_be_a_face():
    g = wheel(6)
    with pytest.raises(DischargingError) as e:
        initial_charges(g, [0, 1, 2, 3])
    assert e.value.code == "not-outer"


def test_ledger_conserves_and_flips_negative_amounts():
    led = ChargeLedger({"a": 2, "b": -2})
    led.transfer("a", "b", -3, "r", 1)
    assert led.charge2 == {"a": 5, "b": -5}
    assert led.log[0].source == "b" and led.log[0].amount2 == 3
    with pytest.raises(DischargingError):
        led.transfer("a", "zzz", 1, "r", 1)


@pytest.mark.parametrize("rules", RULESETS)
@pytest.mark.parametrize("name,g", CORPUS, ids=[n for n, _ in CORPUS])
def test_conservation_on_corpus(name, g, rules):
    led, tags = discharge(g, g.outer, rules)
    assert sum(led.initial2.values()) == 0
    assert sum(led.charge2.values()) == 0
    assert all(t.amount2 > 0 for t in led.log)
    assert all(t.amount2 in FIXED_AMOUNTS for t in led.log if "rest" not in t.rule and "need" not in t.rule
               and "collects" not in t.rule)
    outer_audit(led, g, g.outer, tags, rules)
    audit_nonnegativity(led, tags)


@pytest.mark.parametrize("name,g", CORPUS[:12], ids=[n for n, _ in CORPUS[:12]])
def test_tags_are_deterministic(name, g):
    assert compute_tags(g, g.outer) == compute_tags(g, g.outer)


def test_light_and_in_f_tags():
    g = c9_with_inner_triangle()
    tags = compute_tags(g, g.outer)
    assert tags.light[9] and not tags.light[0]
    hexagon = face_id(g, [0, 1, 2, 3, 10, 9])
    assert tags.in_f[hexagon] and not tags.internal_face[hexagon]
    assert tags.internal_face[face_id(g, [9, 10, 11])]


def test_internal_three_vertex_ends_at_zero():
    g = c9_with_inner_triangle()
    for rules in RULESETS:
        led, _ = discharge(g, g.outer, rules)
        assert all(led.charge2[vkey(v)] == 0 for v in (9, 10, 11))


def test_five_vertex_keeps_one_half():
    g = five_vertex_on_triangle_and_hexagons()
    led, tags = discharge(g, g.outer, NO_45)
    assert tags.internal_vertex[0] and tags.degree[0] == 5
    assert led.charge2[vkey(0)] == 1
    assert led.sent(source=vkey(0), rule="vertex-to-hexagon") == 4
    assert led.sent(source=vkey(0), rule="vertex-to-incident-triangle") == 3


def test_c9_alone():
    g = c9_alone()
    led, tags = discharge(g, g.outer, NO_45)
    audit = outer_audit(led, g, g.outer, tags, NO_45)
    assert all(c == 0 for c in led.charge2.values())
    assert audit.f3 == audit.f_special == audit.e_prime == 0
    assert audit.x2 == C9_ALONE_FINAL["x2"] and audit.identity_holds
    rep = audit_nonnegativity(led, tags)
    assert rep.negatives == [] and not rep.outer_positive


def test_c9_with_inner_triangle():
    g = c9_with_inner_triangle()
    led, tags = discharge(g, g.outer, NO_45)
    assert led.initial2[fkey(tags.outer_id)] == C9_TRIANGLE_FINAL["outer_initial"]
    assert all(c == 0 for c in led.charge2.values())
    assert len(tags.special6) == 3
    audit = outer_audit(led, g, g.outer, tags, NO_45)
    assert audit.x2 == C9_TRIANGLE_FINAL["x2"] and audit.identity_holds


def test_heptagon_instance_and_path_bounds():
    g = heptagon_with_far_triangle()
    led, tags = discharge(g, g.outer, NO_456)
    assert led.charge2[fkey(tags.outer_id)] == HEPTAGON_FINAL["outer"]
    for v, c in HEPTAGON_FINAL["vertices"].items():
        assert led.charge2[vkey(v)] == c
    assert all(c == 0 for e, c in led.charge2.items() if e[0] == "f" and e[1] != tags.outer_id)
    audit = outer_audit(led, g, g.outer, tags, NO_456)
    assert audit.x2 == HEPTAGON_FINAL["x2"] and audit.identity_holds and audit.paths_ok
    got = {p.degree: (p.path_vertices, p.bound2, p.gave2) for p in audit.friendly_paths}
    assert got == HEPTAGON_FINAL["paths"]


def test_need_split_for_all_three_triangle():
    # a (3,3,3) triangle inside three 9-faces receives 1 from each
    g = heptagon_with_far_triangle()
    led, tags = discharge(g, g.outer, NO_456)
    tri = fkey(face_id(g, [8, 9, 10]))
    gifts = [t for t in led.log if t.target == tri]
    assert sorted(t.amount2 for t in gifts) == [2, 2, 2]


def test_need_split_for_triangle_with_one_big_vertex():
    # the chord 1-8 raises the triangle vertex 8 to degree 4
    c = list(range(7))
    faces = [c, [1, 2, 3, 4, 11, 10, 8], [8, 7, 0, 1], [4, 5, 13, 12, 9, 10, 11],
             [5, 6, 0, 7, 8, 9, 12, 13], [8, 9, 10]]
    g = from_faces(faces, outer=c)
    led, tags = discharge(g, g.outer, NO_456)
    tri = fkey(face_id(g, [8, 9, 10]))
    assert tags.degree[8] == 4
    gifts = sorted(t.amount2 for t in led.log if t.target == tri)
    assert gifts == [1, 1, 1, 3]
    assert led.charge2[tri] == 0


def test_k4_runs_with_nothing_negative():
    g = k4()
    for rules in RULESETS:
        led, tags = discharge(g, g.outer, rules)
        rep = audit_nonnegativity(led, tags)
        assert rep.total2 == 0 and not rep.clean


def test_c0_pays_intersecting_triangles():
    g = wheel(7)
    led, tags = discharge(g, g.outer, NO_45)
    audit = outer_audit(led, g, g.outer, tags, NO_45)
    assert audit.f3 == 7
    assert led.sent(source=fkey(tags.outer_id), rule="outer-to-intersecting-triangle") == 6 * 7


def test_negatives_are_annotated():
    g = cycle(5)
    led, tags = discharge(g, g.outer, NO_45)
    rep = audit_nonnegativity(led, tags)
    for item in rep.negatives:
        assert {"element", "charge2", "degree", "internal"} <= set(item)
