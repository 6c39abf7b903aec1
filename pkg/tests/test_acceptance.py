"""End-to-end checks at full size, each reporting one PASS/FAIL line."""

import itertools
import random
import time

from corpus import corpus, cycle
from dpcolor.discharging import NO_45, NO_456, RULESETS, audit_nonnegativity, discharge, fkey, outer_audit, vkey
from dpcolor.dp_cover import build_cover, from_lists, is_dp_coloring, uniform_lists
from dpcolor.plane_graph import Graph
from dpcolor.reducibility import (
    brute_verify_reducible,
    check_near_2_degenerate,
    get_configuration,
    greedy_soundness,
    replay_identification_proof,
)
from dpcolor.solver import COLORABLE, COUNTEREXAMPLE, NOT_FOUND, UNSAT, certify_dp_k, certify_extension, solve
from fixtures import (
    C9_ALONE_FINAL,
    C9_TRIANGLE_FINAL,
    HEPTAGON_FINAL,
    HEPTAGON_INSTANCES,
    c9_alone,
    c9_with_inner_triangle,
    heptagon_with_far_triangle,
)
from oracles import naive_dp_colorable, naive_list_colorable


def test_charge_is_conserved_on_corpus(verdict):
    graphs = [(n, g) for n, g in corpus() if 5 <= len(g.vertices) <= 60]
    bad = []
    slowest = 0.0
    for name, g in graphs:
        t0 = time.perf_counter()
        for rules in RULESETS:
            led, tags = discharge(g, g.outer, rules)
            if sum(led.initial2.values()) != 0 or sum(led.charge2.values()) != 0:
                bad.append(f"{name}/{rules}: totals {sum(led.initial2.values())}, {sum(led.charge2.values())}")
            if any(not isinstance(c, int) for c in led.charge2.values()):
                bad.append(f"{name}/{rules}: non-integer doubled charge")
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if dt >= 1.0:
            bad.append(f"{name}: {dt:.2f}s")
    ok = len(graphs) >= 20 and not bad
    verdict("charge conservation and Euler total", ok,
            f"{len(graphs)} graphs, slowest {slowest:.3f}s" + (f"; {bad}" if bad else ""))


def test_dp_coloring_separates_from_list_coloring(verdict):
    t0 = time.perf_counter()
    g = cycle(4)
    res = certify_dp_k(g, 2)
    unsat = res.verdict == COUNTEREXAMPLE and solve(build_cover(g, uniform_lists(g, 2), res.counterexample)).status == UNSAT
    pairs = [frozenset(p) for p in itertools.combinations(range(1, 5), 2)]
    all_colorable = True
    count = 0
    for combo in itertools.product(pairs, repeat=4):
        lists = dict(zip(g.vertices, combo))
        sat = solve(build_cover(g, lists, from_lists(lists, g))).sat
        all_colorable &= sat and naive_list_colorable(g.vertices, g.edges, lists)
        count += 1
    dt = time.perf_counter() - t0
    verdict("C4: not DP-2-colorable, yet 2-choosable", unsat and all_colorable and count == 1296 and dt < 5,
            f"{count} list assignments, {dt:.2f}s")


def test_cycles_have_dp_chromatic_number_three(verdict):
    t0 = time.perf_counter()
    wrong = []
    for n in range(3, 9):
        three = certify_dp_k(cycle(n), 3)
        two = certify_dp_k(cycle(n), 2)
        if three.verdict != COLORABLE or three.examined != 6 ** n:
            wrong.append(f"C{n} k=3: {three.verdict}")
        if two.verdict != COUNTEREXAMPLE:
            wrong.append(f"C{n} k=2: {two.verdict}")
    dt = time.perf_counter() - t0
    verdict("C3..C8 are DP-3-colorable and not DP-2-colorable", not wrong and dt < 60,
            f"{dt:.1f}s" + (f"; {wrong}" if wrong else ""))


def test_greedy_extension_is_sound_on_ordered_configurations(verdict):
    t0 = time.perf_counter()
    names = ["twin-hexagons-shared-34-edge", "roofed-hexagon-pair",
             "heptagon-two-triangles-a", "heptagon-two-triangles-b"]
    details = []
    ok = True
    for name in names:
        cfg = get_configuration(name)
        inst = cfg.instance()
        degenerate = check_near_2_degenerate(inst.host, inst.inner, cfg.order, 3)
        run = greedy_soundness(cfg, 3)
        oracle = brute_verify_reducible(cfg, 3)
        good = degenerate and run.all_succeeded and run.pairs > 0 and oracle.reducible == run.all_succeeded
        ok &= good
        details.append(f"{name}: {run.successes}/{run.pairs}")
    dt = time.perf_counter() - t0
    verdict("near-2-degenerate orderings, greedy 100% and oracle agree", ok and dt < 600,
            f"{dt:.0f}s; " + ", ".join(details))


def test_identification_replays(verdict):
    names = ["hexagon-triangle-identification", "triangle-spokes-identification",
             "heptagon-twin-triangles-identification"]
    ok = True
    details = []
    for name in names:
        a = replay_identification_proof(name, seed=0)
        b = replay_identification_proof(name, seed=0)
        same = a.steps == b.steps and a.coloring == b.coloring and a.residual_sizes == b.residual_sizes
        ok &= a.ok and same and all(x["ok"] for x in a.bounds) and bool(a.bounds)
        details.append(f"{name}: {'ok' if a.ok else a.failed_step}")
    hep = replay_identification_proof("heptagon-twin-triangles-identification").residual_sizes
    spokes = replay_identification_proof("triangle-spokes-identification").residual_sizes
    ok &= hep["v4"] >= 2 and hep["v45"] >= 2
    ok &= spokes["yp"] == 3 and spokes["xp"] == 3
    verdict("identification replays meet their residual bounds", ok, "; ".join(details))


def test_heptagon_instances_extend_under_sampling(verdict):
    lines = []
    ok = True
    for name, make in HEPTAGON_INSTANCES:
        g = make()
        t0 = time.perf_counter()
        res = certify_extension(g, list(g.outer), 3, sample=10_000, seed=2024)
        dt = time.perf_counter() - t0
        good = res.verdict == NOT_FOUND and res.examined == 10_000 and len(g.vertices) <= 14 and dt < 600
        ok &= good
        lines.append(f"{name}: {res.verdict}, {res.extensions_checked} extensions, {dt:.1f}s")
    verdict("7-cycle precolorings extend on hypothesis instances", ok, "; ".join(lines))


def test_discharging_matches_hand_values(verdict):
    problems = []

    g = c9_alone()
    led, tags = discharge(g, g.outer, NO_45)
    audit = outer_audit(led, g, g.outer, tags, NO_45)
    if any(c != C9_ALONE_FINAL["vertices"] for c in (led.charge2[vkey(v)] for v in g.vertices)):
        problems.append("C9 vertices")
    if led.charge2[fkey(tags.outer_id)] != C9_ALONE_FINAL["outer"] or audit.x2 != C9_ALONE_FINAL["x2"]:
        problems.append("C9 outer")
    if any(led.charge2[fkey(f)] != C9_ALONE_FINAL["inner_face"] for f in tags.faces):
        problems.append("C9 inner face")
    if not audit.identity_holds:
        problems.append("C9 identity")

    g = c9_with_inner_triangle()
    led, tags = discharge(g, g.outer, NO_45)
    audit = outer_audit(led, g, g.outer, tags, NO_45)
    if led.initial2[fkey(tags.outer_id)] != C9_TRIANGLE_FINAL["outer_initial"]:
        problems.append("C9+triangle initial outer")
    if any(c != C9_TRIANGLE_FINAL["all"] for c in led.charge2.values()):
        problems.append("C9+triangle finals")
    if audit.x2 != C9_TRIANGLE_FINAL["x2"] or not audit.identity_holds:
        problems.append("C9+triangle audit")

    g = heptagon_with_far_triangle()
    led, tags = discharge(g, g.outer, NO_456)
    audit = outer_audit(led, g, g.outer, tags, NO_456)
    if led.charge2[fkey(tags.outer_id)] != HEPTAGON_FINAL["outer"]:
        problems.append("heptagon outer")
    if any(led.charge2[vkey(v)] != c for v, c in HEPTAGON_FINAL["vertices"].items()):
        problems.append("heptagon vertices")
    if any(led.charge2[fkey(f)] != 0 for f in tags.faces):
        problems.append("heptagon faces")
    paths = {p.degree: (p.path_vertices, p.bound2, p.gave2) for p in audit.friendly_paths}
    if paths != HEPTAGON_FINAL["paths"] or not audit.paths_ok:
        problems.append(f"heptagon paths {paths}")
    if audit.x2 != HEPTAGON_FINAL["x2"] or not audit.identity_holds:
        problems.append("heptagon audit")
    audit_nonnegativity(led, tags)

    verdict("discharging final charges match hand computation", not problems, ", ".join(problems))


def test_solve_agrees_with_product_enumeration(verdict):
    rng = random.Random(20240611)
    disagreements = 0
    sat_count = 0
    for _ in range(200):
        n = rng.randint(1, 8)
        k = rng.randint(1, 3)
        edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.45]
        g = Graph.from_edges(edges, range(n))
        lists = {v: frozenset(rng.sample(range(1, 4), rng.randint(1, k))) for v in g.vertices}
        m = {}
        for u, v in g.edges:
            a, b = sorted(lists[u]), sorted(lists[v])
            rng.shuffle(b)
            m[(u, v)] = frozenset(p for p in zip(a, b) if rng.random() < 0.85)
        cov = build_cover(g, lists, m)
        res = solve(cov)
        expect = naive_dp_colorable(g.vertices, g.edges, lists, m)
        if res.sat != expect or (res.sat and not is_dp_coloring(cov, res.witness)):
            disagreements += 1
        sat_count += expect
    verdict("solver agrees with naive enumeration", disagreements == 0,
            f"200 instances, {sat_count} colorable, {disagreements} disagreements")
