"""Reducible configurations: ordering check, greedy extension, oracle and replays.

A configuration is a small pattern graph ``H`` together with the exact host
degree of each of its vertices.  :meth:`Configuration.instance` turns the
degree slack into fresh pendant boundary vertices; the boundary is the
precolored outside world.  Giving every outside attachment its own boundary
vertex is the most general choice: shared outside neighbours or edges among
them only restrict the boundary colorings.

Identification configurations carry a whole host (as a face list) and a
replay recipe instead of an ordering.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dp_cover import (
    build_cover,
    coloring_problem,
    is_dp_coloring,
    is_straight,
    is_valid_partial,
    oriented,
    residual_lists,
    straighten,
    undo_relabel,
    uniform_lists,
)
from .errors import DPColorError, ReducibilityError
from .plane_graph import (
    Graph,
    PlaneGraph,
    canonical_cycle,
    check_cycle,
    cycles_of_length,
    edge_key,
    from_faces,
    identify,
    spanning_forest,
)
from .solver import PermutationFamily, solve, valid_colorings

SCHEMA = "dpcolor-configuration/1"
MAX_INNER = 12
ORACLE_LIMIT = 2_000_000


@dataclass(frozen=True)
class Configuration:
    name: str
    graph: Graph
    boundary: frozenset
    degree: Mapping
    internal: Mapping
    faces: tuple = ()
    order: tuple | None = None
    outer: tuple | None = None
    replay: Mapping | None = None
    aliases: tuple = ()
    description: str = ""

    @property
    def inner(self) -> tuple:
        return tuple(v for v in self.graph.vertices if v not in self.boundary)

    def plane(self) -> PlaneGraph:
        """The pattern as a plane graph; needs a complete face list."""
        if not self.faces:
            raise ReducibilityError(f"{self.name} carries no faces", "no-embedding")
        return from_faces(self.faces, self.outer)

    def instance(self) -> "Instance":
        """Host graph with every missing incidence of an inner vertex realised
        as a fresh boundary vertex."""
        adj = {v: set(self.graph.neighbors(v)) for v in self.graph.vertices}
        boundary = set(self.boundary)
        ints = all(isinstance(v, int) for v in adj)
        fresh = max(adj, default=-1) + 1 if ints else None
        for v in self.inner:
            need = self.degree.get(v, len(adj[v])) - len(self.graph.neighbors(v))
            for i in range(1, need + 1):
                if ints:
                    w, fresh = fresh, fresh + 1
                else:
                    w = f"{v}~{i}"
                adj[w] = {v}
                adj[v].add(w)
                boundary.add(w)
        host = Graph(adj)
        inner = tuple(v for v in host.vertices if v not in boundary)
        return Instance(host, inner, tuple(sorted(boundary)))


@dataclass(frozen=True)
class Instance:
    host: Graph
    inner: tuple
    boundary: tuple


def configuration_from_dict(data: Mapping) -> Configuration:
    if data.get("schema", SCHEMA) != SCHEMA:
        raise ReducibilityError(f"unsupported configuration schema {data.get('schema')!r}", "schema")
    name = data.get("name")
    if not name:
        raise ReducibilityError("configuration has no name", "schema")
    faces = tuple(tuple(f) for f in data.get("faces", ()))
    edges = {edge_key(*e) for e in data.get("edges", ())}
    for f in faces:
        for i, u in enumerate(f):
            edges.add(edge_key(u, f[(i + 1) % len(f)]))
    verts = set(data.get("vertices", {}))
    graph = Graph.from_edges(sorted(edges), verts)
    for f in faces:
        check_cycle(graph, f)
    attrs = data.get("vertices", {})
    degree = {v: int(s["degree"]) for v, s in attrs.items() if "degree" in s}
    internal = {v: bool(s.get("internal", True)) for v, s in attrs.items()}
    outer = tuple(data["outer"]) if data.get("outer") is not None else None
    b = data.get("boundary", [])
    if b == "rest":
        boundary = frozenset(v for v in graph.vertices if v not in attrs)
    elif b == "outer":
        boundary = frozenset(outer or ())
    else:
        boundary = frozenset(b)
    if not boundary <= set(graph.vertices):
        raise ReducibilityError(f"{name}: boundary is not a subset of the pattern", "schema")
    for v, d in degree.items():
        if v not in graph:
            raise ReducibilityError(f"{name}: constrained vertex {v!r} is not in the pattern", "schema")
        if d < graph.degree(v):
            raise ReducibilityError(f"{name}: degree of {v!r} below its pattern degree", "schema")
    if graph.vertices and not graph.is_connected():
        raise ReducibilityError(f"{name}: pattern is not connected", "schema")
    order = tuple(data["order"]) if data.get("order") else None
    cfg = Configuration(
        name=name,
        graph=graph,
        boundary=boundary,
        degree=degree,
        internal=internal,
        faces=faces,
        order=order,
        outer=outer,
        replay=data.get("replay"),
        aliases=tuple(data.get("aliases", ())),
        description=data.get("description", ""),
    )
    if order is not None and sorted(order) != sorted(cfg.instance().inner):
        raise ReducibilityError(f"{name}: ordering is not a permutation of the inner vertices", "order")
    return cfg


def load_configuration(path) -> Configuration:
    with open(path) as fh:
        return configuration_from_dict(json.load(fh))


def _data_dir(kind: str):
    return resources.files("dpcolor") / "data" / "v1" / kind


def _load_dir(kind: str) -> tuple:
    out = []
    for entry in sorted(_data_dir(kind).iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            out.append(configuration_from_dict(json.loads(entry.read_text())))
    return tuple(out)


@lru_cache(maxsize=None)
def builtin_configurations() -> dict:
    """Shipped configurations by name; ``.order`` is None for the ones whose
    reducibility argument goes through identification."""
    return {c.name: c for c in _load_dir("configurations")}


def get_configuration(name: str) -> Configuration:
    table = builtin_configurations()
    if name in table:
        return table[name]
    for cfg in table.values():
        if name in cfg.aliases:
            return cfg
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        return load_configuration(path)
    raise ReducibilityError(f"unknown configuration {name!r}", "unknown-configuration")


@lru_cache(maxsize=None)
def bad_nine_cycle_templates() -> tuple:
    out = []
    for cfg in _load_dir("templates"):
        out.append(_Template(cfg.name, cfg.plane(), cfg.outer))
    return tuple(out)


@dataclass(frozen=True)
class _Template:
    name: str
    graph: PlaneGraph
    outer: tuple


# ---------------------------------------------------------------- ordering


def ordering_problems(g: Graph, h: Iterable, order: Sequence, k: int) -> list[str]:
    """Conditions of the near-2-degenerate ordering that fail, as messages."""
    h = set(h)
    order = list(order)
    if sorted(order, key=repr) != sorted(h, key=repr) or len(set(order)) != len(order):
        raise ReducibilityError("order is not a permutation of the subgraph's vertices", "order")
    if len(order) < 2:
        return ["ordering needs at least two vertices"]
    problems = []
    first, last = order[0], order[-1]
    if not g.has_edge(first, last):
        problems.append(f"first vertex {first!r} is not adjacent to last vertex {last!r}")
    outside_first = [w for w in g.neighbors(first) if w not in h]
    if outside_first:
        problems.append(f"first vertex {first!r} has neighbours outside the subgraph")
    if g.degree(last) > k:
        problems.append(f"last vertex {last!r} has degree {g.degree(last)} > {k}")
    if not any(w not in h for w in g.neighbors(last)):
        problems.append(f"last vertex {last!r} has no neighbour outside the subgraph")
    seen = {first}
    for v in order[1:-1]:
        back = sum(1 for w in g.neighbors(v) if w in seen or w not in h)
        if back > k - 1:
            problems.append(f"vertex {v!r} sees {back} > {k - 1} earlier or outside neighbours")
        seen.add(v)
    return problems


def check_near_2_degenerate(g: Graph, h: Iterable, order: Sequence, k: int) -> bool:
    return not ordering_problems(g, h, order, k)


class NearDegenerateExtender:
    """Greedy extension along a validated near-2-degenerate ordering.

    The first vertex is colored so that its constraint on the last vertex
    repeats the constraint coming from one of the last vertex's outside
    neighbours (or vanishes); the middle vertices then always have a free
    color, and so does the last vertex.
    """

    def __init__(self, g: Graph, h: Iterable, order: Sequence, k: int):
        h = frozenset(h)
        problems = ordering_problems(g, h, order, k)
        if problems:
            raise ReducibilityError("ordering is not near-2-degenerate: " + "; ".join(problems), "order")
        self.g, self.h, self.order, self.k = g, h, tuple(order), k
        self.first, self.last = self.order[0], self.order[-1]
        self.outside = tuple(v for v in g.vertices if v not in h)
        self.last_outside = tuple(sorted(w for w in g.neighbors(self.last) if w not in h))
        self.nbrs = {v: tuple(sorted(g.neighbors(v))) for v in self.order}

    def extend(self, phi: Mapping, m: Mapping, lists: Mapping | None = None, check: bool = True) -> dict:
        lists = lists if lists is not None else uniform_lists(self.g, self.k)
        if check:
            if set(phi) != set(self.outside):
                raise ReducibilityError("phi must color exactly the vertices outside the subgraph", "phi")
            cov = build_cover(self.g, lists, m)
            if not is_valid_partial(cov, phi):
                raise ReducibilityError(f"phi is not a valid coloring outside the subgraph: "
                                        f"{coloring_problem(cov, phi)}", "phi")
        arrow = _arrows(m)
        col = dict(phi)

        def forbidden(v):
            out = set()
            for w in self.nbrs[v]:
                c = col.get(w)
                if c is not None:
                    b = arrow.get((w, v), {}).get(c)
                    if b is not None:
                        out.add(b)
            return out

        target = None
        for w in self.last_outside:
            b = arrow.get((w, self.last), {}).get(col[w])
            if b is not None:
                target = b
                break
        to_last = arrow.get((self.first, self.last), {})
        first_colors = sorted(lists[self.first])
        choice = None
        if target is not None:
            for a in first_colors:
                if to_last.get(a) == target:
                    choice = a
                    break
            if choice is None:
                free = [a for a in first_colors if a not in to_last]
                choice = free[0] if free else None
        if choice is None:
            choice = first_colors[0]
        col[self.first] = choice
        for v in self.order[1:]:
            avail = lists[v] - forbidden(v)
            if not avail:
                raise ReducibilityError(f"ordering hypothesis violated: no free color at {v!r}", "hypothesis-violated")
            col[v] = min(avail)
        return col


def _arrows(m: Mapping) -> dict:
    """``arrow[(u, v)][c_u] = c_v`` for every matched pair, both directions."""
    out: dict = {}
    for (u, v), pairs in m.items():
        fw = out.setdefault((u, v), {})
        bw = out.setdefault((v, u), {})
        for a, b in pairs:
            fw[a] = b
            bw[b] = a
    return out


def greedy_extend(g: Graph, h: Iterable, order: Sequence, k: int, phi: Mapping, m: Mapping,
                  lists: Mapping | None = None) -> dict:
    return NearDegenerateExtender(g, h, order, k).extend(phi, m, lists)


# ---------------------------------------------------------------- enumeration


def _assignment_choices(family: PermutationFamily, reduce: bool):
    """Permutation-index tuples over ``family.edges``; with ``reduce`` the
    edges of a spanning forest are fixed to the identity (index 0)."""
    tree = set(spanning_forest(family.g)) if reduce else set()
    free = [i for i, e in enumerate(family.edges) if e not in tree]
    n_perm = len(family.perms)
    base = [0] * len(family.edges)
    for combo in itertools.product(range(n_perm), repeat=len(free)):
        for i, p in zip(free, combo):
            base[i] = p
        yield base


def _count_assignments(family: PermutationFamily, reduce: bool) -> int:
    tree = set(spanning_forest(family.g)) if reduce else set()
    return len(family.perms) ** sum(1 for e in family.edges if e not in tree)


@dataclass
class OracleVerdict:
    reducible: bool
    assignments: int
    pairs: int
    searched: int
    failure: dict | None = None

    def __bool__(self) -> bool:
        return self.reducible


def _guard_size(cfg: Configuration, inst: Instance, family: PermutationFamily, reduce: bool, limit: int) -> int:
    if len(inst.inner) > MAX_INNER:
        raise ReducibilityError(f"{cfg.name}: {len(inst.inner)} inner vertices exceed the oracle bound {MAX_INNER}",
                                "size-guard")
    total = _count_assignments(family, reduce)
    if total > limit:
        raise ReducibilityError(f"{cfg.name}: {total} matching assignments exceed the oracle limit {limit}",
                                "size-guard")
    return total


def brute_verify_reducible(cfg: Configuration, k: int = 3, reduce: bool = True,
                           limit: int = ORACLE_LIMIT) -> OracleVerdict:
    """Exhaustive oracle: every perfect matching assignment (lists {1..k})
    and every valid boundary coloring extends to the inner vertices.

    With ``reduce`` the matchings on a spanning forest of the host are fixed
    to the identity; every assignment is a per-vertex color renaming of one
    of these, and renaming permutes boundary colorings, so nothing is lost.
    """
    inst = cfg.instance()
    family = PermutationFamily(inst.host, k)
    total = _guard_size(cfg, inst, family, reduce, limit)
    kernel = family.kernel
    bidx = [kernel.index[b] for b in inst.boundary]
    bset = set(bidx)
    cross = [(i, slot) for i in bidx for slot in kernel.conf[i] if slot[0] not in bset]
    inside = [family.edge_checks[e][0] for e, (i, su, _) in enumerate(family.slots)
              if i not in bset and su[0] not in bset]
    pairs = searched = 0
    stats = [0]
    for choice in _assignment_choices(family, reduce):
        family.load(choice)
        witness = None
        for bc in valid_colorings(family, bidx):
            pairs += 1
            if witness is not None:
                for i, a in zip(bidx, bc):
                    witness[i] = a
                if kernel.satisfies(witness, cross):
                    continue
            searched += 1
            got = kernel.solve_indexed(dict(zip(bidx, bc)), stats)
            if got is None:
                failure = {
                    "matchings": family.matchings(choice),
                    "boundary_coloring": {inst.boundary[p]: a + 1 for p, a in enumerate(bc)},
                }
                return OracleVerdict(False, total, pairs, searched, failure)
            witness = got
            assert kernel.satisfies(witness, inside)
    return OracleVerdict(True, total, pairs, searched)


@dataclass
class GreedyRun:
    ordering_valid: bool
    problems: list
    assignments: int = 0
    pairs: int = 0
    successes: int = 0
    failures: int = 0
    first_failure: dict | None = None

    @property
    def all_succeeded(self) -> bool:
        return self.ordering_valid and self.failures == 0 and self.pairs > 0


def greedy_soundness(cfg: Configuration, k: int = 3, reduce: bool = True, limit: int = ORACLE_LIMIT) -> GreedyRun:
    """Run the greedy extension on every (assignment, boundary coloring) pair
    and validate each produced coloring independently."""
    if cfg.order is None:
        raise ReducibilityError(f"{cfg.name} carries no ordering", "no-ordering")
    inst = cfg.instance()
    problems = ordering_problems(inst.host, inst.inner, cfg.order, k)
    run = GreedyRun(not problems, problems)
    if problems:
        return run
    family = PermutationFamily(inst.host, k)
    run.assignments = _guard_size(cfg, inst, family, reduce, limit)
    ext = NearDegenerateExtender(inst.host, inst.inner, cfg.order, k)
    lists = uniform_lists(inst.host, k)
    boundary = inst.boundary
    bidx = [family.kernel.index[b] for b in boundary]
    for choice in _assignment_choices(family, reduce):
        family.load(choice)
        m = family.matchings(choice)
        cov = build_cover(inst.host, lists, m)
        for bc in valid_colorings(family, bidx):
            run.pairs += 1
            phi = {b: a + 1 for b, a in zip(boundary, bc)}
            try:
                col = ext.extend(phi, m, lists, check=False)
                ok = is_dp_coloring(cov, col) and all(col[b] == phi[b] for b in boundary)
            except ReducibilityError:
                ok = False
            if ok:
                run.successes += 1
            else:
                run.failures += 1
                if run.first_failure is None:
                    run.first_failure = {"matchings": m, "boundary_coloring": phi}
    return run


# ---------------------------------------------------------------- replays


@dataclass
class ReplayReport:
    name: str
    seed: int
    ok: bool = False
    failed_step: str | None = None
    steps: list = field(default_factory=list)
    residual_sizes: dict = field(default_factory=dict)
    bounds: list = field(default_factory=list)
    new_short_cycles: dict = field(default_factory=dict)
    coloring: dict | None = None

    def log(self, step: str, **detail) -> None:
        self.steps.append({"step": step, **detail})

    def fail(self, step: str, reason: str) -> "ReplayReport":
        self.failed_step = step
        self.log(step, ok=False, reason=reason)
        return self


def random_perfect_matchings(g: Graph, k: int, rng: random.Random) -> dict:
    out = {}
    for u, v in g.edges:
        perm = list(range(1, k + 1))
        rng.shuffle(perm)
        out[(u, v)] = frozenset(zip(range(1, k + 1), perm))
    return out


def _bound_ok(size: int, op: str, value: int) -> bool:
    if op == ">=":
        return size >= value
    if op == "==":
        return size == value
    raise ReducibilityError(f"unknown bound operator {op!r}", "schema")


def replay_identification_proof(name: str, seed: int = 0, k: int = 3) -> ReplayReport:
    """Run an identification argument on its shipped host.

    Steps: straighten a tree of edges, delete the reducible set, identify
    the two named vertices, color the quotient, pull the coloring back,
    measure the residual lists and finish in the recorded order.
    """
    cfg = get_configuration(name)
    recipe = cfg.replay
    if recipe is None:
        raise ReducibilityError(f"{cfg.name} has no identification replay", "no-replay")
    report = ReplayReport(cfg.name, seed)
    try:
        host = cfg.plane()
    except DPColorError as exc:
        return report.fail("build-host", str(exc))
    for v, d in cfg.degree.items():
        if host.degree(v) != d:
            return report.fail("build-host", f"degree of {v!r} is {host.degree(v)}, expected {d}")
    report.log("build-host", ok=True, vertices=len(host.vertices), edges=len(host.edges))

    rng = random.Random(seed)
    lists = uniform_lists(host, k)
    m = random_perfect_matchings(host, k, rng)
    tree = [tuple(e) for e in recipe["straighten"]]
    try:
        s_lists, s_m, relabel = straighten(host, lists, m, tree, roots=[recipe["root"]])
    except DPColorError as exc:
        return report.fail("straighten", str(exc))
    if not all(is_straight(s_m, u, v) for u, v in tree):
        return report.fail("straighten", "an edge of the tree is not straight")
    renamed = sorted((v for v in host.vertices if any(a != b for a, b in relabel[v].items())), key=str)
    report.log("straighten", ok=True, edges=[list(e) for e in tree], renamed=renamed)

    removed = list(recipe["remove"])
    keep, drop = recipe["identify"]
    rest = host.remove_vertices(removed)
    try:
        quotient = identify(rest, keep, drop)
    except DPColorError as exc:
        return report.fail("identify", str(exc))
    report.log("identify", ok=True, removed=removed, merged=[keep, drop])

    lo, hi = recipe.get("no_new_cycles", (3, 5))
    for length in range(lo, hi + 1):
        before = {canonical_cycle(c) for c in cycles_of_length(rest, length)}
        new = [c for c in cycles_of_length(quotient, length) if canonical_cycle(c) not in before]
        report.new_short_cycles[length] = len(new)
    if any(report.new_short_cycles.values()):
        return report.fail("new-cycles", f"identification created short cycles: {report.new_short_cycles}")
    report.log("new-cycles", ok=True, lengths=[lo, hi])

    q_lists = {v: s_lists[v] for v in quotient.vertices}
    dropped_nbrs = rest.neighbors(drop)

    def source(x, other):
        return drop if x == keep and other in dropped_nbrs else x

    q_m = {(u, v): oriented(s_m, source(u, v), source(v, u)) for u, v in quotient.edges}
    q_cov = build_cover(quotient, q_lists, q_m)
    result = solve(q_cov)
    if not result.sat:
        return report.fail("solve-quotient", "the quotient has no coloring")
    report.log("solve-quotient", ok=True, nodes=result.nodes)

    phi = dict(result.witness)
    phi[drop] = phi[keep]
    cov = build_cover(host, s_lists, s_m)
    if not is_valid_partial(cov, phi):
        return report.fail("pull-back", f"pulled-back coloring is invalid: {coloring_problem(cov, phi)}")
    report.log("pull-back", ok=True)

    residual = residual_lists(cov, phi)
    report.residual_sizes = {v: len(residual[v]) for v in removed}
    all_ok = True
    for v, (op, value) in recipe.get("bounds", {}).items():
        ok = _bound_ok(report.residual_sizes[v], op, value)
        all_ok &= ok
        report.bounds.append({"vertex": v, "size": report.residual_sizes[v], "op": op, "value": value, "ok": ok})
    if not all_ok:
        return report.fail("residual", "a residual list is smaller than its bound")
    report.log("residual", ok=True, sizes=report.residual_sizes)

    col = dict(phi)
    for step in recipe["completion"]:
        kind, v = step[0], step[1]
        avail = s_lists[v] - cov.forbidden(v, col)
        if kind == "proper":
            if not avail:
                return report.fail("complete", f"no free color at {v!r}")
            col[v] = min(avail)
        elif kind == "copy":
            c = col[step[2]]
            if c not in avail:
                return report.fail("complete", f"cannot give {v!r} the color of {step[2]!r}")
            col[v] = c
        else:
            raise ReducibilityError(f"unknown completion step {kind!r}", "schema")
    report.log("complete", ok=True, order=[list(s) for s in recipe["completion"]])

    if not is_dp_coloring(cov, col):
        return report.fail("verify", f"straightened coloring invalid: {coloring_problem(cov, col)}")
    original = undo_relabel(col, relabel)
    if not is_dp_coloring(build_cover(host, lists, m), original):
        return report.fail("verify", "coloring invalid in the original labels")
    report.log("verify", ok=True)
    report.coloring = original
    report.ok = True
    return report
