"""Exact DP-coloring decisions.

The search is plain chronological backtracking with forward checking; the
next vertex is always one with the fewest remaining colors (ties broken by
vertex order), and colors are tried in increasing order, so every run is
deterministic.  Domains are bitmasks over each vertex's sorted list.

Certification fixes every list to ``{1..k}`` and enumerates perfect
matchings only.  Both reductions lose nothing: any k-list instance is a
per-vertex renaming of one with lists ``{1..k}``, and a partial matching can
be completed to a perfect one, which only adds cover edges and so can only
remove colorings.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .dp_cover import CoverGraph, build_cover, oriented, uniform_lists
from .errors import SolverError
from .plane_graph import Graph, check_cycle, spanning_forest

SAT = "SAT"
UNSAT = "UNSAT"
COLORABLE = "dp-k-colorable"
COUNTEREXAMPLE = "counterexample"
NOT_FOUND = "no-counterexample-in-samples"

EXHAUSTIVE_LIMIT = 5_000_000


@dataclass
class SolveResult:
    status: str
    witness: dict | None
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def sat(self) -> bool:
        return self.status == SAT


@dataclass
class CertifyResult:
    verdict: str
    counterexample: dict | None = None
    precoloring: dict | None = None
    examined: int = 0
    mode: str = "exhaustive"
    extensions_checked: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict == COLORABLE


class SearchKernel:
    """Cover graph compiled to index/bitmask form for the backtracking search.

    ``conf[i]`` lists ``[j, masks]`` for every neighbour ``j`` of vertex
    ``i``; ``masks[a]`` is the set of colors of ``j`` matched to color index
    ``a`` of ``i``.
    """

    def __init__(self, vertices: Sequence, colors: Sequence[Sequence[int]], neighbor_lists):
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.n = len(self.vertices)
        self.colors = [tuple(c) for c in colors]
        self.color_index = [{c: a for a, c in enumerate(cs)} for cs in self.colors]
        self.full = [(1 << len(cs)) - 1 for cs in self.colors]
        self.conf = [[[j, None] for j in ns] for ns in neighbor_lists]

    @classmethod
    def from_cover(cls, cov: CoverGraph) -> "SearchKernel":
        verts = cov.graph.vertices
        index = {v: i for i, v in enumerate(verts)}
        colors = [sorted(cov.lists[v]) for v in verts]
        nbrs = [[index[w] for w in sorted(cov.graph.neighbors(v))] for v in verts]
        kernel = cls(verts, colors, nbrs)
        for i, v in enumerate(verts):
            ci = kernel.color_index[i]
            for slot in kernel.conf[i]:
                j = slot[0]
                cj = kernel.color_index[j]
                masks = [0] * len(colors[i])
                for a, b in oriented(cov.matchings, v, verts[j]):
                    masks[ci[a]] |= 1 << cj[b]
                slot[1] = tuple(masks)
        return kernel

    def initial(self, pinned: dict):
        """Domains and assignment with ``pinned`` (index -> color index) applied;
        None when pinning already empties a domain."""
        dom = list(self.full)
        col = [-1] * self.n
        for i, a in pinned.items():
            col[i] = a
            dom[i] = 1 << a
        for i, a in pinned.items():
            for j, masks in self.conf[i]:
                if col[j] < 0:
                    dom[j] &= ~masks[a]
                    if not dom[j]:
                        return None
        return dom, col

    def search(self, dom, col, stats):
        best = -1
        bestc = 1 << 30
        for i in range(self.n):
            if col[i] < 0:
                c = dom[i].bit_count()
                if c < bestc:
                    best, bestc = i, c
                    if c <= 1:
                        break
        if best < 0:
            return col
        d = dom[best]
        conf = self.conf[best]
        while d:
            low = d & -d
            d ^= low
            a = low.bit_length() - 1
            stats[0] += 1
            nd = dom[:]
            ok = True
            for j, masks in conf:
                if col[j] < 0:
                    m = nd[j] & ~masks[a]
                    if not m:
                        ok = False
                        break
                    nd[j] = m
            if ok:
                nc = col[:]
                nc[best] = a
                nd[best] = low
                got = self.search(nd, nc, stats)
                if got is not None:
                    return got
        return None

    def solve_indexed(self, pinned: dict, stats=None):
        stats = stats if stats is not None else [0]
        start = self.initial(pinned)
        if start is None:
            return None
        return self.search(start[0], start[1], stats)

    def satisfies(self, col, edge_slots) -> bool:
        """Whether the full index coloring ``col`` respects the given edges."""
        for i, slot in edge_slots:
            if (slot[1][col[i]] >> col[slot[0]]) & 1:
                return False
        return True

    def decode(self, col) -> dict:
        return {self.vertices[i]: self.colors[i][a] for i, a in enumerate(col)}

    def encode(self, coloring: dict) -> dict:
        return {self.index[v]: self.color_index[self.index[v]][c] for v, c in coloring.items()}


def _check_pinned(cov: CoverGraph, pinned: dict) -> None:
    for v, c in pinned.items():
        if v not in cov.lists:
            raise SolverError(f"pinned vertex {v!r} is not in the graph", "pinned-invalid")
        if c not in cov.lists[v]:
            raise SolverError(f"pinned color {c} not in list of {v!r}", "pinned-invalid")
    for (u, v), pairs in cov.matchings.items():
        if u in pinned and v in pinned and (pinned[u], pinned[v]) in pairs:
            raise SolverError(f"pinned coloring violates cover edge on {u}-{v}", "pinned-invalid")


def solve(cov: CoverGraph, pinned: dict | None = None) -> SolveResult:
    """Find a DP-coloring of ``cov`` extending ``pinned``."""
    pinned = dict(pinned or {})
    _check_pinned(cov, pinned)
    t0 = time.perf_counter()
    kernel = cov.kernel
    stats = [0]
    col = kernel.solve_indexed(kernel.encode(pinned), stats)
    elapsed = time.perf_counter() - t0
    if col is None:
        return SolveResult(UNSAT, None, stats[0], elapsed)
    return SolveResult(SAT, kernel.decode(col), stats[0], elapsed)


def extend(g: Graph, lists, matchings, c0: Sequence, phi: dict) -> SolveResult:
    """Extend a coloring ``phi`` of the cycle ``c0`` to all of ``g``."""
    check_cycle(g, c0)
    if set(phi) != set(c0):
        raise SolverError("precoloring must color exactly the vertices of C0", "precoloring-invalid")
    cov = build_cover(g, lists, matchings)
    for v, c in phi.items():
        if c not in cov.lists[v]:
            raise SolverError(f"precoloring uses unlisted color {c} at {v!r}", "precoloring-invalid")
    for (u, v), pairs in cov.matchings.items():
        if u in phi and v in phi and (phi[u], phi[v]) in pairs:
            raise SolverError(f"precoloring invalid on C0 edge {u}-{v}", "precoloring-invalid")
    return solve(cov, phi)


class PermutationFamily:
    """All instances on ``g`` with lists {1..k} and perfect matchings.

    An instance is a tuple of permutation indices, one per edge in
    ``g.edges`` order; ``perms[p][a] = b`` pairs color ``a+1`` at the smaller
    endpoint with color ``b+1`` at the larger.  The kernel's conflict tables
    are rewritten in place when an instance is loaded.
    """

    def __init__(self, g: Graph, k: int):
        self.g = g
        self.k = k
        self.edges = g.edges
        self.perms = list(itertools.permutations(range(k)))
        self.kernel = SearchKernel(g.vertices, [range(1, k + 1)] * len(g.vertices),
                                   [[0] * 0 for _ in g.vertices])
        index = self.kernel.index
        conf = [[] for _ in g.vertices]
        self.slots = []
        for u, v in self.edges:
            su = [index[v], None]
            sv = [index[u], None]
            conf[index[u]].append(su)
            conf[index[v]].append(sv)
            self.slots.append((index[u], su, sv))
        self.kernel.conf = conf
        self.fwd = [tuple(1 << p[a] for a in range(k)) for p in self.perms]
        self.bwd = []
        for p in self.perms:
            inv = [0] * k
            for a, b in enumerate(p):
                inv[b] = a
            self.bwd.append(tuple(1 << inv[b] for b in range(k)))
        self.edge_checks = [[(i, su)] for i, su, _ in self.slots]

    @property
    def size(self) -> int:
        return len(self.perms) ** len(self.edges)

    def load(self, choice, positions=None) -> None:
        fwd, bwd, slots = self.fwd, self.bwd, self.slots
        for e in (range(len(choice)) if positions is None else positions):
            p = choice[e]
            _, su, sv = slots[e]
            su[1] = fwd[p]
            sv[1] = bwd[p]

    def matchings(self, choice) -> dict:
        return {
            e: frozenset((a + 1, p[a] + 1) for a in range(self.k))
            for e, p in zip(self.edges, (self.perms[c] for c in choice))
        }

    def fixed_positions(self, symmetry: str | bool | None) -> frozenset:
        """Edge positions held at the identity: none, the first edge
        (``"edge"`` or True), or a spanning forest (``"forest"``)."""
        if not symmetry or not self.edges:
            return frozenset()
        if symmetry == "forest":
            tree = set(spanning_forest(self.g))
            return frozenset(i for i, e in enumerate(self.edges) if e in tree)
        if symmetry in (True, "edge"):
            return frozenset({0})
        raise SolverError(f"unknown symmetry reduction {symmetry!r}", "usage")

    def choices(self, sample: int | None, seed: int, symmetry: str | bool | None = None):
        """Yield ``(choice, changed_positions)``; positions None means reload all."""
        m = len(self.edges)
        n_perm = len(self.perms)
        fixed = self.fixed_positions(symmetry)
        free = [i for i in range(m) if i not in fixed]
        if sample is not None:
            rng = random.Random(seed)
            for _ in range(sample):
                choice = [0] * m
                for i in range(m):
                    p = rng.randrange(n_perm)
                    if i not in fixed:
                        choice[i] = p
                yield choice, None
            return
        choice = [0] * m
        yield choice, None
        while True:
            j = len(free) - 1
            while j >= 0 and choice[free[j]] == n_perm - 1:
                choice[free[j]] = 0
                j -= 1
            if j < 0:
                return
            choice[free[j]] += 1
            yield choice, range(free[j], m)


def _guard(family: PermutationFamily, sample, symmetry, limit) -> None:
    if sample is not None:
        if sample <= 0:
            raise SolverError("sample size must be positive", "usage")
        return
    m = len(family.edges) - len(family.fixed_positions(symmetry))
    total = len(family.perms) ** m
    if total > limit:
        raise SolverError(
            f"exhaustive mode needs {total} matching assignments (limit {limit}); use sampling mode",
            "size-guard",
        )


def certify_dp_k(g: Graph, k: int, sample: int | None = None, seed: int = 0,
                 symmetry: str | bool | None = None, limit: int = EXHAUSTIVE_LIMIT) -> CertifyResult:
    """Decide DP-k-colorability by enumerating perfect matching assignments.

    With ``sample`` set, that many assignments are drawn uniformly with the
    given seed instead, and a clean run only reports that no counterexample
    was found.

    ``symmetry`` holds some matchings at the identity: ``"edge"`` the first
    edge, ``"forest"`` a whole spanning forest.  Renaming colors vertex by
    vertex along the forest turns any assignment into one of these, so with
    no precoloring nothing is lost.
    """
    if k < 1:
        raise SolverError("k must be positive", "usage")
    family = PermutationFamily(g, k)
    _guard(family, sample, symmetry, limit)
    kernel = family.kernel
    checks = family.edge_checks
    witness = None
    examined = solved = 0
    stats = [0]
    for choice, changed in family.choices(sample, seed, symmetry):
        family.load(choice, changed)
        examined += 1
        if witness is not None:
            positions = range(len(choice)) if changed is None else changed
            if all(kernel.satisfies(witness, checks[e]) for e in positions):
                continue
        solved += 1
        witness = kernel.solve_indexed({}, stats)
        if witness is None:
            m = family.matchings(choice)
            check = solve(build_cover(g, uniform_lists(g, k), m))
            assert check.status == UNSAT
            return CertifyResult(COUNTEREXAMPLE, m, None, examined, _mode(sample),
                                 stats={"searched": solved, "nodes": stats[0]})
    verdict = COLORABLE if sample is None else NOT_FOUND
    return CertifyResult(verdict, None, None, examined, _mode(sample),
                         stats={"searched": solved, "nodes": stats[0]})


def _mode(sample) -> str:
    return "exhaustive" if sample is None else "sample"


def valid_colorings(family: PermutationFamily, vertex_idx: Sequence[int]):
    """All index colorings of the vertices ``vertex_idx`` that are valid on
    the edges among them, under the currently loaded instance."""
    kernel = family.kernel
    pos = {i: p for p, i in enumerate(vertex_idx)}
    back = []  # per position: slots pointing at earlier positions
    for p, i in enumerate(vertex_idx):
        back.append([(pos[slot[0]], slot) for slot in kernel.conf[i]
                     if slot[0] in pos and pos[slot[0]] < p])
    k = family.k
    n = len(vertex_idx)
    cur = [0] * n

    def rec(p):
        if p == n:
            yield tuple(cur)
            return
        for a in range(k):
            for q, slot in back[p]:
                if (slot[1][a] >> cur[q]) & 1:
                    break
            else:
                cur[p] = a
                yield from rec(p + 1)

    yield from rec(0)


def certify_extension(g: Graph, c0: Sequence, k: int, sample: int | None = None, seed: int = 0,
                      limit: int = EXHAUSTIVE_LIMIT) -> CertifyResult:
    """Check that every DP-k-coloring of the cycle ``c0`` extends to ``g``,
    for every (or ``sample`` random) perfect matching assignment."""
    check_cycle(g, c0)
    family = PermutationFamily(g, k)
    _guard(family, sample, None, limit)
    kernel = family.kernel
    cyc = [kernel.index[v] for v in c0]
    on_cycle = set(cyc)
    boundary_checks = [(i, slot) for i in cyc for slot in kernel.conf[i] if slot[0] not in on_cycle]
    witness = None
    examined = extensions = solved = 0
    stats = [0]
    for choice, changed in family.choices(sample, seed):
        family.load(choice, changed)
        examined += 1
        if witness is not None:
            positions = range(len(choice)) if changed is None else changed
            interior_ok = all(
                kernel.satisfies(witness, family.edge_checks[e])
                for e in positions
                if family.slots[e][0] not in on_cycle and family.slots[e][1][0] not in on_cycle
            )
            if not interior_ok:
                witness = None
        for pc in valid_colorings(family, cyc):
            extensions += 1
            if witness is not None:
                cand = witness[:]
                for i, a in zip(cyc, pc):
                    cand[i] = a
                if kernel.satisfies(cand, boundary_checks):
                    witness = cand
                    continue
            solved += 1
            got = kernel.solve_indexed(dict(zip(cyc, pc)), stats)
            if got is None:
                m = family.matchings(choice)
                phi = {v: a + 1 for v, a in zip(c0, pc)}
                check = extend(g, uniform_lists(g, k), m, c0, phi)
                assert check.status == UNSAT
                return CertifyResult(COUNTEREXAMPLE, m, phi, examined, _mode(sample), extensions,
                                     stats={"searched": solved, "nodes": stats[0]})
            witness = got
    verdict = COLORABLE if sample is None else NOT_FOUND
    return CertifyResult(verdict, None, None, examined, _mode(sample), extensions,
                         stats={"searched": solved, "nodes": stats[0]})


def instance_count(g: Graph, k: int) -> int:
    return math.factorial(k) ** len(g.edges)
