"""Exact discharging on plane graphs with a designated outer cycle.

Charges are kept doubled, as integers, so every rule amount (a multiple of
1/2) is exact.  Elements are ``("v", vertex)`` and ``("f", face_id)``; the
outer face is an ordinary face element flagged in :class:`Tags`.

Initial charges: ``2d(v) - 6`` on vertices, ``d(f) - 6`` on faces and
``d(C0) + 6`` on the outer face, which sum to zero by Euler's formula.

Two rule sets are provided:

``no-4-5-cycles``
    for graphs without 4- and 5-cycles whose triangles are far apart;
``no-4-6-cycles``
    for graphs without 4-, 5- and 6-cycles.

The outer face never counts as a k-face in any predicate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DischargingError
from .plane_graph import Face, PlaneGraph, canonical_cycle, check_cycle, edge_key, find_face

NO_45 = "no-4-5-cycles"
NO_456 = "no-4-6-cycles"
RULESETS = (NO_45, NO_456)

# doubled amounts allowed for fixed-amount rules
FIXED_AMOUNTS = {1, 2, 3, 4, 6}


def vkey(v):
    return ("v", v)


def fkey(fid: int):
    return ("f", fid)


def element_name(e) -> str:
    return f"{e[0]}:{e[1]}"


@dataclass(frozen=True)
class Transfer:
    source: tuple
    target: tuple
    amount2: int
    rule: str
    stage: int


class ChargeLedger:
    """Doubled charges per element plus the full transfer log."""

    def __init__(self, initial2: dict):
        self.initial2 = dict(initial2)
        self.charge2 = dict(initial2)
        self.total2 = sum(initial2.values())
        self.log: list[Transfer] = []

    def transfer(self, source, target, amount2: int, rule: str, stage: int) -> None:
        if amount2 == 0:
            return
        if source not in self.charge2 or target not in self.charge2:
            raise DischargingError(f"transfer between unknown elements {source} -> {target}", "bug")
        if amount2 < 0:
            source, target, amount2 = target, source, -amount2
        self.charge2[source] -= amount2
        self.charge2[target] += amount2
        self.log.append(Transfer(source, target, amount2, rule, stage))
        if sum(self.charge2.values()) != self.total2:
            raise DischargingError("charge not conserved by a transfer", "bug")

    def charge(self, e):
        """Undoubled charge as a float; use ``charge2`` for exact work."""
        return self.charge2[e] / 2

    def sent(self, source=None, target=None, rule=None) -> int:
        return sum(t.amount2 for t in self.log
                   if (source is None or t.source == source)
                   and (target is None or t.target == target)
                   and (rule is None or t.rule == rule))


@dataclass
class Tags:
    outer_id: int
    outer_vertices: frozenset
    faces: dict                    # id -> Face, outer excluded
    degree: dict                   # vertex -> degree
    internal_vertex: dict
    internal_face: dict
    light: dict
    vertex_faces: dict             # vertex -> sorted face ids (outer excluded)
    face_adjacent: dict            # face id -> sorted ids of faces sharing an edge (outer excluded)
    edge_faces: dict               # edge -> tuple of the (one or two) face ids on it, outer included
    pattern: dict                  # face id -> sorted tuple of vertex degrees
    in_f: dict                     # face id -> True if it meets C0
    base_of: dict                  # vertex -> sorted ids of its bases
    roof_of: dict                  # face id -> sorted roofs
    adjacent_triangles: dict       # vertex -> ids of 3-faces the vertex is adjacent to (not on)
    rich_to: dict                  # vertex -> ids of 7+-faces it is rich to (4-vertices only)
    bad6: set
    special6: set
    special7: set
    flags: list = field(default_factory=list)

    def triangles(self) -> list:
        return [fid for fid, f in self.faces.items() if f.degree == 3]


def _outer(g: PlaneGraph, c0: Sequence) -> Face:
    check_cycle(g, c0)
    if g.outer is not None and canonical_cycle(g.outer) != canonical_cycle(c0):
        raise DischargingError("C0 is not the designated outer face", "not-outer")
    face = find_face(g, c0)
    if face is None:
        raise DischargingError(f"C0 {tuple(c0)} is not a face of the embedding", "not-outer")
    return face


def initial_charges(g: PlaneGraph, c0: Sequence) -> ChargeLedger:
    outer = _outer(g, c0)
    init = {vkey(v): 2 * (2 * g.degree(v) - 6) for v in g.vertices}
    for f in g.faces:
        init[fkey(f.id)] = 2 * (f.degree + 6 if f.id == outer.id else f.degree - 6)
    if sum(init.values()) != 0:
        raise DischargingError(f"initial charges sum to {sum(init.values()) / 2}, not 0", "euler")
    return ChargeLedger(init)


def compute_tags(g: PlaneGraph, c0: Sequence) -> Tags:
    outer = _outer(g, c0)
    on_c0 = frozenset(c0)
    faces = {f.id: f for f in g.faces if f.id != outer.id}
    degree = {v: g.degree(v) for v in g.vertices}
    edge_faces: dict = {}
    for f in g.faces:
        for e in sorted(f.edge_set):
            edge_faces.setdefault(e, [])
            if f.id not in edge_faces[e]:
                edge_faces[e].append(f.id)
    edge_faces = {e: tuple(ids) for e, ids in edge_faces.items()}
    vertex_faces = {v: [] for v in g.vertices}
    for fid, f in faces.items():
        for v in sorted(f.vertex_set, key=repr):
            vertex_faces[v].append(fid)
    vertex_faces = {v: sorted(ids) for v, ids in vertex_faces.items()}
    face_adjacent = {}
    for fid, f in faces.items():
        adj = set()
        for e in f.edge_set:
            adj.update(x for x in edge_faces[e] if x != fid and x != outer.id)
        face_adjacent[fid] = sorted(adj)
    pattern = {fid: tuple(sorted(degree[v] for v in f.boundary)) for fid, f in faces.items()}
    internal_vertex = {v: v not in on_c0 for v in g.vertices}
    internal_face = {fid: not (f.vertex_set & on_c0) for fid, f in faces.items()}
    in_f = {fid: not internal_face[fid] for fid in faces}
    tri = {fid for fid, f in faces.items() if f.degree == 3}
    light = {v: any(fid in tri for fid in vertex_faces[v]) for v in g.vertices}

    base_of = {v: [] for v in g.vertices}
    roof_of = {}
    for fid, f in faces.items():
        if pattern[fid] != (3,) * 6:
            continue
        roofs = set()
        for t in face_adjacent[fid]:
            if t in tri:
                roofs.update(faces[t].vertex_set - f.vertex_set)
        roof_of[fid] = sorted(roofs, key=repr)
        for r in roofs:
            base_of[r].append(fid)
    base_of = {v: sorted(ids) for v, ids in base_of.items()}

    adjacent_triangles = {}
    for v in g.vertices:
        near = set()
        for w in g.neighbors(v):
            for t in vertex_faces[w]:
                if t in tri and v not in faces[t].vertex_set:
                    near.add(t)
        adjacent_triangles[v] = sorted(near)

    rich_to = {}
    for v in g.vertices:
        if degree[v] != 4:
            continue
        rich = []
        for fid in vertex_faces[v]:
            if faces[fid].degree < 7:
                continue
            blocked = any(t in tri and v in faces[t].vertex_set for t in face_adjacent[fid])
            if not blocked:
                rich.append(fid)
        rich_to[v] = rich

    bad6 = {fid for fid, f in faces.items() if f.degree == 6 and any(t in tri for t in face_adjacent[fid])}
    internal_tri = {t for t in tri if internal_face[t]}
    special6 = {fid for fid in bad6 if in_f[fid] and any(t in internal_tri for t in face_adjacent[fid])}
    special7 = {fid for fid, f in faces.items()
                if f.degree == 7 and in_f[fid] and sum(t in internal_tri for t in face_adjacent[fid]) >= 2}

    flags = []
    for v in g.vertices:
        on_3334 = [fid for fid in vertex_faces[v] if pattern[fid] == (3, 3, 3, 3, 3, 4)]
        if base_of[v] and on_3334:
            flags.append({"vertex": v, "flag": "roof-and-on-(3,3,3,3,3,4)-face",
                          "bases": base_of[v], "faces": on_3334})
    return Tags(outer.id, on_c0, faces, degree, internal_vertex, internal_face, light, vertex_faces,
                face_adjacent, edge_faces, pattern, in_f, base_of, roof_of, adjacent_triangles, rich_to,
                bad6, special6, special7, flags)


# ---------------------------------------------------------------- rules


def _fixed(ledger, src, dst, amount2, rule, stage):
    if amount2 not in FIXED_AMOUNTS:
        raise DischargingError(f"rule {rule} fired with amount {amount2 / 2}", "bug")
    ledger.transfer(src, dst, amount2, rule, stage)


def _rules_no45(ledger: ChargeLedger, g: PlaneGraph, tags: Tags) -> None:
    faces, deg = tags.faces, tags.degree
    tri = set(tags.triangles())
    outer = fkey(tags.outer_id)

    # stage 1: internal 4+-vertices
    for v in g.vertices:
        if not tags.internal_vertex[v] or deg[v] < 4:
            continue
        src = vkey(v)
        for t in tags.vertex_faces[v]:
            if t in tri:
                _fixed(ledger, src, fkey(t), 3, "vertex-to-incident-triangle", 1)
        paid = set()
        on_3334 = [fid for fid in tags.vertex_faces[v] if tags.pattern[fid] == (3, 3, 3, 3, 3, 4)]
        if tags.base_of[v]:
            paid.add(tags.base_of[v][0])
            _fixed(ledger, src, fkey(tags.base_of[v][0]), 1, "vertex-to-base", 1)
        elif on_3334:
            paid.add(on_3334[0])
            _fixed(ledger, src, fkey(on_3334[0]), 1, "vertex-to-(3,3,3,3,3,4)-face", 1)
        near333 = [t for t in tags.adjacent_triangles[v] if tags.pattern[t] == (3, 3, 3)]
        for t in near333:
            _fixed(ledger, src, fkey(t), 2 if deg[v] == 4 else 4, "vertex-to-adjacent-(3,3,3)-face", 1)
        if deg[v] == 4 and tags.light[v]:
            continue
        near = set(tags.adjacent_triangles[v])
        for fid in tags.vertex_faces[v]:
            if faces[fid].degree != 6 or fid in paid:
                continue
            if any(t in near for t in tags.face_adjacent[fid]):
                continue
            _fixed(ledger, src, fkey(fid), 1, "vertex-to-hexagon", 1)

    # stage 2: faces
    internal_tri = [t for t in sorted(tri) if tags.internal_face[t]]
    for fid, f in faces.items():
        big = f.degree >= 7 or (f.degree == 6 and not tags.internal_face[fid])
        if big:
            for t in tags.face_adjacent[fid]:
                if t in internal_tri:
                    _fixed(ledger, fkey(fid), fkey(t), 2, "big-face-to-triangle", 2)
            rest = ledger.charge2[fkey(fid)]
            if rest > 0:
                ledger.transfer(fkey(fid), outer, rest, "big-face-rest-to-outer", 2)
        elif f.degree == 6:
            for t in tags.face_adjacent[fid]:
                if t not in internal_tri:
                    continue
                if _hexagon_gives(g, tags, fid, t):
                    _fixed(ledger, fkey(fid), fkey(t), 1, "hexagon-to-triangle", 2)

    _outer_stage(ledger, g, tags, tags.special6, 3)


def _hexagon_gives(g: PlaneGraph, tags: Tags, fid: int, t: int) -> bool:
    f, deg = tags.faces[fid], tags.degree
    for e in f.edge_set & tags.faces[t].edge_set:
        a, b = e
        if min(deg[a], deg[b]) == 3 and max(deg[a], deg[b]) >= 4:
            return True
    for v in f.boundary:
        if deg[v] >= 4 and not any(tags.pattern[x] == (3, 3, 3) for x in tags.adjacent_triangles[v]):
            return True
    return tags.pattern[fid] == (3,) * 6


def _rules_no456(ledger: ChargeLedger, g: PlaneGraph, tags: Tags) -> None:
    faces, deg = tags.faces, tags.degree
    tri = set(tags.triangles())
    outer = fkey(tags.outer_id)

    # stage 1: internal triangles collect from 4+-vertices, then evenly from neighbours
    for t in sorted(tri):
        if not tags.internal_face[t]:
            continue
        heavy = [v for v in faces[t].boundary if deg[v] >= 4]
        for v in sorted(heavy, key=repr):
            _fixed(ledger, vkey(v), fkey(t), 3, "vertex-to-incident-triangle", 1)
        need2 = max(0, 6 - 3 * len(heavy))
        if need2 == 0:
            continue
        share = need2 // 3
        for e in sorted(faces[t].edge_set):
            across = [x for x in tags.edge_faces[e] if x != t]
            if len(across) != 1 or across[0] == tags.outer_id:
                raise DischargingError(f"internal triangle {t} has no proper face across {e}", "bug")
            _fixed(ledger, fkey(across[0]), fkey(t), share, "face-to-triangle-need", 1)

    # stage 2: internal heptagons collect from rich 4-vertices and 5+-vertices
    for fid, f in faces.items():
        if f.degree != 7 or not tags.internal_face[fid]:
            continue
        for v in sorted(f.vertex_set, key=repr):
            if deg[v] >= 5 or (deg[v] == 4 and fid in tags.rich_to.get(v, ())):
                _fixed(ledger, vkey(v), fkey(fid), 1, "vertex-to-heptagon", 2)

    # stage 3: big faces hand their surplus to the outer face
    for fid, f in faces.items():
        if f.degree >= 7:
            rest = ledger.charge2[fkey(fid)]
            if rest > 0:
                ledger.transfer(fkey(fid), outer, rest, "big-face-rest-to-outer", 3)

    _outer_stage(ledger, g, tags, tags.special7, 4)


def _outer_stage(ledger: ChargeLedger, g: PlaneGraph, tags: Tags, special: set, stage: int) -> None:
    outer = fkey(tags.outer_id)
    for v in sorted(tags.outer_vertices, key=repr):
        mu2 = 2 * (2 * tags.degree[v] - 6)
        if ledger.charge2[vkey(v)] != mu2:
            raise DischargingError(f"vertex {v!r} on C0 changed charge before collection", "bug")
        ledger.transfer(vkey(v), outer, mu2, "outer-collects-vertex", stage)
    for fid, f in tags.faces.items():
        if f.degree == 3 and tags.in_f[fid]:
            _fixed(ledger, outer, fkey(fid), 6, "outer-to-intersecting-triangle", stage)
    for fid in sorted(special):
        _fixed(ledger, outer, fkey(fid), 2, "outer-to-special-face", stage)


def apply_rules(ledger: ChargeLedger, g: PlaneGraph, tags: Tags, rules: str) -> ChargeLedger:
    if ledger.log:
        raise DischargingError("rules must start from a fresh ledger", "usage")
    if rules == NO_45:
        _rules_no45(ledger, g, tags)
    elif rules == NO_456:
        _rules_no456(ledger, g, tags)
    else:
        raise DischargingError(f"unknown rule set {rules!r}; choose one of {', '.join(RULESETS)}", "usage")
    return ledger


def discharge(g: PlaneGraph, c0: Sequence, rules: str):
    ledger = initial_charges(g, c0)
    tags = compute_tags(g, c0)
    apply_rules(ledger, g, tags, rules)
    return ledger, tags


# ---------------------------------------------------------------- audits


@dataclass
class FriendlyPath:
    face: int
    degree: int
    path_vertices: int
    bound2: int
    gave2: int

    @property
    def ok(self) -> bool:
        return self.gave2 >= self.bound2


@dataclass
class OuterAudit:
    d_c0: int
    f3: int
    f_special: int
    e_out: int
    e_prime: int
    x2: int
    final2: int
    formula2: int
    chordless: bool
    chordless_form2: int
    lower_bound2: int
    friendly_paths: list = field(default_factory=list)

    @property
    def identity_holds(self) -> bool:
        return self.final2 == self.formula2

    @property
    def paths_ok(self) -> bool:
        return all(p.ok for p in self.friendly_paths)


def outer_audit(ledger: ChargeLedger, g: PlaneGraph, c0: Sequence, tags: Tags, rules: str) -> OuterAudit:
    outer = fkey(tags.outer_id)
    on = tags.outer_vertices
    d = len(c0)
    tri = set(tags.triangles())
    f3 = sum(1 for t in tri if tags.in_f[t])
    special = tags.special6 if rules == NO_45 else tags.special7
    e_out_edges = [edge_key(u, w) for u in sorted(on, key=repr) for w in g.neighbors(u) if w not in on]
    e_prime = sum(1 for e in e_out_edges if not any(x in tri for x in tags.edge_faces[e]))
    x2 = ledger.sent(target=outer, rule="big-face-rest-to-outer")
    final2 = ledger.charge2[outer]
    formula2 = 2 * (d + 6 + sum(2 * tags.degree[v] - 6 for v in on) - 3 * f3 - len(special)) + x2
    if final2 != formula2:
        raise DischargingError(f"outer-face identity fails: ledger {final2 / 2} vs formula {formula2 / 2}", "bug")
    chords = sum(1 for u, w in g.edges if u in on and w in on) - d
    chordless_form2 = 2 * (6 - d + 2 * len(e_out_edges) - 3 * f3 - len(special)) + x2
    lower2 = 2 * (6 - d + f3 + 2 * e_prime - len(special)) + x2
    audit = OuterAudit(d, f3, len(special), len(e_out_edges), e_prime, x2, final2, formula2, chords == 0,
                       chordless_form2, lower2)
    if rules == NO_456:
        audit.friendly_paths = _friendly_paths(ledger, tags)
    return audit


def _friendly_paths(ledger: ChargeLedger, tags: Tags) -> list:
    outer = fkey(tags.outer_id)
    out = []
    outer_edges = {e for e, ids in tags.edge_faces.items() if tags.outer_id in ids}
    for fid, f in tags.faces.items():
        if f.degree < 7 or not (f.edge_set & outer_edges):
            continue
        fed = {t.target[1] for t in ledger.log if t.source == fkey(fid) and t.target[0] == "f"
               and t.target != outer}
        blocked = set()
        for t in fed:
            blocked |= tags.faces[t].vertex_set
        walk = f.boundary
        n = len(walk)
        free = [v not in blocked for v in walk]
        if all(free):
            longest = n
        else:
            longest = run = 0
            for i in range(2 * n):
                run = run + 1 if free[i % n] else 0
                longest = max(longest, min(run, n))
        bound2 = 2 * (f.degree - 6 - (f.degree + 1 - longest) // 3)
        gave2 = ledger.sent(source=fkey(fid), target=outer)
        out.append(FriendlyPath(fid, f.degree, longest, bound2, gave2))
    return out


@dataclass
class NonnegativityReport:
    negatives: list
    outer_charge2: int
    total2: int

    @property
    def outer_positive(self) -> bool:
        return self.outer_charge2 > 0

    @property
    def clean(self) -> bool:
        return not self.negatives and self.outer_positive


def audit_nonnegativity(ledger: ChargeLedger, tags: Tags) -> NonnegativityReport:
    outer = fkey(tags.outer_id)
    negatives = []
    for e, c in sorted(ledger.charge2.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]))):
        if e == outer or c >= 0:
            continue
        if e[0] == "v":
            v = e[1]
            note = {"degree": tags.degree[v], "internal": tags.internal_vertex[v], "light": tags.light[v]}
        else:
            f = tags.faces[e[1]]
            note = {"degree": f.degree, "vertex_degrees": [tags.degree[v] for v in f.boundary],
                    "internal": tags.internal_face[e[1]]}
        negatives.append({"element": element_name(e), "charge2": c, **note})
    total2 = sum(ledger.charge2.values())
    if total2 != 0:
        raise DischargingError(f"final charges sum to {total2 / 2}", "bug")
    return NonnegativityReport(negatives, ledger.charge2[outer], total2)


def face_counts(tags: Tags) -> Counter:
    return Counter(f.degree for f in tags.faces.values())
