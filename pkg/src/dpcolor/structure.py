"""Structural checks: cycle spectrum, triangle distance, separating cycles and
the two hypothesis sets under which the discharging rules are meant to run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .discharging import NO_45, NO_456
from .plane_graph import PlaneGraph, classify_9cycle, cycles_of_length, has_chord, is_separating, triangle_distance

FORBIDDEN = {NO_45: (4, 5), NO_456: (4, 5, 6)}
MIN_TRIANGLE_DISTANCE = {NO_45: 3, NO_456: 2}
OUTER_LENGTHS = {NO_45: (3, 6, 7, 8, 9), NO_456: (7, 8, 9, 10)}
SEPARATING_LENGTHS = {NO_45: (3, 6, 7, 8), NO_456: (7, 8, 9, 10)}


@dataclass
class HypothesisCheck:
    rules: str
    violations: list = field(default_factory=list)
    vacuous: bool = False

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def verdict(self) -> str:
        if self.violations:
            return "violated: " + "; ".join(self.violations)
        return "satisfied (vacuously, no triangles)" if self.vacuous else "satisfied"


def cycle_spectrum(g: PlaneGraph, lengths=range(3, 11)) -> dict:
    return {k: len(cycles_of_length(g, k)) for k in lengths}


def check_hypotheses(g: PlaneGraph, rules: str, spectrum: dict | None = None,
                     distance: float | None = None) -> HypothesisCheck:
    spectrum = spectrum if spectrum is not None else cycle_spectrum(g)
    distance = triangle_distance(g) if distance is None else distance
    out = HypothesisCheck(rules)
    present = [k for k in FORBIDDEN[rules] if spectrum.get(k, 0)]
    if present:
        out.violations.append("contains " + ", ".join(f"{k}-cycles" for k in present))
    if distance < MIN_TRIANGLE_DISTANCE[rules]:
        what = "intersecting triangles" if distance == 0 else "triangles too close"
        out.violations.append(f"{what}, d^Δ={_num(distance)} < {MIN_TRIANGLE_DISTANCE[rules]}")
    if g.outer is None:
        out.violations.append("no outer cycle C0 designated")
    else:
        n = len(g.outer)
        if n not in OUTER_LENGTHS[rules]:
            out.violations.append(f"C0 has length {n}, expected one of {OUTER_LENGTHS[rules]}")
        elif rules == NO_45 and n == 9 and classify_9cycle(g, g.outer) == "bad":
            out.violations.append("C0 is a bad 9-cycle")
    out.vacuous = not out.violations and spectrum.get(3, 0) == 0
    return out


def _num(x):
    return "inf" if x == math.inf else int(x)


def structure_report(g: PlaneGraph) -> dict:
    spectrum = cycle_spectrum(g)
    distance = triangle_distance(g)
    report = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "faces": len(g.faces),
        "cycle_counts": {str(k): n for k, n in spectrum.items()},
        "triangle_distance": _num(distance),
    }
    if g.outer is not None:
        g.outer_face()
        report["outer"] = {"length": len(g.outer), "chordless": not has_chord(g, g.outer)}
        if len(g.outer) == 9:
            report["outer"]["nine_cycle"] = classify_9cycle(g, g.outer)
        for rules in (NO_45, NO_456):
            sep = []
            for k in SEPARATING_LENGTHS[rules]:
                sep.extend(list(c) for c in cycles_of_length(g, k) if is_separating(g, c))
            report.setdefault("separating_cycles", {})[rules] = sep
        report["good_nine_cycles"] = [list(c) for c in cycles_of_length(g, 9) if classify_9cycle(g, c) == "good"]
    report["hypotheses"] = {}
    for rules in (NO_45, NO_456):
        h = check_hypotheses(g, rules, spectrum, distance)
        report["hypotheses"][rules] = {"satisfied": h.satisfied, "verdict": h.verdict(), "violations": h.violations}
    return report
