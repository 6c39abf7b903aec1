"""``dpcolor`` command line front end.

Every command writes one JSON report (stdout or ``--out``).  Exit status: 0
success or certified, 1 counterexample, UNSAT or violations, 2 usage or input
error (a report with an ``error`` object is still written).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import discharging as dis
from .dp_cover import build_cover, from_lists, uniform_lists
from .errors import DPColorError
from .formats import InputError, dump_json, load_graph, load_matching, matching_to_dict, read_json
from .reducibility import (
    brute_verify_reducible,
    get_configuration,
    greedy_soundness,
    ordering_problems,
    replay_identification_proof,
)
from .solver import certify_dp_k, certify_extension, extend, solve
from .structure import check_hypotheses, structure_report

SCHEMA = "dpcolor-report/1"


class UsageError(DPColorError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(x):
    if isinstance(x, dict):
        return {_key(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: repr(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    return x


def _key(k):
    if isinstance(k, tuple):
        return "-".join(map(str, k))
    return str(k)


def _coloring(a):
    return None if a is None else {str(v): a[v] for v in sorted(a)}


def _graph_input(args):
    g, digest = load_graph(args.graph)
    return g, {"graph": {"path": str(args.graph), "sha256": digest}}


def _positive_k(k):
    if k < 1:
        raise UsageError("--k must be a positive integer")


# ---------------------------------------------------------------- commands


def cmd_structure(args):
    g, inputs = _graph_input(args)
    report = structure_report(g)
    ok = any(h["satisfied"] for h in report["hypotheses"].values())
    return inputs, ("hypotheses-satisfied" if ok else "hypotheses-violated"), 0, report


def cmd_solve(args):
    g, inputs = _graph_input(args)
    if args.matching:
        lists, matchings, digest = load_matching(args.matching, g)
        inputs["matching"] = {"path": str(args.matching), "sha256": digest}
    else:
        _positive_k(args.k)
        lists = uniform_lists(g, args.k)
        matchings = from_lists(lists, g)
    cov = build_cover(g, lists, matchings)
    res = solve(cov)
    payload = {"status": res.status, "coloring": _coloring(res.witness), "nodes": res.nodes}
    return inputs, res.status, 0 if res.sat else 1, payload


def _certify_payload(res, g, k):
    payload = {"verdict": res.verdict, "mode": res.mode, "examined": res.examined,
               "extensions_checked": res.extensions_checked, "statistics": res.stats}
    if res.counterexample is not None:
        payload["counterexample"] = matching_to_dict(uniform_lists(g, k), res.counterexample)
    if res.precoloring is not None:
        payload["precoloring"] = _coloring(res.precoloring)
    return payload


def cmd_certify(args):
    g, inputs = _graph_input(args)
    _positive_k(args.k)
    res = certify_dp_k(g, args.k, sample=args.sample, seed=args.seed, symmetry=args.symmetry)
    payload = _certify_payload(res, g, args.k)
    return inputs, res.verdict, 1 if res.counterexample is not None else 0, payload


def cmd_extend(args):
    g, inputs = _graph_input(args)
    c0 = list(args.cycle) if args.cycle else (list(g.outer) if g.outer else None)
    if c0 is None:
        raise UsageError("no cycle to extend from: give --cycle or an 'outer' field in the graph file")
    if args.precoloring:
        if not args.matching:
            raise UsageError("--precoloring needs --matching")
        lists, matchings, digest = load_matching(args.matching, g)
        inputs["matching"] = {"path": str(args.matching), "sha256": digest}
        data, pdigest = read_json(args.precoloring)
        inputs["precoloring"] = {"path": str(args.precoloring), "sha256": pdigest}
        if not isinstance(data, dict):
            raise InputError("precoloring file must map vertex ids to colors", "schema")
        try:
            phi = {int(v): c for v, c in data.items()}
        except ValueError as exc:
            raise InputError(f"precoloring file: {exc}", "schema") from exc
        res = extend(g, lists, matchings, c0, phi)
        payload = {"status": res.status, "coloring": _coloring(res.witness), "nodes": res.nodes}
        return inputs, res.status, 0 if res.sat else 1, payload
    _positive_k(args.k)
    res = certify_extension(g, c0, args.k, sample=args.sample, seed=args.seed)
    payload = _certify_payload(res, g, args.k)
    payload["cycle"] = c0
    return inputs, res.verdict, 1 if res.counterexample is not None else 0, payload


def cmd_reduce(args):
    _positive_k(args.k)
    cfg = get_configuration(args.config)
    inputs = {"configuration": {"name": cfg.name, "aliases": list(cfg.aliases)}}
    p = Path(args.config)
    if p.suffix == ".json" and p.exists():
        inputs["configuration"]["sha256"] = read_json(p)[1]
    payload = {"name": cfg.name}
    ok = True
    summary = []
    if cfg.order is not None:
        inst = cfg.instance()
        problems = ordering_problems(inst.host, inst.inner, cfg.order, args.k)
        payload["ordering"] = {"order": list(cfg.order), "valid": not problems, "problems": problems}
        summary.append("ordering valid" if not problems else "ordering invalid")
        oracle = brute_verify_reducible(cfg, args.k)
        payload["oracle"] = {"reducible": oracle.reducible, "assignments": oracle.assignments,
                             "pairs": oracle.pairs, "searched": oracle.searched,
                             "failure": _jsonable(oracle.failure)}
        summary.append("oracle: " + ("reducible" if oracle.reducible else "not reducible"))
        if not problems:
            run = greedy_soundness(cfg, args.k)
            agree = run.all_succeeded == oracle.reducible
            payload["greedy"] = {"pairs": run.pairs, "successes": run.successes, "failures": run.failures,
                                 "first_failure": _jsonable(run.first_failure), "agrees_with_oracle": agree}
            summary.append("greedy/oracle agree" if agree else "greedy/oracle DISAGREE")
            ok = ok and run.all_succeeded and agree
        ok = ok and not problems and oracle.reducible
    if cfg.replay is not None:
        rep = replay_identification_proof(cfg.name, seed=args.seed, k=args.k)
        payload["replay"] = {"ok": rep.ok, "failed_step": rep.failed_step, "steps": _jsonable(rep.steps),
                             "residual_sizes": _jsonable(rep.residual_sizes), "bounds": _jsonable(rep.bounds),
                             "new_short_cycles": _jsonable(rep.new_short_cycles),
                             "coloring": _coloring(rep.coloring)}
        summary.append("replay: ok" if rep.ok else f"replay failed at {rep.failed_step}")
        ok = ok and rep.ok
    if cfg.order is None and cfg.replay is None:
        oracle = brute_verify_reducible(cfg, args.k)
        payload["oracle"] = {"reducible": oracle.reducible, "assignments": oracle.assignments,
                             "pairs": oracle.pairs, "searched": oracle.searched,
                             "failure": _jsonable(oracle.failure)}
        summary.append("oracle: " + ("reducible" if oracle.reducible else "not reducible"))
        ok = oracle.reducible
    payload["summary"] = "; ".join(summary)
    return inputs, "reducible" if ok else "not-verified", 0 if ok else 1, payload


def cmd_discharge(args):
    g, inputs = _graph_input(args)
    if g.outer is None:
        raise InputError("graph file has no 'outer' cycle", "no-outer")
    if not g.is_connected():
        raise InputError("discharging requires a connected graph", "disconnected")
    hyp = check_hypotheses(g, args.rules)
    if args.strict and not hyp.satisfied:
        raise UsageError(f"refused under --strict: {hyp.verdict()}", "hypotheses")
    c0 = list(g.outer)
    ledger, tags = dis.discharge(g, c0, args.rules)
    audit = dis.outer_audit(ledger, g, c0, tags, args.rules)
    nonneg = dis.audit_nonnegativity(ledger, tags)
    name = dis.element_name
    log = [{"from": name(t.source), "to": name(t.target), "amount2": t.amount2, "rule": t.rule, "stage": t.stage}
           for t in ledger.log]
    if args.trace:
        for i, t in enumerate(log):
            print(f"{i:5d} {t['rule']:<34} {t['from']:>8} -> {t['to']:<8} {t['amount2'] / 2:g}", file=sys.stderr)
    payload = {
        "rules": args.rules,
        "hypotheses": {"satisfied": hyp.satisfied, "verdict": hyp.verdict(), "violations": hyp.violations},
        "outer_face": name(dis.fkey(tags.outer_id)),
        "charges2": {name(e): {"initial": ledger.initial2[e], "final": ledger.charge2[e]} for e in ledger.charge2},
        "transfers": log,
        "total_initial2": sum(ledger.initial2.values()),
        "total_final2": sum(ledger.charge2.values()),
        "flags": _jsonable(tags.flags),
        "outer_audit": {
            "d_c0": audit.d_c0, "f3": audit.f3, "f_special": audit.f_special, "e_out": audit.e_out,
            "e_prime": audit.e_prime, "x2": audit.x2, "final2": audit.final2, "formula2": audit.formula2,
            "identity_holds": audit.identity_holds, "chordless": audit.chordless,
            "chordless_form2": audit.chordless_form2, "lower_bound2": audit.lower_bound2,
            "friendly_paths": [{"face": p.face, "degree": p.degree, "path_vertices": p.path_vertices,
                                "bound2": p.bound2, "gave2": p.gave2, "ok": p.ok} for p in audit.friendly_paths],
        },
        "nonnegativity": {"negatives": nonneg.negatives, "outer_positive": nonneg.outer_positive},
    }
    print(f"total = {payload['total_final2'] / 2:g}", file=sys.stderr)
    clean = nonneg.clean and audit.paths_ok
    return inputs, "clean" if clean else "violations", 0 if clean else 1, payload


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dpcolor", description="DP-coloring engine and discharging auditor for plane graphs.")
    p.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, k=True, sample=False):
        sp.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="write the JSON report here")
        if k:
            sp.add_argument("--k", type=int, default=3, help="number of colors (default 3)")
        if sample:
            sp.add_argument("--sample", type=int, metavar="N", help="check N random matching assignments")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampling (default 0)")

    sp = sub.add_parser("structure", help="cycle spectrum, triangle distance, separating cycles, hypotheses")
    sp.add_argument("graph", type=Path)
    common(sp, k=False)
    sp.set_defaults(func=cmd_structure)

    sp = sub.add_parser("solve", help="find a DP-coloring")
    sp.add_argument("graph", type=Path)
    sp.add_argument("--matching", type=Path, help="lists and matchings file (default: identity, lists {1..k})")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("certify", help="decide DP-k-colorability over all perfect matching assignments")
    sp.add_argument("graph", type=Path)
    sp.add_argument("--symmetry", choices=("edge", "forest"),
                    help="hold the first edge, or a spanning forest, at the identity matching")
    common(sp, sample=True)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("extend", help="extend precolorings of a cycle")
    sp.add_argument("graph", type=Path)
    sp.add_argument("--cycle", type=int, nargs="+", help="cycle to precolor (default: the outer cycle)")
    sp.add_argument("--matching", type=Path)
    sp.add_argument("--precoloring", type=Path, help="JSON object vertex -> color; needs --matching")
    common(sp, sample=True)
    sp.set_defaults(func=cmd_extend)

    sp = sub.add_parser("reduce", help="verify a reducible configuration")
    sp.add_argument("config", help="builtin name or alias, or a configuration .json file")
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("discharge", help="run a discharging rule set and audit the result")
    sp.add_argument("graph", type=Path)
    sp.add_argument("--rules", choices=dis.RULESETS, required=True)
    sp.add_argument("--strict", action="store_true", help="refuse graphs violating the rule set's hypotheses")
    sp.add_argument("--trace", action="store_true", help="print the transfer log to stderr")
    common(sp, k=False)
    sp.set_defaults(func=cmd_discharge)
    return p


def _emit(report: dict, out: Path | None) -> None:
    text = dump_json(report)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    out = None
    command = argv[0] if argv else None
    try:
        args = parser.parse_args(argv)
        out = args.out
        command = args.command
        flags = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())
                 if k not in ("func", "command", "out", "graph", "config")}
        inputs, verdict, code, payload = args.func(args)
        report = {"schema": SCHEMA, "command": command, "inputs": inputs, "flags": flags,
                  "verdict": verdict, "payload": _jsonable(payload)}
    except DPColorError as exc:
        code = 2
        report = {"schema": SCHEMA, "command": command,
                  "error": {"type": type(exc).__name__, "code": exc.code, "message": str(exc)}}
        print(f"dpcolor: error: {exc}", file=sys.stderr)
    _emit(report, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
