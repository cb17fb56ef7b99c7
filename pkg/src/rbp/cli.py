"""Command-line entry point: ``rbp solve|brute|verify|gen-lower|gap|embed``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from rbp.brute import DEFAULT_LIMIT, SizeLimitError, solve_exact, solve_exact_trace
from rbp.embedding import MetricError, embed_metric, max_stretch, parse_metric
from rbp.instance import InstanceError, format_instance, pad_to_window_multiple, read_instance
from rbp.lowerbound import gap_report, generate
from rbp.lp import build_lp1, build_lp2_directed, lp_text
from rbp.pipeline import StageError, solve_general, solve_tree
from rbp.server import format_trace, parse_trace, validate_trace


def _report_solve(args, sol) -> dict:
    inst = sol.original or sol.instance
    report = {
        "vertices": inst.vertex_count,
        "requests": inst.real_length,
        "requests_padded": inst.n,
        "k": inst.k,
        "windows": sol.terminals.m,
        "terminals": " ".join(str(v + 1) for v in sol.terminals.vertices),
        "lp1_objective": sol.lp1_objective,
        "lp2_objective": sol.lp2_objective,
        "cover_length": sol.cover_length,
        "terminal_path_length": sol.terminal_path_length,
        "distance": sol.distance,
        "peak_buffer": sol.peak,
        "buffer_bound": 4 * inst.k + 1,
    }
    if sol.embedding is not None:
        report["embedding_seed"] = sol.embedding.seed
        report["tree_distance"] = sol.tree_trace.distance
    for name, ok in sol.checks.items():
        report[f"check_{name}"] = ok
    if args.oracle:
        if inst.n > args.limit:
            report["oracle"] = f"skipped (n={inst.n} > {args.limit})"
        else:
            opt, _ = solve_exact(inst, limit=args.limit)
            report["oracle_cost"] = opt
            report["check_ratio_le_9"] = sol.distance <= 9 * opt + 1e-9
    return report


def _emit(report: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(report, sort_keys=False) + "\n")
        return
    for key, val in report.items():
        if isinstance(val, float):
            val = f"{val:.10g}"
        out.write(f"{key:28s} {val}\n")
    if "oracle_cost" in report:
        opt = report["oracle_cost"]
        ratio = report["distance"] / opt if opt > 0 else (1.0 if report["distance"] == 0 else math.inf)
        out.write(f"{'ratio':28s} {ratio:.6g}\n")


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    if not inst.is_tree and not args.embed:
        print("error: instance is not a tree; pass --embed to route through a tree embedding", file=sys.stderr)
        return 2
    sol = solve_general(inst, seed=args.seed) if args.embed else solve_tree(inst)
    if args.dump_lp:
        path = Path(args.dump_lp)
        path.write_text(lp_text(build_lp1(sol.instance, sol.terminals), "LP1 request cover"))
        lp2 = build_lp2_directed(sol.instance, sol.terminals, sol.intervals)
        path.with_name(path.stem + "_lp2" + path.suffix).write_text(lp_text(lp2, "LP2' interval cover"))
    if args.trace:
        Path(args.trace).write_text(format_trace(sol.trace))
    report = _report_solve(args, sol)
    _emit(report, args.json)
    return 0 if all(v for k, v in report.items() if k.startswith("check_")) else 1


def cmd_brute(args) -> int:
    inst = read_instance(args.instance)
    if args.pad:
        inst = pad_to_window_multiple(inst)
    cap = args.capacity or inst.k
    cost, trace = solve_exact_trace(inst, cap, limit=args.limit)
    if args.trace:
        Path(args.trace).write_text(format_trace(trace))
    _emit({"capacity": cap, "cost": cost, "peak_buffer": trace.peak_occupancy}, args.json)
    return 0


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    trace, dist, peak = parse_trace(Path(args.trace).read_text(), inst.start_vertex)
    if trace.events and max((e[1] for e in trace.events if e[0] == "R"), default=-1) >= inst.real_length:
        inst = pad_to_window_multiple(inst)
    verdict = validate_trace(inst, trace, args.capacity, declared_distance=dist)
    report = {"valid": verdict.ok, "distance": verdict.distance, "peak_buffer": verdict.peak}
    if peak is not None and verdict.ok and peak != verdict.peak:
        report["valid"] = False
        report["reason"] = f"declared peak {peak} != recomputed {verdict.peak}"
    if not verdict.ok:
        report["event"] = verdict.index
        report["reason"] = verdict.reason
    _emit(report, args.json)
    return 0 if report["valid"] else 1


def cmd_gen_lower(args) -> int:
    text = format_instance(generate(args.k).instance)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gap(args) -> int:
    rep = gap_report(args.k, reduced_capacity=args.reduced_capacity, limit=args.limit)
    _emit({
        "k": rep.k,
        "reduced_capacity": rep.reduced_capacity,
        "sweep_cost": rep.opt_full,
        "reduced_cost": rep.opt_reduced,
        "method": rep.method,
        "ratio": rep.opt_reduced / rep.opt_full,
        "k_over_4": rep.k / 4,
    }, args.json)
    return 0


def cmd_embed(args) -> int:
    dist = parse_metric(Path(args.metric).read_text())
    emb = embed_metric(dist, args.seed)
    tree_d = emb.distances()
    off = ~np.eye(len(dist), dtype=bool)
    _emit({
        "points": len(dist),
        "seed": args.seed,
        "tree_vertices": emb.vertex_count,
        "levels": max(emb.levels) + 1,
        "non_contracting": bool((tree_d[off] >= dist[off] * (1 - 1e-12)).all()),
        "max_stretch": max_stretch(dist, emb),
    }, args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rbp", description="Bicriteria reordering-buffer solver toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the bicriteria pipeline on an instance file")
    s.add_argument("instance")
    s.add_argument("--oracle", action="store_true", help="compare with the exact optimum when small enough")
    s.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--embed", action="store_true", help="embed a general metric into a random tree first")
    s.add_argument("--dump-lp", metavar="PATH")
    s.add_argument("--trace", metavar="PATH")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("brute", help="exact optimum by exhaustive search")
    b.add_argument("instance")
    b.add_argument("--capacity", type=int)
    b.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    b.add_argument("--pad", action="store_true", help="pad to a multiple of 2k+1 first")
    b.add_argument("--trace", metavar="PATH")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_brute)

    v = sub.add_parser("verify", help="validate a trace file against an instance")
    v.add_argument("instance")
    v.add_argument("trace")
    v.add_argument("--capacity", type=int, required=True)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen-lower", help="emit the adversarial line instance for k")
    g.add_argument("k", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen_lower)

    r = sub.add_parser("gap", help="sweep-server cost versus reduced-capacity optimum")
    r.add_argument("k", type=int)
    r.add_argument("--reduced-capacity", type=int)
    r.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_gap)

    e = sub.add_parser("embed", help="embed a METRIC file into a random tree and report stretch")
    e.add_argument("metric")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_embed)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, MetricError, SizeLimitError, StageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
