"""End-to-end bicriteria solver: pad, terminals, LP1, intervals, LP2', greedy cover, server."""

from __future__ import annotations

from dataclasses import dataclass, field

from rbp.cover import (
    RequestCover, cover_length, greedy_extension, is_connected_cover, is_feasible,
    max_disjoint_intervals, respects_intervals,
)
from rbp.embedding import EmbeddedTree, embed_metric, pull_back_schedule, tree_instance
from rbp.instance import RbpInstance, pad_to_window_multiple, partition_windows
from rbp.intervals import ServiceIntervals, check_two_feasibility, derive_intervals
from rbp.lp import LpSolution, build_lp1, build_lp2_directed, solve_lp
from rbp.server import ServerTrace, run_cover_server, validate_trace
from rbp.terminals import Terminals, find_terminals

CERT_TOL = 1e-6


class StageError(RuntimeError):
    def __init__(self, stage: str, exc: Exception):
        self.stage = stage
        self.cause = exc
        super().__init__(f"[{stage}] {type(exc).__name__}: {exc}")


@dataclass
class Solution:
    instance: RbpInstance          # padded instance the pipeline ran on
    terminals: Terminals
    lp1: LpSolution
    intervals: ServiceIntervals
    lp2: LpSolution
    cover: RequestCover
    trace: ServerTrace
    checks: dict[str, bool] = field(default_factory=dict)
    embedding: EmbeddedTree | None = None
    original: RbpInstance | None = None  # general-metric instance when routed through an embedding
    tree_trace: ServerTrace | None = None

    @property
    def lp1_objective(self) -> float:
        return self.lp1.objective

    @property
    def lp2_objective(self) -> float:
        return self.lp2.objective

    @property
    def cover_length(self) -> float:
        return cover_length(self.instance, self.cover)

    @property
    def distance(self) -> float:
        return self.trace.distance

    @property
    def peak(self) -> int:
        return self.trace.peak_occupancy

    @property
    def terminal_path_length(self) -> float:
        return sum(p.length for p in self.terminals.paths)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage attached
        raise StageError(name, exc) from exc


def solve_tree(inst: RbpInstance) -> Solution:
    if not inst.is_tree:
        raise StageError("input", ValueError("instance is not a tree; embed it first"))
    padded = _stage("pad", pad_to_window_multiple, inst)
    windows = _stage("windows", partition_windows, padded)
    terminals = _stage("terminals", find_terminals, padded)
    lp1 = _stage("lp1", lambda: solve_lp(build_lp1(padded, terminals)))
    intervals = _stage("intervals", derive_intervals, lp1.x, windows, padded.n)
    lp2 = _stage("lp2", lambda: solve_lp(build_lp2_directed(padded, terminals, intervals)))
    cover = _stage("cover", greedy_extension, padded, terminals, intervals)
    trace = _stage("server", run_cover_server, padded, terminals, cover)
    sol = Solution(padded, terminals, lp1, intervals, lp2, cover, trace)
    sol.checks = certify(sol)
    return sol


def certify(sol: Solution) -> dict[str, bool]:
    inst, cover = sol.instance, sol.cover
    k = inst.k
    sizes = [len(b) for b in cover.batches]
    length = sol.cover_length
    checks = {
        "interval_respecting": respects_intervals(cover, sol.intervals),
        "two_feasible": bool(check_two_feasibility(sol.intervals, sizes, k)),
        "connected": is_connected_cover(inst, sol.terminals, cover),
        "lp2_vs_lp1": sol.lp2.objective <= 2 * sol.lp1.objective + CERT_TOL,
        "cover_vs_lp2": length <= 2 * sol.lp2.objective + CERT_TOL,
        "arc_disjoint_bound": all(
            2 * max_disjoint_intervals(cover.demands[a].intervals) >= len(ms)
            for a, ms in cover.hitting_sets.items()
        ),
        "server_bound": sol.trace.distance <= sol.terminal_path_length + 2 * length + CERT_TOL,
        "batches_served": batches_served_in_iteration(sol),
        "peak_buffer": sol.trace.peak_occupancy <= 4 * k + 1,
        "trace_valid": bool(validate_trace(inst, sol.trace, 4 * k + 1)),
    }
    checks["feasible_cover"] = bool(is_feasible(cover, k))
    return checks


def batches_served_in_iteration(sol: Solution) -> bool:
    served_at = sol.trace.serve_index()
    ends = sol.trace.marks
    return all(served_at.get(j, len(sol.trace.events)) < ends[i]
               for i, batch in enumerate(sol.cover.batches) for j in batch)


def solve_general(inst: RbpInstance, seed: int = 0) -> Solution:
    """Embed the instance's shortest-path metric into a random tree and solve there."""
    embedded = _stage("embed", embed_metric, inst.distance_matrix, seed)
    tinst = tree_instance(inst, embedded)
    sol = solve_tree(tinst)
    padded = _stage("pad", pad_to_window_multiple, inst)
    pulled = _stage("pull_back", pull_back_schedule, sol.trace, embedded.leaf_map, padded)
    tree_cost = sol.trace.distance
    sol.embedding = embedded
    sol.original = padded
    sol.checks["pulled_back_valid"] = bool(validate_trace(padded, pulled, 4 * inst.k + 1))
    sol.checks["pulled_back_cheaper"] = pulled.distance <= tree_cost + CERT_TOL
    sol.tree_trace = sol.trace
    sol.trace = pulled
    return sol
