"""Greedy extension: round the interval LP into an interval request cover.

Each cut arc gets a minimal hitting set of its requests' service intervals,
chosen from windows already reachable at the arc's head: windows whose
terminal path passes through the head, or windows already bought by the
arcs continuing past the head.  Arcs are processed nearest-the-paths first.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass

from rbp.instance import RbpInstance
from rbp.intervals import ServiceIntervals, check_batch_prefix
from rbp.terminals import Terminals
from rbp.tree import Arc


class CoverError(RuntimeError):
    pass


@dataclass(frozen=True)
class ArcDemand:
    arc: Arc
    requests: tuple[int, ...]              # C(a)
    intervals: tuple[tuple[int, int], ...]  # I(a), aligned with requests

    @property
    def is_cut(self) -> bool:
        return bool(self.requests)


@dataclass(frozen=True)
class RequestCover:
    batches: tuple[tuple[int, ...], ...]
    edge_sets: tuple[frozenset, ...]
    arc_sets: tuple[frozenset, ...]
    assign: tuple[int, ...]
    hitting_sets: dict    # arc -> sorted tuple of windows, M(a)
    demands: dict         # arc -> ArcDemand
    beta: int = 2

    @property
    def m(self) -> int:
        return len(self.batches)


def compute_arc_demands(inst: RbpInstance, terminals: Terminals,
                        intervals: ServiceIntervals) -> dict[Arc, ArcDemand]:
    tree = inst.tree
    path_sets = terminals.path_vertex_sets()
    members = defaultdict(list)
    for j in range(inst.n):
        lo, hi = intervals.interval(j)
        target = frozenset().union(*path_sets[lo : hi + 1])
        for arc in tree.path_to_subgraph(inst.requests[j], target).arcs:
            members[arc].append(j)
    return {
        arc: ArcDemand(arc, tuple(js), tuple(intervals.interval(j) for j in js))
        for arc, js in sorted(members.items())
    }


def hits(windows, intervals) -> bool:
    ws = sorted(windows)
    return all(_hit(ws, lo, hi) for lo, hi in intervals)


def _hit(sorted_windows, lo, hi) -> bool:
    p = bisect_left(sorted_windows, lo)
    return p < len(sorted_windows) and sorted_windows[p] <= hi


def minimal_hitting_set(candidates, intervals) -> tuple[int, ...]:
    """Shrink ``candidates`` to an inclusion-minimal hitting set, dropping high windows first."""
    chosen = sorted(set(candidates))
    if not hits(chosen, intervals):
        raise CoverError("candidate windows do not hit every interval")
    for w in sorted(chosen, reverse=True):
        trial = [x for x in chosen if x != w]
        if hits(trial, intervals):
            chosen = trial
    return tuple(chosen)


def max_disjoint_intervals(intervals) -> int:
    """D(a): earliest-right-endpoint interval scheduling on closed integer intervals."""
    count, last = 0, None
    for lo, hi in sorted(intervals, key=lambda iv: (iv[1], iv[0])):
        if last is None or lo > last:
            count += 1
            last = hi
    return count


def greedy_extension(inst: RbpInstance, terminals: Terminals,
                     intervals: ServiceIntervals) -> RequestCover:
    tree = inst.tree
    m = terminals.m
    path_sets = terminals.path_vertex_sets()
    demands = compute_arc_demands(inst, terminals, intervals)

    pending = set(demands)
    hitting: dict[Arc, tuple[int, ...]] = {}
    arc_sets = [set() for _ in range(m)]
    limit = len(demands)
    processed = 0
    while pending:
        a = min(pending)
        # descend to an arc with no pending predecessor
        steps = 0
        while True:
            nxt = min((b for b in pending if tree.precedes(b, a)), default=None)
            if nxt is None:
                break
            a = nxt
            steps += 1
            if steps > limit:
                raise CoverError("precedence descent does not terminate")
        u, v = a
        candidates = {i for i in range(m) if v in path_sets[i]}
        for b in tree.arcs_out_of(v):
            if b.head != u:
                candidates.update(hitting.get(b, ()))
        try:
            chosen = minimal_hitting_set(candidates, demands[a].intervals)
        except CoverError as exc:
            raise CoverError(f"arc {a}: {exc}") from None
        hitting[a] = chosen
        for i in chosen:
            arc_sets[i].add(a)
        pending.discard(a)
        processed += 1
        if processed > limit:
            raise CoverError("processed more arcs than exist")

    touched = [set() for _ in range(m)]
    for i in range(m):
        touched[i].update(path_sets[i])
        for arc in arc_sets[i]:
            touched[i].update(arc)
    assign = []
    for j in range(inst.n):
        lo, hi = intervals.interval(j)
        i = next((i for i in range(lo, hi + 1) if inst.requests[j] in touched[i]), None)
        if i is None:
            raise CoverError(f"request {j} is not reachable within its service interval")
        assign.append(i)

    batches = [[] for _ in range(m)]
    for j, i in enumerate(assign):
        batches[i].append(j)
    return RequestCover(
        batches=tuple(tuple(b) for b in batches),
        edge_sets=tuple(frozenset(a.edge for a in arcs) for arcs in arc_sets),
        arc_sets=tuple(frozenset(arcs) for arcs in arc_sets),
        assign=tuple(assign),
        hitting_sets=hitting,
        demands=demands,
    )


def cover_length(inst: RbpInstance, cover: RequestCover) -> float:
    tree = inst.tree
    return sum(tree.length[e] for edges in cover.edge_sets for e in edges)


# --- certificates ------------------------------------------------------------


def is_connected_cover(inst: RbpInstance, terminals: Terminals, cover: RequestCover) -> bool:
    """``E_i + P_i`` connected and spanning ``B_i`` for every window."""
    for i in range(cover.m):
        verts = set(terminals.paths[i].vertices)
        adj = defaultdict(list)
        for u, v in cover.edge_sets[i]:
            adj[u].append(v)
            adj[v].append(u)
        seen = set(verts)
        stack = list(verts)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        endpoints = {x for e in cover.edge_sets[i] for x in e}
        if not endpoints <= seen:
            return False
        if any(inst.requests[j] not in seen for j in cover.batches[i]):
            return False
    return True


def respects_intervals(cover: RequestCover, intervals: ServiceIntervals) -> bool:
    return all(intervals.release[j] <= i <= intervals.deadline[j] for j, i in enumerate(cover.assign))


def is_feasible(cover: RequestCover, k: int, beta: int | None = None):
    return check_batch_prefix([len(b) for b in cover.batches], k, cover.beta if beta is None else beta)
