"""Buffer-constrained servers, schedule traces, and a trace validator.

A trace is a list of events ``("R", j)`` (read request ``j``), ``("M", u, v, d)``
(move from ``u`` to ``v``, distance ``d``) and ``("S", j)`` (serve ``j``).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from rbp.cover import RequestCover, is_connected_cover
from rbp.instance import RbpInstance, partition_windows
from rbp.terminals import Terminals
from rbp.tree import edge_key

DIST_TOL = 1e-9


class ServerError(RuntimeError):
    pass


@dataclass
class ServerTrace:
    start: int
    events: list[tuple] = field(default_factory=list)
    # event count at the end of each iteration, for servers that work in iterations
    marks: list[int] = field(default_factory=list)

    @property
    def distance(self) -> float:
        return sum(e[3] for e in self.events if e[0] == "M")

    @property
    def occupancy(self) -> list[int]:
        occ, out = 0, []
        for e in self.events:
            if e[0] == "R":
                occ += 1
            elif e[0] == "S":
                occ -= 1
            out.append(occ)
        return out

    @property
    def peak_occupancy(self) -> int:
        return max(self.occupancy, default=0)

    def positions(self) -> list[int]:
        """Server position after each event."""
        pos, out = self.start, []
        for e in self.events:
            if e[0] == "M":
                pos = e[2]
            out.append(pos)
        return out

    def serve_index(self) -> dict[int, int]:
        return {e[1]: p for p, e in enumerate(self.events) if e[0] == "S"}

    def read_index(self) -> dict[int, int]:
        return {e[1]: p for p, e in enumerate(self.events) if e[0] == "R"}


class _Walker:
    """Emits events while tracking position and buffer contents."""

    def __init__(self, inst: RbpInstance, start: int):
        self.inst = inst
        self.trace = ServerTrace(start)
        self.pos = start
        self.buffered = defaultdict(list)  # vertex -> request ids

    def read(self, j: int):
        self.trace.events.append(("R", j))
        self.buffered[self.inst.requests[j]].append(j)

    def serve_here(self, only=None):
        waiting = self.buffered.get(self.pos, [])
        keep = []
        for j in waiting:
            if only is None or only(j):
                self.trace.events.append(("S", j))
            else:
                keep.append(j)
        self.buffered[self.pos] = keep

    def step(self, v: int, length: float):
        self.trace.events.append(("M", self.pos, v, length))
        self.pos = v

    def walk_tree_path(self, path_vertices, serve=True):
        tree = self.inst.tree
        for v in path_vertices[1:]:
            self.step(v, tree.edge_length(self.pos, v))
            if serve:
                self.serve_here()


def run_cover_server(inst: RbpInstance, terminals: Terminals, cover: RequestCover) -> ServerTrace:
    """Read each window, then walk its terminal path with Euler-tour detours into the cover's edges."""
    windows = partition_windows(inst)
    if not is_connected_cover(inst, terminals, cover):
        raise ServerError("cover is not connected/spanning in some window")
    tree = inst.tree
    w = _Walker(inst, inst.start_vertex)
    for i in range(windows.m):
        for j in windows.requests_in(i):
            w.read(j)
        path = terminals.paths[i]
        on_path = set(path.vertices)
        path_edges = set(path.edges)
        adj = defaultdict(list)
        for u, v in sorted(cover.edge_sets[i] - path_edges):
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj.values():
            nbrs.sort()

        def tour(p, parent):
            for c in adj[p]:
                if c == parent or c in on_path:
                    continue
                w.step(c, tree.edge_length(p, c))
                w.serve_here()
                tour(c, p)
                w.step(p, tree.edge_length(p, c))
                w.serve_here()

        if w.pos != path.vertices[0]:
            raise ServerError(f"iteration {i} starts at {w.pos}, path starts at {path.vertices[0]}")
        w.serve_here()
        for p in path.vertices:
            if p != w.pos:
                w.step(p, tree.edge_length(w.pos, p))
                w.serve_here()
            tour(p, None)
        w.trace.marks.append(len(w.trace.events))
    return w.trace


def inorder_cost(inst: RbpInstance) -> float:
    """Cost of the forced capacity-1 schedule: visit requests in input order."""
    total, pos = 0.0, inst.start_vertex
    for r in inst.requests:
        total += inst.distance(pos, r)
        pos = r
    return total


def inorder_trace(inst: RbpInstance) -> ServerTrace:
    w = _Walker(inst, inst.start_vertex)
    for j, r in enumerate(inst.requests):
        w.read(j)
        if r != w.pos:
            if inst.is_tree:
                w.walk_tree_path(inst.tree.path_between(w.pos, r).vertices, serve=False)
            else:
                w.step(r, inst.distance(w.pos, r))
        w.serve_here()
    return w.trace


def run_lowerbound_server(lower) -> ServerTrace:
    """Sweep the line left to right; at ``p_i`` serve every request whose destination label is ``i``.

    Input is read lazily: the server reads up to the end of the ``i``-th leaf block
    while parked at ``p_i``.
    """
    inst = lower.instance
    w = _Walker(inst, inst.start_vertex)
    nxt = 0
    for i in range(lower.leaves):
        if w.pos != i:
            w.walk_tree_path(inst.tree.path_between(w.pos, i).vertices, serve=False)
        w.serve_here()
        end = lower.block_end(i)
        while nxt < end:
            w.read(nxt)
            w.serve_here()
            nxt += 1
        w.trace.marks.append(len(w.trace.events))
    return w.trace


# --- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    index: int | None = None
    reason: str = ""
    distance: float = 0.0
    peak: int = 0

    def __bool__(self) -> bool:
        return self.ok


def validate_trace(inst: RbpInstance, trace: ServerTrace, capacity: int,
                   declared_distance: float | None = None) -> Verdict:
    pos = trace.start
    if pos != inst.start_vertex:
        return Verdict(False, None, f"trace starts at {pos}, instance starts at {inst.start_vertex}")
    next_read = 0
    waiting: set[int] = set()
    served: set[int] = set()
    dist = 0.0
    peak = 0
    for idx, ev in enumerate(trace.events):
        kind = ev[0]
        if kind == "R":
            j = ev[1]
            if j != next_read:
                return Verdict(False, idx, f"read {j} out of order (expected {next_read})")
            next_read += 1
            waiting.add(j)
            if len(waiting) > capacity:
                return Verdict(False, idx, f"buffer holds {len(waiting)} > capacity {capacity}")
        elif kind == "S":
            j = ev[1]
            if j in served:
                return Verdict(False, idx, f"request {j} served twice")
            if j not in waiting:
                return Verdict(False, idx, f"request {j} served before being read")
            if inst.requests[j] != pos:
                return Verdict(False, idx, f"request {j} served away from its vertex")
            waiting.discard(j)
            served.add(j)
        elif kind == "M":
            _, u, v, length = ev
            if u != pos:
                return Verdict(False, idx, f"move starts at {u} but server is at {pos}")
            true = inst.distance(u, v)
            if abs(length - true) > DIST_TOL * max(1.0, true):
                return Verdict(False, idx, f"move {u}->{v} claims length {length}, metric says {true}")
            dist += true
            pos = v
        else:
            return Verdict(False, idx, f"unknown event {ev!r}")
        peak = max(peak, len(waiting))
    if next_read != inst.n or waiting:
        return Verdict(False, len(trace.events), "trace ends with unread or unserved requests")
    if declared_distance is not None and abs(declared_distance - dist) > 1e-6 * max(1.0, dist):
        return Verdict(False, None, f"declared distance {declared_distance} != recomputed {dist}")
    return Verdict(True, None, "", dist, peak)


# --- text format ----------------------------------------------------------------


def format_trace(trace: ServerTrace) -> str:
    lines = []
    for ev in trace.events:
        if ev[0] == "M":
            lines.append(f"M {ev[1] + 1} {ev[2] + 1} {ev[3]!r}")
        else:
            lines.append(f"{ev[0]} {ev[1] + 1}")
    lines.append(f"dist {trace.distance!r}")
    lines.append(f"peak {trace.peak_occupancy}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str, start: int) -> tuple[ServerTrace, float | None, int | None]:
    """Parse the event format; returns the trace plus declared ``dist`` and ``peak`` if present."""
    trace = ServerTrace(start)
    dist = peak = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] in ("R", "S") and len(parts) == 2:
                trace.events.append((parts[0], int(parts[1]) - 1))
            elif parts[0] == "M" and len(parts) == 4:
                trace.events.append(("M", int(parts[1]) - 1, int(parts[2]) - 1, float(parts[3])))
            elif parts[0] == "dist" and len(parts) == 2:
                dist = float(parts[1])
            elif parts[0] == "peak" and len(parts) == 2:
                peak = int(parts[1])
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: malformed trace event {line!r}") from None
    return trace, dist, peak


def edge_traversals(trace: ServerTrace, lo: int = 0, hi: int | None = None) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for ev in trace.events[lo:hi]:
        if ev[0] == "M":
            counts[edge_key(ev[1], ev[2])] += 1
    return dict(counts)
