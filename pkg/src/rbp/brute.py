"""Exact RBP optimum by Dijkstra over (position, buffered set, next read) states.

Serving is free at the current vertex, so it is folded into every transition:
after a move or a read, everything buffered at the server's vertex is served.
Moves only ever target a vertex holding a buffered request.
"""

from __future__ import annotations

import heapq
import itertools

from rbp.instance import RbpInstance
from rbp.server import ServerTrace

DEFAULT_LIMIT = 14


class SizeLimitError(ValueError):
    pass


def _search(inst: RbpInstance, capacity: int, limit: int, want_trace: bool):
    n = inst.n
    if n > limit:
        raise SizeLimitError(f"n={n} exceeds brute-force limit {limit}")
    if capacity < 1:
        raise ValueError("capacity must be positive")
    req = inst.requests
    # masks of requests at each vertex, for the free serve on arrival
    at_vertex: dict[int, int] = {}
    for j, v in enumerate(req):
        at_vertex[v] = at_vertex.get(v, 0) | (1 << j)

    start = (inst.start_vertex, 0, 0)
    best = {start: 0.0}
    parent = {start: None}
    tie = itertools.count()
    heap = [(0.0, next(tie), start)]
    while heap:
        cost, _, state = heapq.heappop(heap)
        if cost > best[state]:
            continue
        pos, mask, nr = state
        if nr == n and mask == 0:
            return cost, (_rebuild(inst, parent, state) if want_trace else None)
        succ = []
        if nr < n and mask.bit_count() < capacity:
            if req[nr] == pos:
                succ.append(((pos, mask, nr + 1), 0.0, ("read", nr)))
            else:
                succ.append(((pos, mask | (1 << nr), nr + 1), 0.0, ("read", nr)))
        targets = {req[j] for j in range(nr) if mask >> j & 1}
        for v in targets:
            succ.append(((v, mask & ~at_vertex[v], nr), inst.distance(pos, v), ("move", v)))
        for nxt, step, action in succ:
            c = cost + step
            if c < best.get(nxt, float("inf")) - 1e-12:
                best[nxt] = c
                parent[nxt] = (state, action)
                heapq.heappush(heap, (c, next(tie), nxt))
    raise RuntimeError("search exhausted without serving every request")


def _rebuild(inst: RbpInstance, parent, state) -> ServerTrace:
    steps = []
    while parent[state] is not None:
        prev, action = parent[state]
        steps.append((prev, action, state))
        state = prev
    steps.reverse()
    trace = ServerTrace(inst.start_vertex)
    ev = trace.events
    for (pos, mask, nr), (kind, arg), (npos, nmask, _) in steps:
        if kind == "read":
            ev.append(("R", arg))
            if inst.requests[arg] == pos:
                ev.append(("S", arg))
            continue
        if inst.is_tree:
            verts = inst.tree.path_between(pos, arg).vertices
            for u, v in zip(verts, verts[1:]):
                ev.append(("M", u, v, inst.tree.edge_length(u, v)))
        else:
            ev.append(("M", pos, arg, inst.distance(pos, arg)))
        gone = mask & ~nmask
        ev.extend(("S", j) for j in range(nr) if gone >> j & 1)
    return trace


def solve_exact(inst: RbpInstance, limit: int = DEFAULT_LIMIT) -> tuple[float, ServerTrace]:
    return _search(inst, inst.k, limit, True)


def solve_exact_capacity(inst: RbpInstance, capacity: int, limit: int = DEFAULT_LIMIT) -> float:
    return _search(inst, capacity, limit, False)[0]


def solve_exact_trace(inst: RbpInstance, capacity: int, limit: int = DEFAULT_LIMIT) -> tuple[float, ServerTrace]:
    return _search(inst, capacity, limit, True)
