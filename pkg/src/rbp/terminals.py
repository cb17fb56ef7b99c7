"""Per-window terminals: vertices any capacity-k schedule must visit while reading a window.

For each edge, the side holding at most ``k`` of the window's ``2k+1`` requests
points toward the other side.  The resulting orientation has a single sink.
"""

from __future__ import annotations

from dataclasses import dataclass

from rbp.instance import RbpInstance, partition_windows
from rbp.tree import Arc, TreePath, edge_key


class TerminalError(RuntimeError):
    pass


@dataclass(frozen=True)
class Terminals:
    vertices: tuple[int, ...]      # v_1..v_m (0-based window index)
    paths: tuple[TreePath, ...]    # paths[i] runs from the previous terminal (or start) to vertices[i]
    start: int

    @property
    def m(self) -> int:
        return len(self.vertices)

    def previous(self, i: int) -> int:
        return self.start if i == 0 else self.vertices[i - 1]

    def path_vertex_sets(self) -> list[frozenset[int]]:
        return [frozenset(p.vertices) for p in self.paths]

    def path_edge_sets(self) -> list[frozenset[tuple[int, int]]]:
        return [frozenset(p.edges) for p in self.paths]


def window_counts(inst: RbpInstance, i: int) -> list[int]:
    size = inst.window_size
    counts = [0] * inst.vertex_count
    for j in range(i * size, (i + 1) * size):
        counts[inst.requests[j]] += 1
    return counts


def orient_window(inst: RbpInstance, i: int) -> dict[tuple[int, int], Arc]:
    tree = inst.tree
    counts = window_counts(inst, i)
    total = sum(counts)
    if total != inst.window_size:
        raise TerminalError(f"window {i} holds {total} requests, expected {inst.window_size}")
    below = tree.subtree_sums(counts)
    orientation = {}
    for v in range(inst.vertex_count):
        p = tree.parent[v]
        if p < 0:
            continue
        child_side, parent_side = below[v], total - below[v]
        # sides partition 2k+1 requests, so exactly one of them has <= k
        if (child_side <= inst.k) == (parent_side <= inst.k):
            raise TerminalError(f"edge ({p}, {v}) has no unique orientation in window {i}")
        orientation[edge_key(p, v)] = Arc(v, p) if child_side <= inst.k else Arc(p, v)
    return orientation


def find_terminal(orientation: dict[tuple[int, int], Arc], vertex_count: int) -> int:
    outdeg = [0] * vertex_count
    for arc in orientation.values():
        outdeg[arc.tail] += 1
    sinks = [v for v in range(vertex_count) if outdeg[v] == 0]
    if len(sinks) != 1:
        raise TerminalError(f"orientation has {len(sinks)} sinks, expected exactly one")
    return sinks[0]


def find_terminals(inst: RbpInstance) -> Terminals:
    windows = partition_windows(inst)
    tree = inst.tree
    verts = []
    paths = []
    prev = inst.start_vertex
    for i in range(windows.m):
        v = find_terminal(orient_window(inst, i), inst.vertex_count)
        verts.append(v)
        paths.append(tree.path_between(prev, v))
        prev = v
    return Terminals(tuple(verts), tuple(paths), inst.start_vertex)
