"""Weighted-tree primitives: distances, unique paths, arcs and arc precedence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple


class Arc(NamedTuple):
    tail: int
    head: int

    def reversed(self) -> "Arc":
        return Arc(self.head, self.tail)

    @property
    def edge(self) -> tuple[int, int]:
        return edge_key(self.tail, self.head)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TreePath:
    vertices: tuple[int, ...]
    length: float

    @property
    def arcs(self) -> tuple[Arc, ...]:
        vs = self.vertices
        return tuple(Arc(vs[p], vs[p + 1]) for p in range(len(vs) - 1))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(a.edge for a in self.arcs)

    def __len__(self) -> int:
        return max(len(self.vertices) - 1, 0)


class Tree:
    """A tree on vertices ``0..n-1`` rooted at 0.

    Ancestor queries use DFS entry/exit times; paths walk parent pointers up to
    the lowest common ancestor.
    """

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int, float]]):
        self.vertex_count = vertex_count
        self.adj: list[list[int]] = [[] for _ in range(vertex_count)]
        self.length: dict[tuple[int, int], float] = {}
        for u, v, d in edges:
            self.adj[u].append(v)
            self.adj[v].append(u)
            self.length[edge_key(u, v)] = float(d)
        for nbrs in self.adj:
            nbrs.sort()
        if len(self.length) != vertex_count - 1:
            raise ValueError("edge list is not a tree")

        self.parent = [-1] * vertex_count
        self.depth = [0] * vertex_count
        self.root_dist = [0.0] * vertex_count
        self.tin = [0] * vertex_count
        self.tout = [0] * vertex_count
        self.order: list[int] = []  # preorder

        clock = 0
        seen = [False] * vertex_count
        seen[0] = True
        stack = [(0, iter(self.adj[0]))]
        self.tin[0] = clock
        self.order.append(0)
        while stack:
            v, it = stack[-1]
            child = next((c for c in it if not seen[c]), None)
            if child is None:
                clock += 1
                self.tout[v] = clock
                stack.pop()
                continue
            seen[child] = True
            self.parent[child] = v
            self.depth[child] = self.depth[v] + 1
            self.root_dist[child] = self.root_dist[v] + self.length[edge_key(v, child)]
            clock += 1
            self.tin[child] = clock
            self.order.append(child)
            stack.append((child, iter(self.adj[child])))
        if not all(seen):
            raise ValueError("edge list is not connected")

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.length)

    def edge_length(self, u: int, v: int) -> float:
        return self.length[edge_key(u, v)]

    def is_ancestor(self, a: int, v: int) -> bool:
        """True if ``a`` is ``v`` or an ancestor of ``v``."""
        return self.tin[a] <= self.tin[v] and self.tout[v] <= self.tout[a]

    def lca(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u

    def distance(self, u: int, v: int) -> float:
        w = self.lca(u, v)
        return self.root_dist[u] + self.root_dist[v] - 2 * self.root_dist[w]

    def path_between(self, u: int, v: int) -> TreePath:
        w = self.lca(u, v)
        up = [u]
        while up[-1] != w:
            up.append(self.parent[up[-1]])
        down = [v]
        while down[-1] != w:
            down.append(self.parent[down[-1]])
        verts = tuple(up + down[-2::-1])
        return TreePath(verts, self.distance(u, v))

    def path_to_subgraph(self, u: int, target) -> TreePath:
        """Path from ``u`` to the nearest vertex of the connected vertex set ``target``."""
        if not target:
            raise ValueError("target vertex set is empty")
        if u in target:
            return TreePath((u,), 0.0)
        anchor = next(iter(target))
        full = self.path_between(u, anchor).vertices
        cut = next(p for p, x in enumerate(full) if x in target)
        verts = full[: cut + 1]
        return TreePath(verts, self.distance(u, verts[-1]))

    def side_contains(self, arc: Arc, x: int) -> bool:
        """Is ``x`` in the component of ``tree - arc.edge`` containing ``arc.head``?"""
        t, h = arc
        if self.parent[h] == t:
            return self.is_ancestor(h, x)
        if self.parent[t] == h:
            return not self.is_ancestor(t, x)
        raise ValueError(f"{arc} is not a tree arc")

    def precedes(self, a: Arc, b: Arc) -> bool:
        """``a`` precedes ``b``: some directed tree path traverses ``b`` and later ``a``."""
        if a == b:
            return False
        # a lies beyond b's head, and b lies behind a's tail
        return (
            self.side_contains(b, a.tail)
            and self.side_contains(b, a.head)
            and not self.side_contains(a, b.tail)
            and not self.side_contains(a, b.head)
        )

    def arcs_out_of(self, v: int) -> list[Arc]:
        return [Arc(v, w) for w in self.adj[v]]

    def subtree_sums(self, weight) -> list[float]:
        """Sum of ``weight[x]`` over the rooted subtree of every vertex."""
        total = list(weight)
        for v in reversed(self.order):
            p = self.parent[v]
            if p >= 0:
                total[p] += total[v]
        return total
