"""Reordering-buffer instances: data model, window partition, padding, file I/O.

Vertex ids are 0-based internally and 1-based in the text format.  Windows are
0-based internally: window ``i`` holds requests ``(2k+1)*i .. (2k+1)*(i+1)-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from rbp.tree import Tree

MAGIC = "RBP"
VERSION = "1"


class InstanceError(ValueError):
    """Raised for malformed or invalid instances.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class RbpInstance:
    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]
    requests: tuple[int, ...]
    k: int
    start_vertex: int
    is_tree: bool = True
    # length of the request sequence before padding; None means "never padded"
    original_length: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v), float(d)) for u, v, d in self.edges))
        object.__setattr__(self, "requests", tuple(int(r) for r in self.requests))
        validate(self)

    @property
    def n(self) -> int:
        return len(self.requests)

    @property
    def window_size(self) -> int:
        return 2 * self.k + 1

    @property
    def real_length(self) -> int:
        return self.n if self.original_length is None else self.original_length

    @cached_property
    def tree(self) -> Tree:
        if not self.is_tree:
            raise InstanceError("instance is not a tree metric")
        return Tree(self.vertex_count, self.edges)

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs shortest-path distances of the edge graph."""
        if self.vertex_count == 1:
            return np.zeros((1, 1))
        rows = [u for u, v, _ in self.edges]
        cols = [v for u, v, _ in self.edges]
        # zero-length edges would vanish from a sparse matrix; nudge them to a tiny positive
        data = [d if d > 0 else 1e-300 for _, _, d in self.edges]
        graph = csr_matrix((data, (rows, cols)), shape=(self.vertex_count,) * 2)
        dist = shortest_path(graph, directed=False)
        dist[dist < 1e-200] = 0.0
        return dist

    def distance(self, u: int, v: int) -> float:
        if self.is_tree:
            return self.tree.distance(u, v)
        return float(self.distance_matrix[u, v])


def validate(inst: RbpInstance) -> None:
    if inst.vertex_count < 1:
        raise InstanceError("vertex_count must be positive")
    if inst.k < 1:
        raise InstanceError("k must be positive")
    nv = inst.vertex_count
    for u, v, d in inst.edges:
        if not (0 <= u < nv and 0 <= v < nv):
            raise InstanceError(f"edge ({u + 1}, {v + 1}) references an unknown vertex")
        if u == v:
            raise InstanceError(f"self-loop at vertex {u + 1}")
        if d < 0 or not np.isfinite(d):
            raise InstanceError(f"edge ({u + 1}, {v + 1}) has invalid length {d}")
    if not 0 <= inst.start_vertex < nv:
        raise InstanceError(f"start vertex {inst.start_vertex + 1} is unknown")
    for r in inst.requests:
        if not 0 <= r < nv:
            raise InstanceError(f"request at unknown vertex {r + 1}")
    if not _connected(nv, inst.edges):
        raise InstanceError("graph is disconnected")
    if inst.is_tree and len(inst.edges) != nv - 1:
        raise InstanceError("not a tree: edge count must equal vertex_count - 1")


def _connected(nv: int, edges) -> bool:
    if nv == 1:
        return True
    rows = [u for u, _, _ in edges]
    cols = [v for _, v, _ in edges]
    graph = csr_matrix((np.ones(len(edges)), (rows, cols)), shape=(nv, nv))
    count, _ = connected_components(graph, directed=False)
    return count == 1


def pad_to_window_multiple(inst: RbpInstance) -> RbpInstance:
    """Append copies of the last request until ``n`` is a multiple of ``2k+1``.

    The copies sit at the last real request's vertex, so any schedule that
    visits that vertex after reading them serves them at no extra distance.
    """
    if inst.n == 0:
        raise InstanceError("empty request sequence")
    original = inst.real_length
    extra = (-inst.n) % inst.window_size
    requests = inst.requests + (inst.requests[-1],) * extra
    return replace(inst, requests=requests, original_length=original)


@dataclass(frozen=True)
class WindowPartition:
    m: int
    window_size: int

    def window_of(self, j: int) -> int:
        return j // self.window_size

    def requests_in(self, i: int) -> range:
        return range(i * self.window_size, (i + 1) * self.window_size)


def partition_windows(inst: RbpInstance) -> WindowPartition:
    if inst.n % inst.window_size:
        raise InstanceError(f"n={inst.n} is not a multiple of 2k+1={inst.window_size}; pad first")
    return WindowPartition(inst.n // inst.window_size, inst.window_size)


# --- text format -------------------------------------------------------------


def parse_instance(text: str) -> RbpInstance:
    k = start = nv = None
    is_tree = True
    edges: list[tuple[int, int, float]] = []
    edge_lines: list[int] = []
    requests: list[int] = []
    request_lines: list[int] = []
    seen_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not seen_header:
            if parts != [MAGIC, VERSION]:
                raise InstanceError(f"expected header '{MAGIC} {VERSION}'", lineno)
            seen_header = True
            continue
        key, args = parts[0], parts[1:]
        try:
            if key == "k":
                (k,) = map(int, args)
            elif key == "start":
                (start,) = map(int, args)
                start_line = lineno
            elif key == "vertices":
                (nv,) = map(int, args)
            elif key == "tree":
                (flag,) = map(int, args)
                if flag not in (0, 1):
                    raise ValueError
                is_tree = bool(flag)
            elif key == "edge":
                u, v, d = args
                edges.append((int(u), int(v), float(d)))
                edge_lines.append(lineno)
            elif key == "requests":
                ids = [int(a) for a in args]
                requests.extend(ids)
                request_lines.extend([lineno] * len(ids))
            else:
                raise InstanceError(f"unknown directive '{key}'", lineno)
        except ValueError:
            raise InstanceError(f"malformed '{key}' line", lineno) from None

    if not seen_header:
        raise InstanceError("empty instance file")
    for name, val in (("k", k), ("start", start), ("vertices", nv)):
        if val is None:
            raise InstanceError(f"missing '{name}' line")
    if nv < 1:
        raise InstanceError("vertex count must be positive")
    if k < 1:
        raise InstanceError("k must be positive")

    for (u, v, d), ln in zip(edges, edge_lines):
        if not (1 <= u <= nv and 1 <= v <= nv):
            raise InstanceError(f"unknown vertex id in edge ({u}, {v})", ln)
        if d < 0:
            raise InstanceError(f"negative edge length {d}", ln)
    for r, ln in zip(requests, request_lines):
        if not 1 <= r <= nv:
            raise InstanceError(f"unknown vertex id {r}", ln)
    if not 1 <= start <= nv:
        raise InstanceError(f"unknown start vertex {start}", start_line)
    if not requests:
        raise InstanceError("no requests")

    zero_based = [(u - 1, v - 1, d) for u, v, d in edges]
    if not _connected(nv, zero_based):
        raise InstanceError("graph is disconnected" + (" (not a tree)" if is_tree else ""))
    if is_tree and len(edges) != nv - 1:
        raise InstanceError(f"not a tree: {len(edges)} edges on {nv} vertices")
    return RbpInstance(
        vertex_count=nv,
        edges=tuple(zero_based),
        requests=tuple(r - 1 for r in requests),
        k=k,
        start_vertex=start - 1,
        is_tree=is_tree,
    )


def format_instance(inst: RbpInstance, per_line: int = 20) -> str:
    lines = [f"{MAGIC} {VERSION}", f"k {inst.k}", f"start {inst.start_vertex + 1}", f"vertices {inst.vertex_count}"]
    if not inst.is_tree:
        lines.append("tree 0")
    for u, v, d in inst.edges:
        lines.append(f"edge {u + 1} {v + 1} {d!r}")
    reqs = [str(r + 1) for r in inst.requests]
    for pos in range(0, len(reqs), per_line):
        lines.append("requests " + " ".join(reqs[pos : pos + per_line]))
    return "\n".join(lines) + "\n"


def read_instance(path) -> RbpInstance:
    with open(path) as fh:
        return parse_instance(fh.read())


def write_instance(inst: RbpInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_instance(inst))
