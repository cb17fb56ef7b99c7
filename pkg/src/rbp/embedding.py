"""Randomized hierarchical tree embedding of a finite metric (random permutation + random radius scale).

Distances are first scaled so the smallest positive distance is 1.  Children of
a level-``i`` cluster are cut with radius ``beta * 2^(i-3)``, so a level-``i``
cluster below the top has diameter at most ``beta * 2^(i-1)``.  The edge from a
level-``i`` node to its child weighs ``beta * 2^(i-2)`` (times the scale); two
points first split at level ``i`` are ``beta * (2^i - 1)`` apart in the tree, at
least the diameter bound, so the embedding never contracts.  The top level is
chosen with ``2^top >= diameter + 1`` for the same reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from rbp.instance import RbpInstance
from rbp.server import ServerTrace
from rbp.tree import Tree

METRIC_TOL = 1e-9


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddedTree:
    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]
    leaf_map: tuple[int, ...]   # original point -> tree vertex
    levels: tuple[int, ...]     # level of every tree vertex (leaves are 0)
    seed: int

    @property
    def tree(self) -> Tree:
        return Tree(self.vertex_count, self.edges)

    def distances(self) -> np.ndarray:
        """Tree distances between the embedded points."""
        tree = self.tree
        n = len(self.leaf_map)
        out = np.zeros((n, n))
        for a in range(n):
            for b in range(a + 1, n):
                out[a, b] = out[b, a] = tree.distance(self.leaf_map[a], self.leaf_map[b])
        return out


def check_metric(dist: np.ndarray) -> None:
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MetricError("distance matrix must be square")
    n = d.shape[0]
    scale = max(1.0, float(np.abs(d).max()) if n else 1.0)
    tol = METRIC_TOL * scale
    if np.any(np.abs(np.diag(d)) > tol):
        raise MetricError("diagonal must be zero")
    if not np.allclose(d, d.T, atol=tol, rtol=0):
        i, j = np.argwhere(np.abs(d - d.T) > tol)[0]
        raise MetricError(f"asymmetric pair ({i}, {j})")
    off = d[~np.eye(n, dtype=bool)]
    if np.any(off <= 0):
        i, j = np.argwhere((d <= 0) & ~np.eye(n, dtype=bool))[0]
        raise MetricError(f"distinct points ({i}, {j}) at non-positive distance")
    for m in range(n):
        bad = d[:, [m]] + d[[m], :] < d - tol
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise MetricError(f"triangle inequality fails for triple ({i}, {m}, {j})")


def embed_metric(dist, seed: int) -> EmbeddedTree:
    d = np.asarray(dist, dtype=float)
    check_metric(d)
    n = d.shape[0]
    if n == 1:
        return EmbeddedTree(1, (), (0,), (0,), seed)

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    # density 1/(beta ln 2) on [1, 2)
    beta = 2.0 ** rng.random()

    unit = float(d[d > 0].min())
    scaled = d / unit
    top = max(1, math.ceil(math.log2(scaled.max() + 1.0)))

    edges: list[tuple[int, int, float]] = []
    levels = [top]
    leaf_map = [-1] * n
    frontier = [(0, list(range(n)))]  # (tree vertex, member points)
    for level in range(top, 0, -1):
        radius = beta * 2.0 ** (level - 3)
        weight = unit * beta * 2.0 ** (level - 2)
        nxt = []
        for node, members in frontier:
            left = set(members)
            for centre in perm:
                if not left:
                    break
                part = sorted(p for p in left if scaled[centre, p] <= radius)
                if not part:
                    continue
                left.difference_update(part)
                child = len(levels)
                levels.append(level - 1)
                edges.append((node, child, weight))
                nxt.append((child, part))
        frontier = nxt
    for node, members in frontier:
        if len(members) != 1:
            raise AssertionError("leaf cluster is not a singleton")
        leaf_map[members[0]] = node
    return EmbeddedTree(len(levels), tuple(edges), tuple(leaf_map), tuple(levels), seed)


def max_stretch(dist, embedded: EmbeddedTree) -> float:
    d = np.asarray(dist, dtype=float)
    t = embedded.distances()
    mask = ~np.eye(d.shape[0], dtype=bool)
    return float((t[mask] / d[mask]).max()) if mask.any() else 1.0


def tree_instance(inst: RbpInstance, embedded: EmbeddedTree) -> RbpInstance:
    """The same request sequence, placed on the embedding's leaves."""
    lm = embedded.leaf_map
    return RbpInstance(
        vertex_count=embedded.vertex_count,
        edges=embedded.edges,
        requests=tuple(lm[r] for r in inst.requests),
        k=inst.k,
        start_vertex=lm[inst.start_vertex],
        is_tree=True,
        original_length=inst.original_length,
    )


def pull_back_schedule(tree_trace: ServerTrace, leaf_map, original: RbpInstance) -> ServerTrace:
    """Replay the tree schedule on the original metric.

    Reads and serves keep their order; each serve is preceded by one direct move
    from the previous serve point, which by the triangle inequality and
    non-contraction costs no more than the tree walk it replaces.
    """
    preimage = {leaf: p for p, leaf in enumerate(leaf_map)}
    if preimage.get(tree_trace.start) != original.start_vertex:
        raise ValueError("tree trace does not start at the image of the original start vertex")
    out = ServerTrace(original.start_vertex, marks=[])
    pos = original.start_vertex
    for idx, ev in enumerate(tree_trace.events):
        if ev[0] == "S":
            target = original.requests[ev[1]]
            if target != pos:
                out.events.append(("M", pos, target, original.distance(pos, target)))
                pos = target
            out.events.append(ev)
        elif ev[0] == "R":
            out.events.append(ev)
        if idx + 1 in tree_trace.marks:
            out.marks.append(len(out.events))
    return out


# --- text format ----------------------------------------------------------------


def parse_metric(text: str) -> np.ndarray:
    rows = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "METRIC":
                raise MetricError(f"line {lineno}: expected 'METRIC <n>'")
            n = int(parts[1])
            continue
        try:
            row = [float(p) for p in parts]
        except ValueError:
            raise MetricError(f"line {lineno}: non-numeric entry") from None
        if len(row) != n:
            raise MetricError(f"line {lineno}: expected {n} entries, got {len(row)}")
        rows.append(row)
    if n is None or len(rows) != n:
        raise MetricError(f"expected {n} matrix rows, got {len(rows)}")
    return np.array(rows)


def format_metric(dist) -> str:
    d = np.asarray(dist, dtype=float)
    lines = [f"METRIC {d.shape[0]}"]
    lines.extend(" ".join(repr(float(v)) for v in row) for row in d)
    return "\n".join(lines) + "\n"
