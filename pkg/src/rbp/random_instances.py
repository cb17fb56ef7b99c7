"""Seeded random instance generators for tests, sweeps and demos."""

from __future__ import annotations

import numpy as np

from rbp.instance import RbpInstance


def random_tree_instance(rng: np.random.Generator, vertices: int, n: int, k: int,
                         integer_lengths: bool = True, max_length: int = 5) -> RbpInstance:
    """Random recursive tree with random lengths and ``n`` uniformly placed requests."""
    edges = []
    for v in range(1, vertices):
        u = int(rng.integers(0, v))
        d = float(rng.integers(1, max_length + 1)) if integer_lengths else float(rng.uniform(0.1, max_length))
        edges.append((u, v, d))
    # shuffle labels so vertex 0 is not always the root of the recursive tree
    perm = rng.permutation(vertices)
    edges = [(int(perm[u]), int(perm[v]), d) for u, v, d in edges]
    requests = tuple(int(r) for r in rng.integers(0, vertices, size=n))
    start = int(rng.integers(0, vertices))
    return RbpInstance(vertices, tuple(edges), requests, k, start)


def random_graph_instance(rng: np.random.Generator, vertices: int, n: int, k: int,
                          extra_edges: int = 3, max_length: int = 9) -> RbpInstance:
    """Connected general graph: a random spanning tree plus ``extra_edges`` chords."""
    base = random_tree_instance(rng, vertices, n, k, max_length=max_length)
    edges = list(base.edges)
    present = {(min(u, v), max(u, v)) for u, v, _ in edges}
    tries = 0
    while len(edges) < len(base.edges) + extra_edges and tries < 100 * (extra_edges + 1):
        tries += 1
        u, v = (int(x) for x in rng.choice(vertices, size=2, replace=False))
        key = (min(u, v), max(u, v))
        if key in present:
            continue
        present.add(key)
        edges.append((u, v, float(rng.integers(1, max_length + 1))))
    return RbpInstance(vertices, tuple(edges), base.requests, k, base.start_vertex, is_tree=False)


def random_metric(rng: np.random.Generator, points: int, max_length: int = 20) -> np.ndarray:
    """Shortest-path metric of a random connected weighted graph."""
    inst = random_graph_instance(rng, points, 1, 1, extra_edges=points, max_length=max_length)
    return inst.distance_matrix
