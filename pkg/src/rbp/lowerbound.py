"""Adversarial line instances separating capacity-k optima from reduced-capacity optima.

A complete binary tree of depth ``k`` is listed in preorder.  Each internal node
becomes one request at ``p_t`` (``t`` = index of its rightmost leaf) and each
leaf ``l_i`` becomes a block of ``k`` requests at ``p_i``, on a unit-spaced line
``p_1 .. p_{2^k}``.
"""

from __future__ import annotations

from dataclasses import dataclass

from rbp.brute import SizeLimitError, solve_exact_capacity
from rbp.instance import RbpInstance
from rbp.server import inorder_cost, run_lowerbound_server

MAX_K = 16


@dataclass(frozen=True)
class LowerBoundInstance:
    k: int
    instance: RbpInstance
    labels: tuple[tuple[int, int, int], ...]  # per preorder node: (t, s, height), 0-based leaf ids
    block_ends: tuple[int, ...]               # request index just past each leaf block

    @property
    def leaves(self) -> int:
        return 2 ** self.k

    def block_end(self, i: int) -> int:
        return self.block_ends[i]


def _preorder(k: int):
    """Yield ``(s, t, height)`` for every node of the depth-``k`` binary tree in preorder."""
    stack = [(0, 2 ** k - 1, k)]
    while stack:
        s, t, h = stack.pop()
        yield s, t, h
        if h > 0:
            mid = (s + t) // 2
            stack.append((mid + 1, t, h - 1))
            stack.append((s, mid, h - 1))


def generate(k: int) -> LowerBoundInstance:
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > MAX_K:
        raise MemoryError(f"k={k} needs 2^{k} line vertices; refusing above k={MAX_K}")
    leaves = 2 ** k
    requests: list[int] = []
    labels = []
    block_ends = [0] * leaves
    for s, t, h in _preorder(k):
        labels.append((t, s, h))
        if h == 0:
            requests.extend([s] * k)
            block_ends[s] = len(requests)
        else:
            requests.append(t)
    edges = tuple((p, p + 1, 1.0) for p in range(leaves - 1))
    inst = RbpInstance(leaves, edges, tuple(requests), k, 0)
    return LowerBoundInstance(k, inst, tuple(labels), tuple(block_ends))


@dataclass(frozen=True)
class GapReport:
    k: int
    reduced_capacity: int
    opt_full: float      # upper bound witnessed by the sweep server
    opt_reduced: float   # exact optimum at the reduced capacity
    method: str

    @property
    def ratio(self) -> float:
        return self.opt_reduced / self.opt_full


def gap_report(k: int, reduced_capacity: int | None = None, limit: int | None = None) -> GapReport:
    """Compare the sweep server's cost with the optimum at reduced capacity (default ``max(1, k//4)``)."""
    lower = generate(k)
    cap = max(1, k // 4) if reduced_capacity is None else reduced_capacity
    full = run_lowerbound_server(lower).distance
    if cap == 1:
        reduced, method = inorder_cost(lower.instance), "inorder"
    else:
        kwargs = {} if limit is None else {"limit": limit}
        try:
            reduced = solve_exact_capacity(lower.instance, cap, **kwargs)
        except SizeLimitError as exc:
            raise SizeLimitError(f"gap_report(k={k}) at capacity {cap}: {exc}") from None
        method = "exact"
    return GapReport(k, cap, full, reduced, method)
