"""Service deadlines and intervals derived from a fractional LP1 optimum."""

from __future__ import annotations

from dataclasses import dataclass

from rbp.instance import WindowPartition

EPS_HALF = 1e-6


class IntervalError(RuntimeError):
    pass


@dataclass(frozen=True)
class ServiceIntervals:
    release: tuple[int, ...]   # w(j)
    deadline: tuple[int, ...]  # h(j)
    m: int

    def interval(self, j: int) -> tuple[int, int]:
        return self.release[j], self.deadline[j]

    def __len__(self) -> int:
        return len(self.release)

    def ready_by(self, i: int) -> list[int]:
        """H_i: requests whose deadline is at most window ``i``."""
        return [j for j, h in enumerate(self.deadline) if h <= i]


def derive_intervals(x_star: dict[tuple[int, int], float], windows: WindowPartition, n: int,
                     eps: float = EPS_HALF) -> ServiceIntervals:
    """``h(j)``: first window from ``w(j)`` on where the cumulative mass of ``j`` reaches 1/2."""
    release, deadline = [], []
    for j in range(n):
        w = windows.window_of(j)
        mass = 0.0
        for i in range(w, windows.m):
            mass += x_star.get((j, i), 0.0)
            if mass >= 0.5 - eps:
                break
        else:
            raise IntervalError(f"request {j} never accumulates mass 1/2 (total {mass:.6g})")
        release.append(w)
        deadline.append(i)
    return ServiceIntervals(tuple(release), tuple(deadline), windows.m)


def check_minimality(x_star, intervals: ServiceIntervals, eps: float = EPS_HALF) -> bool:
    for j in range(len(intervals)):
        w, h = intervals.interval(j)
        before = sum(x_star.get((j, i), 0.0) for i in range(w, h))
        upto = before + x_star.get((j, h), 0.0)
        if not (upto >= 0.5 - eps and before < 0.5 - eps):
            return False
    return True


@dataclass(frozen=True)
class FeasibilityCertificate:
    ok: bool
    window: int | None = None   # first violating window (0-based)
    lhs: float | None = None
    rhs: float | None = None
    what: str = ""

    def __bool__(self) -> bool:
        return self.ok


def prefix_bound(k: int, i: int, beta: int = 2) -> int:
    """Required number of requests batched within windows ``0..i``."""
    return (2 * k + 1) * (i + 1) - beta * k


def check_batch_prefix(batch_sizes, k: int, beta: int = 2) -> FeasibilityCertificate:
    total = 0
    for i, size in enumerate(batch_sizes):
        total += size
        if total < prefix_bound(k, i, beta):
            return FeasibilityCertificate(False, i, total, prefix_bound(k, i, beta), "batch prefix")
    return FeasibilityCertificate(True)


def check_two_feasibility(intervals: ServiceIntervals, batch_sizes, k: int) -> FeasibilityCertificate:
    """Both ``sum_{l<=i} |B_l|`` and ``|H_i|`` must reach ``(2k+1)i - 2k`` (1-based ``i``)."""
    cert = check_batch_prefix(batch_sizes, k)
    if not cert:
        return cert
    deadlines = sorted(intervals.deadline)
    count = 0
    for i in range(intervals.m):
        while count < len(deadlines) and deadlines[count] <= i:
            count += 1
        if count < prefix_bound(k, i):
            return FeasibilityCertificate(False, i, count, prefix_bound(k, i), "deadline count")
    return FeasibilityCertificate(True)
