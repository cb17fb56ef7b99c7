"""Request-cover LP (LP1) and the directed interval LP (LP2'), plus a generic LP container.

Variable keys are tuples: ``("x", j, i)`` assigns request ``j`` to window ``i``;
``("y", e, i)`` buys edge ``e`` (LP1) or arc ``e`` (LP2') in window ``i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from rbp.instance import RbpInstance, partition_windows
from rbp.simplex import LpInfeasible, LpUnbounded, simplex
from rbp.terminals import Terminals

EPS_FEAS = 1e-7
EPS_OBJ = 1e-7

__all__ = [
    "LinearProgram", "LpSolution", "LpInfeasible", "LpUnbounded",
    "solve_lp", "build_lp1", "build_lp2_directed", "lp_text",
]


@dataclass
class LinearProgram:
    keys: list = field(default_factory=list)
    cost: list[float] = field(default_factory=list)
    upper: list[float] = field(default_factory=list)
    rows: list[tuple[dict[int, float], str, float]] = field(default_factory=list)
    row_names: list[str] = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def add_var(self, key, cost: float = 0.0, upper: float = 1.0) -> int:
        if key in self.index:
            raise KeyError(f"duplicate variable {key!r}")
        self.index[key] = len(self.keys)
        self.keys.append(key)
        self.cost.append(float(cost))
        self.upper.append(float(upper))
        return self.index[key]

    def add_row(self, coefs: dict[int, float], sense: str, rhs: float, name: str | None = None):
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {sense!r}")
        for col in coefs:
            if not 0 <= col < len(self.keys):
                raise KeyError(f"row references undeclared column {col}")
        self.rows.append((dict(coefs), sense, float(rhs)))
        self.row_names.append(name or f"c{len(self.rows)}")

    @property
    def num_vars(self) -> int:
        return len(self.keys)

    def matrix(self) -> np.ndarray:
        A = np.zeros((len(self.rows), self.num_vars))
        for r, (coefs, _, _) in enumerate(self.rows):
            for col, val in coefs.items():
                A[r, col] = val
        return A

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Per-row constraint violation (0 when satisfied)."""
        out = np.zeros(len(self.rows))
        for r, (coefs, sense, rhs) in enumerate(self.rows):
            lhs = sum(v * x[c] for c, v in coefs.items())
            if sense == ">=":
                out[r] = max(rhs - lhs, 0.0)
            elif sense == "<=":
                out[r] = max(lhs - rhs, 0.0)
            else:
                out[r] = abs(lhs - rhs)
        return out


@dataclass(frozen=True)
class LpSolution:
    values: dict
    objective: float
    dual_bound: float
    max_residual: float

    @property
    def x(self) -> dict[tuple[int, int], float]:
        return {(k[1], k[2]): v for k, v in self.values.items() if k[0] == "x"}

    @property
    def y(self) -> dict:
        return {(k[1], k[2]): v for k, v in self.values.items() if k[0] == "y"}

    @property
    def gap(self) -> float:
        return self.objective - self.dual_bound


def solve_lp(lp: LinearProgram) -> LpSolution:
    if lp.num_vars == 0:
        for coefs, sense, rhs in lp.rows:
            if (sense == ">=" and rhs > EPS_FEAS) or (sense == "<=" and rhs < -EPS_FEAS):
                raise LpInfeasible("constraint with no variables is violated")
        return LpSolution({}, 0.0, 0.0, 0.0)
    senses = [s for _, s, _ in lp.rows]
    rhs = [b for _, _, b in lp.rows]
    res = simplex(lp.cost, lp.matrix(), senses, rhs, lp.upper)
    resid = lp.residuals(res.x)
    worst = float(resid.max()) if resid.size else 0.0
    if worst > EPS_FEAS:
        raise LpInfeasible(f"solution violates a constraint by {worst:.3g}")
    values = dict(zip(lp.keys, res.x.tolist()))
    return LpSolution(values, res.objective, res.dual_bound, worst)


# --- problem-specific builders ----------------------------------------------


def _paths_to(inst: RbpInstance, vertex: int, target: frozenset) -> tuple:
    return inst.tree.path_to_subgraph(vertex, target)


def build_lp1(inst: RbpInstance, terminals: Terminals) -> LinearProgram:
    """Fractional request-cover LP over windows ``w(j) <= i < m``."""
    windows = partition_windows(inst)
    m, size, k = windows.m, windows.window_size, inst.k
    tree = inst.tree
    targets = terminals.path_vertex_sets()
    lp = LinearProgram()

    xcol = {}
    for j in range(inst.n):
        for i in range(windows.window_of(j), m):
            xcol[j, i] = lp.add_var(("x", j, i))

    couplings = []
    for (j, i), col in xcol.items():
        for e in _paths_to(inst, inst.requests[j], targets[i]).edges:
            key = ("y", e, i)
            if key not in lp.index:
                lp.add_var(key, cost=tree.length[e])
            couplings.append((lp.index[key], col, j, i, e))

    for j in range(inst.n):
        w = windows.window_of(j)
        # equality: a request counted twice would inflate the prefix rows below
        lp.add_row({xcol[j, i]: 1.0 for i in range(w, m)}, "==", 1.0, f"assign_{j + 1}")
    for i in range(m):
        coefs = {xcol[j, l]: 1.0 for j in range((i + 1) * size) for l in range(windows.window_of(j), i + 1)}
        lp.add_row(coefs, ">=", size * (i + 1) - k, f"prefix_{i + 1}")
    for ycol, col, j, i, e in couplings:
        lp.add_row({ycol: 1.0, col: -1.0}, ">=", 0.0, f"couple_{j + 1}_{i + 1}_{e[0] + 1}_{e[1] + 1}")
    return lp


def build_lp2_directed(inst: RbpInstance, terminals: Terminals, intervals) -> LinearProgram:
    """Interval-assignment LP with arcs directed from each request toward ``P_i``."""
    tree = inst.tree
    targets = terminals.path_vertex_sets()
    lp = LinearProgram()
    for j in range(inst.n):
        lo, hi = intervals.interval(j)
        cols = {}
        for i in range(lo, hi + 1):
            col = lp.add_var(("x", j, i))
            cols[col] = 1.0
            for arc in _paths_to(inst, inst.requests[j], targets[i]).arcs:
                key = ("y", arc, i)
                if key not in lp.index:
                    lp.add_var(key, cost=tree.length[arc.edge])
                lp.add_row({lp.index[key]: 1.0, col: -1.0}, ">=", 0.0,
                           f"couple_{j + 1}_{i + 1}_{arc.tail + 1}_{arc.head + 1}")
        lp.add_row(cols, ">=", 1.0, f"assign_{j + 1}")
    return lp


# --- CPLEX-LP text export ----------------------------------------------------


def _var_name(key) -> str:
    parts = []
    for item in key:
        if isinstance(item, tuple):
            parts.extend(str(v + 1) for v in item)
        elif isinstance(item, int):
            parts.append(str(item + 1))
        else:
            parts.append(str(item))
    return re.sub(r"[^A-Za-z0-9_]", "_", "_".join(parts))


def _linear(terms) -> str:
    out = []
    for coef, name in terms:
        sign = "-" if coef < 0 else "+"
        out.append(f"{sign} {abs(coef):.12g} {name}")
    text = " ".join(out) if out else "0"
    return text[2:] if text.startswith("+ ") else text


def lp_text(lp: LinearProgram, title: str = "rbp") -> str:
    names = [_var_name(k) for k in lp.keys]
    lines = [f"\\ {title}", "Minimize", " obj: " + _linear(
        [(c, names[i]) for i, c in enumerate(lp.cost) if c != 0])]
    lines.append("Subject To")
    for (coefs, sense, rhs), rname in zip(lp.rows, lp.row_names):
        op = "=" if sense == "==" else sense
        lines.append(f" {rname}: {_linear([(v, names[c]) for c, v in sorted(coefs.items())])} {op} {rhs:.12g}")
    lines.append("Bounds")
    for name, ub in zip(names, lp.upper):
        lines.append(f" 0 <= {name} <= {ub:.12g}" if np.isfinite(ub) else f" {name} >= 0")
    lines.append("End")
    return "\n".join(lines) + "\n"
