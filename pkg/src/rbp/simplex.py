"""Dense revised simplex for bounded-variable LPs with Bland's anti-cycling rule.

Solves::

    minimize    c @ x
    subject to  A[r] @ x  (<=, >=, ==)  b[r]
                0 <= x <= upper          (upper may be inf)

Two phases: artificial variables drive phase 1, and are pinned to zero for
phase 2.  The basis inverse is kept explicitly and refreshed periodically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-9
COST_TOL = 1e-10
REFACTOR_EVERY = 100


class LpInfeasible(RuntimeError):
    pass


class LpUnbounded(RuntimeError):
    pass


@dataclass
class SimplexResult:
    x: np.ndarray
    objective: float
    dual_bound: float
    duals: np.ndarray
    iterations: int


def simplex(c, A, senses, b, upper, max_iter: int = 200_000) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).copy()
    upper = np.asarray(upper, dtype=float)
    nrow, nvar = A.shape if A.size else (len(b), len(c))
    if nrow == 0:
        return _no_rows(c, upper)

    # slacks: +1 for <=, -1 for >=
    slack_cols = []
    for r, s in enumerate(senses):
        if s in ("<=", ">="):
            col = np.zeros(nrow)
            col[r] = 1.0 if s == "<=" else -1.0
            slack_cols.append(col)
    S = np.column_stack(slack_cols) if slack_cols else np.zeros((nrow, 0))
    M = np.hstack([A, S])
    ub = np.concatenate([upper, np.full(S.shape[1], np.inf)])

    flip = b < 0
    M[flip] *= -1
    b[flip] *= -1

    # initial basis: a +1 slack where one exists, otherwise an artificial
    basis = [-1] * nrow
    nstruct = M.shape[1]
    for col in range(nvar, nstruct):
        r = int(np.flatnonzero(M[:, col])[0])
        if M[r, col] > 0 and basis[r] < 0:
            basis[r] = col
    art_rows = [r for r in range(nrow) if basis[r] < 0]
    Art = np.zeros((nrow, len(art_rows)))
    for a, r in enumerate(art_rows):
        Art[r, a] = 1.0
        basis[r] = nstruct + a
    M = np.hstack([M, Art])
    ub = np.concatenate([ub, np.full(len(art_rows), np.inf)])
    ntot = M.shape[1]

    x = np.zeros(ntot)
    x[basis] = b  # nonbasics start at 0, basis matrix is the identity
    at_upper = np.zeros(ntot, dtype=bool)
    state = _State(M, b, ub, basis, x, at_upper)

    iters = 0
    if art_rows:
        c1 = np.zeros(ntot)
        c1[nstruct:] = 1.0
        iters += state.run(c1, max_iter)
        if x[nstruct:].sum() > FEAS_TOL * max(1.0, np.abs(b).max()):
            raise LpInfeasible(f"phase 1 ended with infeasibility {x[nstruct:].sum():.3g}")
        ub[nstruct:] = 0.0
        x[nstruct:] = np.clip(x[nstruct:], 0.0, 0.0)
        state.recompute()

    c2 = np.concatenate([c, np.zeros(ntot - nvar)])
    iters += state.run(c2, max_iter - iters)

    pi = state.duals(c2)
    reduced = c2 - M.T @ pi
    # weak-duality bound valid for any pi: b.pi + sum_j min(d_j * 0, d_j * ub_j)
    neg = reduced < 0
    if np.any(np.isinf(ub[neg]) & (reduced[neg] < -COST_TOL)):
        bound = -np.inf
    else:
        finite = neg & np.isfinite(ub)
        bound = float(b @ pi + reduced[finite] @ ub[finite])
    duals = np.where(flip, -pi, pi)

    xs = np.clip(x[:nvar], 0.0, upper)
    return SimplexResult(xs, float(c @ xs), bound, duals, iters)


def _no_rows(c, upper) -> SimplexResult:
    x = np.where(c < 0, upper, 0.0)
    if np.any(np.isinf(x)):
        raise LpUnbounded("objective unbounded below")
    obj = float(c @ x)
    return SimplexResult(x, obj, obj, np.zeros(0), 0)


class _State:
    def __init__(self, M, b, ub, basis, x, at_upper):
        self.M, self.b, self.ub = M, b, ub
        self.MT = csr_matrix(M.T)  # pricing only; the matrix is very sparse
        self.basis = basis
        self.x = x
        self.at_upper = at_upper
        self.is_basic = np.zeros(M.shape[1], dtype=bool)
        self.is_basic[basis] = True
        self.since_refactor = 0
        self.refactor()

    def refactor(self):
        self.Binv = np.linalg.inv(self.M[:, self.basis])
        self.since_refactor = 0

    def recompute(self):
        nonbasic = ~self.is_basic
        rhs = self.b - self.M[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basis] = self.Binv @ rhs

    def duals(self, c):
        return self.Binv.T @ c[self.basis]

    def run(self, c, max_iter: int) -> int:
        M, ub, x = self.M, self.ub, self.x
        basis = self.basis
        for it in range(max_iter):
            pi = self.duals(c)
            d = c - self.MT @ pi
            movable = ~self.is_basic & (ub > 0)
            improving = movable & (
                (~self.at_upper & (d < -COST_TOL)) | (self.at_upper & (d > COST_TOL))
            )
            cand = np.flatnonzero(improving)
            if cand.size == 0:
                return it
            q = int(cand[0])  # Bland: lowest index
            direction = -1.0 if self.at_upper[q] else 1.0
            alpha = self.Binv @ M[:, q]

            step = ub[q]  # bound flip distance
            leave = -1
            leave_to_upper = False
            xb = x[basis]
            ubb = ub[basis]
            rate = direction * alpha
            down = rate > PIVOT_TOL
            up = (rate < -PIVOT_TOL) & np.isfinite(ubb)
            ratios = np.full(len(basis), np.inf)
            ratios[down] = np.maximum(xb[down], 0.0) / rate[down]
            ratios[up] = np.maximum(ubb[up] - xb[up], 0.0) / -rate[up]
            best = ratios.min() if ratios.size else np.inf
            if best < step - 1e-12:
                ties = np.flatnonzero(ratios <= best + 1e-12)
                # Bland: among tied rows, the basic variable with the lowest index leaves
                leave = int(ties[np.argmin(np.asarray(basis)[ties])])
                step = ratios[leave]
                leave_to_upper = bool(up[leave])
            if not np.isfinite(step):
                raise LpUnbounded("objective unbounded below")

            x[basis] = xb - direction * step * alpha
            x[q] += direction * step
            if leave < 0:
                self.at_upper[q] = not self.at_upper[q]
                x[q] = ub[q] if self.at_upper[q] else 0.0
                continue

            out = basis[leave]
            x[out] = ub[out] if leave_to_upper else 0.0
            self.at_upper[out] = leave_to_upper
            self.is_basic[out] = False
            self.is_basic[q] = True
            self.at_upper[q] = False
            basis[leave] = q

            self.since_refactor += 1
            if self.since_refactor >= REFACTOR_EVERY:
                self.refactor()
                self.recompute()
            else:
                piv = self.Binv[leave] / alpha[leave]
                self.Binv -= np.outer(alpha, piv)
                self.Binv[leave] = piv
        raise RuntimeError("simplex iteration limit reached")
