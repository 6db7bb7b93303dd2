"""Dense two-phase simplex for ``max c.x  s.t.  A x <= b, x >= 0``.

Bland's rule is used for both entering and leaving variables, so the solver
never cycles. Problems here have at most a few dozen rows and columns.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-10
_FEAS_TOL = 1e-9


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    objective: np.ndarray
    A: np.ndarray = field(default=None)
    b: np.ndarray = field(default=None)

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        k = self.objective.size
        self.A = np.zeros((0, k)) if self.A is None else np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.zeros(0) if self.b is None else np.asarray(self.b, dtype=float).ravel()
        if self.A.shape != (self.b.size, k):
            raise ValueError(f"constraint matrix {self.A.shape} does not match b {self.b.shape} / c {k}")


@dataclass
class LPResult:
    status: LPStatus
    value: float | None = None
    x: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.status is LPStatus.OPTIMAL


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int) -> None:
    pivot_row = T[row] / T[row, col]
    T -= np.outer(T[:, col], pivot_row)
    T[row] = pivot_row
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: list[int], ncols: int, max_iter: int) -> bool:
    """Maximise the objective stored in the last row. Returns False if unbounded.

    The last row holds reduced costs ``c_j - z_j``; a column may enter when its
    reduced cost is positive.
    """
    for _ in range(max_iter):
        obj = T[-1, :ncols]
        entering = np.flatnonzero(obj > PIVOT_TOL)
        if entering.size == 0:
            return True
        col = int(entering[0])
        column = T[:-1, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return False
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, basis, row, col)
    raise RuntimeError("simplex iteration limit reached")


def solve_lp(lp: LinearProgram, max_iter: int = 10_000) -> LPResult:
    c, A, b = lp.objective, lp.A, lp.b
    rows, k = A.shape
    # columns: x (k) | slack (rows) | artificial (one per negative-rhs row)
    neg = np.flatnonzero(b < 0)
    n_art = neg.size
    ncols = k + rows + n_art
    T = np.zeros((rows + 1, ncols + 1))
    T[:rows, :k] = A
    T[:rows, k:k + rows] = np.eye(rows)
    T[:rows, -1] = b
    basis = list(range(k, k + rows))
    for j, i in enumerate(neg):
        T[i, :k + rows] *= -1
        T[i, -1] *= -1
        T[i, k + rows + j] = 1.0
        basis[i] = k + rows + j

    if n_art:
        # phase 1: maximise -sum(artificials)
        T[-1, :] = 0.0
        T[-1, k + rows:ncols] = -1.0
        for i in neg:
            T[-1] += T[i]
        _run_simplex(T, basis, ncols, max_iter)
        if T[-1, -1] > _FEAS_TOL * max(1.0, np.abs(b).max()):
            return LPResult(LPStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis
        keep = []
        for i in range(rows):
            if basis[i] >= k + rows:
                cand = np.flatnonzero(np.abs(T[i, :k + rows]) > PIVOT_TOL)
                if cand.size:
                    _pivot(T, basis, i, int(cand[0]))
                    keep.append(i)
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        T = np.delete(T, np.s_[k + rows:ncols], axis=1)
        ncols = k + rows

    T[-1, :] = 0.0
    T[-1, :k] = c
    for i, j in enumerate(basis):
        if T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[i]
    if not _run_simplex(T, basis, ncols, max_iter):
        return LPResult(LPStatus.UNBOUNDED)

    x = np.zeros(ncols)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    x = np.maximum(x[:k], 0.0)
    return LPResult(LPStatus.OPTIMAL, float(c @ x), x)


def maximize(objective, A=None, b=None) -> LPResult:
    return solve_lp(LinearProgram(objective, A, b))
