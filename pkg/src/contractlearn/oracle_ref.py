"""Exact optimal bounded contract (one LP per action) and a grid brute force."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .lp import maximize
from .model import Instance, best_response, principal_utilities, principal_utility


class GridBudgetExceeded(ValueError):
    pass


@dataclass
class OptResult:
    value: float
    contract: np.ndarray
    inducing_action: int


def action_lp(inst: Instance, a: int, B: float):
    """Best contract in ``[0, B]^m`` that makes ``a`` weakly optimal for the agent."""
    F, c = inst.F, inst.c
    others = [k for k in range(inst.n) if k != a]
    A = np.vstack([F[others] - F[a], np.eye(inst.m)]) if others else np.eye(inst.m)
    b = np.concatenate([c[others] - c[a], np.full(inst.m, B)]) if others else np.full(inst.m, B)
    return maximize(-F[a], A, b)


def solve_opt(inst: Instance, B: float) -> OptResult:
    best = None
    for a in range(inst.n):
        res = action_lp(inst, a, B)
        if not res.ok:
            continue
        p = np.clip(res.x, 0.0, B)
        # the tie rule decides which action is played on the boundary
        u = principal_utility(inst, p)
        if best is None or u > best.value:
            best = OptResult(u, p, best_response(inst, p))
    return best


def grid_opt(inst: Instance, B: float, step: float, budget: int = 20_000_000) -> float:
    k = int(round(B / step)) + 1
    if inst.m * k**inst.m > budget:
        raise GridBudgetExceeded(f"grid of {k}^{inst.m} points exceeds budget")
    axis = np.linspace(0.0, B, k)
    best = -np.inf
    # chunk over the first coordinate to bound memory
    rest = np.array(list(itertools.product(axis, repeat=inst.m - 1)), dtype=float)
    rest = rest.reshape(len(rest), inst.m - 1)
    for x0 in axis:
        P = np.hstack([np.full((len(rest), 1), x0), rest])
        best = max(best, float(principal_utilities(inst, P).max()))
    return best
