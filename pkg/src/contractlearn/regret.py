"""Explore-then-commit over a finite horizon with exact regret accounting."""

from __future__ import annotations

import csv
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .action_oracle import RoundBudgetExceeded
from .driver import compute_params, discover_and_cover
from .environment import Environment
from .model import principal_utilities, principal_utility
from .oracle_ref import solve_opt

log = logging.getLogger(__name__)

# compute_params needs rho < 1; larger horizon-derived values are capped here
RHO_CAP = 0.999


def rho_for_horizon(m: int, n: int, B: float, T: int) -> float:
    """``m^(n/5) B^(3/5) m n^(8/5) T^(-1/5)``."""
    return m ** (n / 5) * B**0.6 * m * n**1.6 * T**-0.2


@dataclass
class RegretRun:
    horizon: int
    per_round_utilities: np.ndarray
    opt_value: float
    regret_curve: np.ndarray
    exploration_rounds: int
    all_exploration: bool
    contract: np.ndarray | None
    rho: float
    params: object = None

    @property
    def regret(self) -> float:
        return float(self.regret_curve[-1])


def _finish(T, utilities, opt, explored, flagged, contract, rho, params) -> RegretRun:
    u = np.asarray(utilities, dtype=float)
    assert len(u) == T
    return RegretRun(T, u, opt, np.cumsum(opt - u), explored, flagged, contract, rho, params)


def run_regret(inst, T: int, delta: float, B: float, seed=None, rho: float | None = None,
               n_bound: int | None = None, eps=None, eta=None, alpha=None, q=None,
               mix="gamma", space=None) -> RegretRun:
    if T < 1:
        raise ValueError("horizon must be at least 1")
    n = n_bound if n_bound is not None else inst.n
    if rho is None:
        rho = rho_for_horizon(inst.m, n, B, T)
    rho_used = min(rho, RHO_CAP)
    params = compute_params(rho_used, delta, B, inst.m, n, eps=eps, eta=eta, alpha=alpha, q=q,
                            mix=mix)
    opt = solve_opt(inst, B).value

    env = Environment(inst, seed=seed, trace=True)
    utilities = np.empty(T)
    flagged, contract = False, None
    try:
        result = discover_and_cover(env, params, space=space, max_rounds=T)
        contract = result.contract
    except RoundBudgetExceeded as exc:
        flagged = True
        pending = exc.contract
        log.warning("exploration exceeded the horizon T=%d; run is all-exploration", T)

    # exploration: the true utility of every committed contract, per round
    t = 0
    contracts = np.array([e.contract for e in env.trace]).reshape(-1, inst.m)
    values = principal_utilities(inst, contracts) if len(contracts) else []
    for e, v in zip(env.trace, values):
        utilities[t:t + e.rounds] = v
        t += e.rounds
    explored = t
    if flagged:
        # the oracle call that would not fit runs until the horizon ends
        utilities[t:] = principal_utility(inst, pending) if pending is not None else 0.0
    else:
        utilities[t:] = principal_utility(inst, contract)
    return _finish(T, utilities, opt, explored, flagged, contract, rho, params)


def run_grid_baseline(inst, T: int, B: float, step: float, explore_rounds: int,
                      seed=None) -> RegretRun:
    """Commit to the empirically best grid contract after a uniform exploration phase.

    Each grid point gets ``explore_rounds // |grid|`` rounds; the empirical
    utility is the mean of realised ``r - p`` over sampled outcomes.
    """
    axis = np.arange(0.0, B + 1e-12, step)
    grid = np.array(list(itertools.product(axis, repeat=inst.m)))
    per_point = max(1, min(explore_rounds, T) // len(grid))
    env = Environment(inst, seed=seed)
    opt = solve_opt(inst, B).value
    true_u = principal_utilities(inst, grid)

    utilities = np.empty(T)
    t, best, best_val = 0, None, -math.inf
    for p, u in zip(grid, true_u):
        k = min(per_point, T - t)
        if k <= 0:
            break
        outcomes = env.commit_many(p, k)
        val = float(np.mean(inst.r[outcomes] - p[outcomes]))
        utilities[t:t + k] = u
        t += k
        if val > best_val:
            best, best_val = p, val
    explored = t
    utilities[t:] = principal_utility(inst, best)
    return _finish(T, utilities, opt, explored, t >= T, best, float("nan"), None)


def write_regret_csv(run: RegretRun, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "u_t", "cumulative_regret"])
        for t, (u, R) in enumerate(zip(run.per_round_utilities, run.regret_curve), start=1):
            w.writerow([t, repr(float(u)), repr(float(R))])


def loglog_slope(horizons, regrets) -> float:
    x = np.log(np.asarray(horizons, dtype=float))
    y = np.log(np.asarray(regrets, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
