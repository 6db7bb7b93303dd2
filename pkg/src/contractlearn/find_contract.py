"""Pick the best contract inside a finished cover and blend it with the
reward vector."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError
from .lp import maximize

log = logging.getLogger(__name__)


@dataclass
class ContractCandidate:
    meta: int
    point: np.ndarray
    empirical_value: float


@dataclass
class FindContractResult:
    contract: np.ndarray
    best: ContractCandidate
    candidates: list
    mix_weight: float


def region_candidate(cover, d: int, rewards: np.ndarray, B: float) -> ContractCandidate:
    """Maximise the empirical principal utility of ``d`` over its region intersected with the box."""
    U = cover.upper[d]
    A, b = U.constraints()
    m = U.dim
    A = np.vstack([A, np.eye(m)])
    b = np.concatenate([b, np.full(m, B)])
    F = np.asarray(cover.anchors[d])
    res = maximize(-F, A, b)
    if not res.ok:
        raise GeometryError(f"region LP for meta-action {d} is {res.status.value}")
    point = np.clip(res.x, 0.0, B)
    return ContractCandidate(d, point, float(F @ (rewards - point)))


def mix_contract(p_star, rewards, mix: float) -> tuple[np.ndarray, float]:
    """``(1 - sqrt(mix)) p_star + sqrt(mix) r``; the weight is capped at 1."""
    w = math.sqrt(mix)
    if w > 1.0:
        log.warning("mixing weight sqrt(%g) exceeds 1; capping at 1", mix)
        w = 1.0
    return (1.0 - w) * np.asarray(p_star) + w * np.asarray(rewards), w


def find_contract(cover, rewards, B: float, mix: float) -> FindContractResult:
    if not cover.regions:
        raise ValueError("empty cover")
    rewards = np.asarray(rewards, dtype=float)
    candidates = [region_candidate(cover, d, rewards, B) for d in cover.metas]
    best = candidates[0]
    for cand in candidates[1:]:
        if cand.empirical_value > best.empirical_value:
            best = cand
    contract, w = mix_contract(best.point, rewards, mix)
    return FindContractResult(contract, best, candidates, w)


def suboptimality_audit(inst, contract, B: float) -> float:
    """Gap between the best bounded contract and ``contract`` (white-box)."""
    from .model import principal_utility
    from .oracle_ref import solve_opt

    return solve_opt(inst, B).value - principal_utility(inst, contract)
