"""Locate an approximate separating halfspace between two meta-actions by
bisecting the segment from a point of the current lower bound to a contract
where the oracle disagrees."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .action_oracle import BOT
from .geometry import DEGENERATE_TOL, GeometryError, Halfspace, l2_distance, midpoint


def y_slack(B: float, eps: float, m: int, n: int, eta: float) -> float:
    """Relaxation added to every estimated halfspace."""
    return 18 * B * eps * m * n**2 + 2 * n * eta * math.sqrt(m)


def max_oracle_calls(diameter: float, eta: float) -> int:
    """Upper bound on oracle calls in one invocation (two endpoints plus the bisection)."""
    if diameter <= eta:
        return 2
    return 2 + math.ceil(math.log2(diameter / eta))


@dataclass
class HalfspaceEstimate:
    halfspace: Halfspace
    other_meta: int
    delta_cost: float
    midpoint: np.ndarray
    oracle_calls: int
    inner_meta: int


def find_hs(state, d_i: int, p):
    """Return a :class:`HalfspaceEstimate` for ``d_i`` against some other meta, or ``BOT``.

    ``state`` is the running :class:`~contractlearn.try_cover.TryCoverState`;
    its lower bounds, pending set and cost-difference table are updated in place.
    """
    eta, y = state.params.eta, state.params.y
    p1 = state.lower[d_i].points[0]
    p2 = np.asarray(p, dtype=float)

    d_j = state.oracle(p1)
    if d_j is BOT:
        return BOT
    d_k = state.oracle(p2)
    if d_k is BOT:
        return BOT
    calls = 2

    while l2_distance(p1, p2) > eta:
        mid = midpoint(p1, p2)
        d = state.oracle(mid)
        calls += 1
        if d is BOT:
            return BOT
        state.seed(d, mid)
        if d in state.known[d_i]:
            p1, d_j = mid, d
        else:
            p2, d_k = mid, d

    mid = midpoint(p1, p2)
    anchor = state.registry.anchor
    step = float((anchor[d_j] - anchor[d_k]) @ mid)
    if d_j == d_i:
        delta = step
    else:
        delta = state.delta_costs.get((d_i, d_j), 0.0) + step
    state.delta_costs[(d_i, d_k)] = delta

    normal = anchor[d_i] - anchor[d_k]
    if np.abs(normal).max() < DEGENERATE_TOL:
        raise GeometryError(
            f"meta-actions {d_i} and {d_k} have identical anchors; cannot separate"
        )
    return HalfspaceEstimate(
        halfspace=Halfspace(normal, delta - y),
        other_meta=d_k,
        delta_cost=delta,
        midpoint=mid,
        oracle_calls=calls,
        inner_meta=d_j,
    )
