"""Cover the contract space with approximate best-response regions.

For every discovered meta-action the procedure keeps an upper bound (the
contract space cut by estimated halfspaces) and a lower bound (the hull of
vertices where the meta-action was confirmed) and closes the gap vertex by
vertex. Any change to the registry aborts the attempt with ``BOT``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .action_oracle import BOT, MetaActionRegistry, query
from .find_hs import find_hs
from .geometry import (
    ContractSpace,
    GeometryError,
    Halfspace,
    PointHull,
    Polytope,
    hull_equals_polytope,
    lex_sorted,
)

log = logging.getLogger(__name__)

MAX_SWEEPS = 10_000


@dataclass
class TryCoverState:
    registry: MetaActionRegistry
    env: object
    params: object
    space: ContractSpace
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)
    known: dict = field(default_factory=dict)
    halfspaces: dict = field(default_factory=dict)
    delta_costs: dict = field(default_factory=dict)
    pending: set = field(default_factory=set)
    oracle_calls: int = 0
    find_hs_calls: int = 0

    def __post_init__(self):
        for d in self.registry.metas:
            self.lower[d] = PointHull()
            self.upper[d] = Polytope(self.space)
            self.known[d] = {d}

    def oracle(self, p):
        self.oracle_calls += 1
        return query(self.registry, self.env, p, self.params.q, self.params.eps)

    def seed(self, d: int, p) -> None:
        """Start the lower bound of a meta-action seen for the first time."""
        if not self.lower[d]:
            self.lower[d] = PointHull().add(p)
            self.pending.add(d)

    def to_dict(self) -> dict:
        return {
            "oracle_calls": self.oracle_calls,
            "pending": sorted(self.pending),
            "lower": {str(d): L.as_array().tolist() for d, L in self.lower.items()},
            "upper": {str(d): U.to_dict() for d, U in self.upper.items()},
            "known": {str(d): sorted(k) for d, k in self.known.items()},
            "delta_costs": {f"{i},{j}": v for (i, j), v in self.delta_costs.items()},
        }


@dataclass
class Cover:
    regions: dict
    upper: dict
    anchors: dict
    halfspaces: dict
    oracle_calls: int

    @property
    def metas(self) -> list[int]:
        return sorted(self.regions)


def query_budget(n: int, m: int, B: float, eta: float, const: float = 8.0) -> float:
    """Oracle-call allowance for one attempt: ``const * n^2 (log(Bm/eta) + C(m+n+1, m))``."""
    return const * n**2 * (np.log(B * m / eta) + comb(m + n + 1, m))


def try_cover(reg: MetaActionRegistry, env, params, space: ContractSpace | None = None,
              dump=None):
    """One covering attempt. Returns a :class:`Cover` or ``BOT``.

    ``dump`` may be an open text file; the state is appended to it as one JSON
    line after every processed vertex sweep.
    """
    if space is None:
        space = ContractSpace(params.B, env.m)
    state = TryCoverState(reg, env, params, space)

    origin = np.zeros(space.dim)
    d = state.oracle(origin)
    if d is BOT:
        return BOT
    state.seed(d, origin)

    while state.pending:
        d_i = min(state.pending)
        sweeps = 0
        while not hull_equals_polytope(state.lower[d_i], state.upper[d_i]):
            sweeps += 1
            if sweeps > MAX_SWEEPS:
                raise GeometryError(f"meta-action {d_i}: bounds failed to meet")
            vertices = state.upper[d_i].vertices()
            if not vertices:
                raise GeometryError(
                    "upper bound became empty:\n" + json.dumps(state.to_dict())
                )
            for p in lex_sorted(vertices):
                d_j = state.oracle(p)
                if d_j is BOT:
                    return BOT
                state.seed(d_j, p)
                if d_j in state.known[d_i]:
                    state.lower[d_i] = state.lower[d_i].add(p)
                    continue
                state.find_hs_calls += 1
                est = find_hs(state, d_i, p)
                if est is BOT:
                    return BOT
                d_k = est.other_meta
                state.halfspaces[(d_i, d_k)] = est.halfspace
                state.upper[d_i] = state.upper[d_i].intersect(est.halfspace)
                state.known[d_i].add(d_k)
                log.debug("meta %d: cut against %d, delta cost %.6g", d_i, d_k, est.delta_cost)
                break
            if dump is not None:
                dump.write(json.dumps(state.to_dict()) + "\n")
        state.pending.discard(d_i)

    return Cover(
        regions=dict(state.lower),
        upper=dict(state.upper),
        anchors={d: reg.anchor[d] for d in reg.metas},
        halfspaces=dict(state.halfspaces),
        oracle_calls=state.oracle_calls,
    )


def region_reference(metas, anchors, costs, space: ContractSpace) -> dict:
    """Regions where each meta-action is preferred under its anchor distribution
    and the given (ground-truth) costs."""
    regions = {}
    for i in metas:
        P = Polytope(space)
        for j in metas:
            if j == i:
                continue
            normal = np.asarray(anchors[i]) - np.asarray(anchors[j])
            degenerate = np.abs(normal).max() < 1e-12
            P = P.intersect(Halfspace(normal, costs[i] - costs[j], degenerate=degenerate))
        regions[i] = P
    return regions
