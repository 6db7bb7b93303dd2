"""Parameter derivation and the outer restart loop."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .action_oracle import BOT, MetaActionRegistry
from .find_contract import find_contract
from .find_hs import y_slack
from .try_cover import try_cover

log = logging.getLogger(__name__)

DEFAULT_ROUND_CAP = 10**9
_COUNT_MAX = 2**63 - 1


class BudgetError(OverflowError):
    def __init__(self, q: int):
        super().__init__(f"budget astronomically large: q = {q}")
        self.q = q


def gamma_slack(B, eps, m, n, eta) -> float:
    return 27 * B * eps * m * n**2 + 2 * n * eta * math.sqrt(m)


def sample_count(eps: float, alpha: float, m: int) -> int:
    """Samples per oracle call: ``ceil(log(2m/alpha) / (2 eps^2))``."""
    return math.ceil(math.log(2 * m / alpha) / (2 * eps**2))


@dataclass(frozen=True)
class Params:
    rho: float
    delta: float
    B: float
    m: int
    n_bound: int
    eps: float
    eta: float
    alpha: float
    q: int
    mix: float
    mix_mode: str = "gamma"
    overrides: dict = field(default_factory=dict)

    @property
    def y(self) -> float:
        return y_slack(self.B, self.eps, self.m, self.n_bound, self.eta)

    @property
    def gamma(self) -> float:
        return gamma_slack(self.B, self.eps, self.m, self.n_bound, self.eta)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["y"] = self.y
        d["gamma"] = self.gamma
        return d


def compute_params(rho, delta, B, m, n_bound, *, eps=None, eta=None, alpha=None, q=None,
                   mix="gamma") -> Params:
    """Derive the run parameters; any of ``eps, eta, alpha, q`` may be overridden.

    Derived values are computed in order, so an overridden ``eps`` feeds the
    default ``eta`` and so on.
    """
    if not (0 < rho < 1 and 0 < delta < 1):
        raise ValueError("rho and delta must lie in (0, 1)")
    if B < 1 or m < 1 or n_bound < 1:
        raise ValueError("need B >= 1, m >= 1, n_bound >= 1")
    overrides = {k: v for k, v in dict(eps=eps, eta=eta, alpha=alpha, q=q).items() if v is not None}
    n = n_bound
    if eps is None:
        eps = rho**2 / (32**2 * B * m**2 * n**2)
    if eta is None:
        eta = eps * math.sqrt(m) * n / 2
    if alpha is None:
        alpha = delta / (2 * n**3 * (math.log(2 * B * m / eta) + math.comb(m + n + 1, m)))
    if q is None:
        q = sample_count(eps, alpha, m)
        if q > _COUNT_MAX:
            raise BudgetError(q)
    if eps <= 0 or eta <= 0 or not 0 < alpha < 1 or q < 1:
        raise ValueError("eps, eta must be positive, alpha in (0,1), q >= 1")

    if isinstance(mix, str):
        mode = mix
        if mix == "gamma":
            mix_value = gamma_slack(B, eps, m, n, eta)
        elif mix == "eps":
            mix_value = eps
        else:
            raise ValueError(f"unknown mix mode {mix!r}")
    else:
        mode, mix_value = "value", float(mix)
        if mix_value < 0:
            raise ValueError("mix must be non-negative")
    return Params(float(rho), float(delta), float(B), int(m), int(n), float(eps), float(eta),
                  float(alpha), int(q), mix_value, mode, overrides)


def round_bound(n: int, m: int, B: float, eta: float, q: int, const: float = 8.0) -> float:
    """Rounds allowed for a whole run: ``const n^3 q (log(Bm/eta) + C(m+n+1, m))``."""
    return const * n**3 * q * (math.log(B * m / eta) + math.comb(m + n + 1, m))


@dataclass
class LearnResult:
    contract: np.ndarray
    rounds_used: int
    restarts: int
    cover: object
    candidates: list
    registry: MetaActionRegistry
    mix_weight: float

    def to_dict(self) -> dict:
        return {
            "contract": self.contract.tolist(),
            "rounds_used": self.rounds_used,
            "restarts": self.restarts,
            "bot_count": self.registry.bot_count,
            "mix_weight": self.mix_weight,
            "regions": [
                {"meta": c.meta, "point": c.point.tolist(), "empirical_value": c.empirical_value}
                for c in self.candidates
            ],
        }


def discover_and_cover(env, params: Params, space=None, max_rounds: int = DEFAULT_ROUND_CAP,
                       registry: MetaActionRegistry | None = None, dump=None) -> LearnResult:
    """Restart covering attempts until one finishes, then choose the contract.

    Raises :class:`~contractlearn.action_oracle.RoundBudgetExceeded` once the
    environment has used ``max_rounds`` rounds; the registry attached to the
    exception's ``registry`` attribute holds the partial state. ``dump`` is
    passed through to :func:`~contractlearn.try_cover.try_cover`.
    """
    from .action_oracle import RoundBudgetExceeded

    reg = registry if registry is not None else MetaActionRegistry()
    reg.round_cap = max_rounds
    restarts = 0
    try:
        while True:
            cover = try_cover(reg, env, params, space, dump=dump)
            if cover is not BOT:
                break
            restarts += 1
            log.info("restart %d after %d rounds, %d meta-actions", restarts, env.rounds_used, len(reg))
    except RoundBudgetExceeded as exc:
        exc.registry = reg
        exc.restarts = restarts
        raise
    found = find_contract(cover, env.rewards, params.B, params.mix)
    return LearnResult(found.contract, env.rounds_used, restarts, cover, found.candidates, reg,
                       found.mix_weight)
