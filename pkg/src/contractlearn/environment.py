"""The sampling channel between a learner and a hidden instance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance, best_response


class TraceDisabled(RuntimeError):
    pass


@dataclass(frozen=True)
class TraceEntry:
    """A run of ``rounds`` consecutive commits of the same contract."""

    contract: tuple
    action: int
    rounds: int
    first_round: int


def _inverse_cdf(dist: np.ndarray, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(dist)
    idx = np.searchsorted(cdf, u, side="right")
    # rounding slack goes to the last outcome that can actually occur
    last = np.flatnonzero(dist > 0)[-1]
    return np.minimum(idx, last)


class Environment:
    """Commit contracts, observe sampled outcomes.

    The learner may use ``commit``/``commit_many``, ``rewards``, ``m`` and
    ``rounds_used``. The instance and the trace are white-box only.
    """

    def __init__(self, instance: Instance, seed: int | None = None, trace: bool = False):
        self.instance = instance
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.rounds_used = 0
        self.tracing = trace
        self.trace: list[TraceEntry] = []
        self._starts: dict[int, int] = {}

    @property
    def m(self) -> int:
        return self.instance.m

    @property
    def rewards(self) -> np.ndarray:
        return self.instance.r

    def _validate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.m,):
            raise ValueError(f"contract has shape {p.shape}, expected ({self.m},)")
        if np.any(p < 0):
            raise ValueError("contract payments must be non-negative")
        return p

    def _uniforms(self, k: int) -> np.ndarray:
        return self.rng.random(k)

    def commit_many(self, p, k: int) -> np.ndarray:
        """Commit ``p`` for ``k`` rounds and return the ``k`` outcome indices."""
        p = self._validate(p)
        a = best_response(self.instance, p)
        outcomes = _inverse_cdf(self.instance.F[a], self._uniforms(k))
        if self.tracing:
            self.trace.append(TraceEntry(tuple(p.tolist()), a, k, self.rounds_used))
            self._starts[self.rounds_used] = a
        self.rounds_used += k
        return outcomes

    def commit(self, p) -> int:
        return int(self.commit_many(p, 1)[0])

    @property
    def traced_rounds(self) -> int:
        return sum(e.rounds for e in self.trace)

    def action_at_round(self, t: int) -> int:
        if not self.tracing:
            raise TraceDisabled("tracing is disabled for this environment")
        if t in self._starts:
            return self._starts[t]
        for e in self.trace:
            if e.first_round <= t < e.first_round + e.rounds:
                return e.action
        raise IndexError(f"round {t} not in trace")

    def true_actions_for(self, contracts) -> set[int]:
        """Distinct best responses recorded for the given contracts."""
        if not self.tracing:
            raise TraceDisabled("tracing is disabled for this environment")
        wanted = [np.asarray(c, dtype=float) for c in contracts]
        found = set()
        for e in self.trace:
            ec = np.asarray(e.contract)
            if any(np.array_equal(ec, w) for w in wanted):
                found.add(e.action)
        return found


class StratifiedEnvironment(Environment):
    """Deterministic 'exact sampling' stand-in used by white-box tests.

    Outcomes come from stratified uniforms ``(i + 1/2)/k``, so empirical
    frequencies over one ``commit_many`` call are within ``1/k`` of the true
    distribution.
    """

    def _uniforms(self, k: int) -> np.ndarray:
        return (np.arange(k) + 0.5) / k
