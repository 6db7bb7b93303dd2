"""Map the agent's (unobserved) best response at a contract to a meta-action.

A meta-action groups actions whose outcome distributions cannot be told
apart at the current sampling resolution. When an estimate matches no known
meta-action, or matches several, the registry is restructured and ``BOT`` is
returned so the caller can restart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class _Bot:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOT"

    def __bool__(self):
        return False


BOT = _Bot()


class RoundBudgetExceeded(RuntimeError):
    def __init__(self, rounds_used: int, cap: int, contract=None):
        super().__init__(f"round budget exceeded: {rounds_used} needed, cap {cap}")
        self.rounds_used = rounds_used
        self.cap = cap
        # the contract that would have been committed next
        self.contract = contract


@dataclass
class QueryRecord:
    contract: np.ndarray
    freqs: np.ndarray
    result: object
    first_round: int
    rounds: int


@dataclass
class MetaActionRegistry:
    """The learner's meta-actions, their stored estimates and anchors."""

    dists: dict = field(default_factory=dict)
    anchor: dict = field(default_factory=dict)
    bot_count: int = 0
    history: list = field(default_factory=list)
    round_cap: int | None = None
    _next_id: int = 0

    @property
    def metas(self) -> list[int]:
        return sorted(self.dists)

    def __len__(self):
        return len(self.dists)

    def matches(self, freqs: np.ndarray, eps: float) -> list[int]:
        return [
            d for d in self.metas
            if any(np.abs(F - freqs).max() <= 2 * eps for F in self.dists[d])
        ]

    def update(self, freqs: np.ndarray, eps: float):
        """Compare one estimate against the registry; returns a meta id or ``BOT``."""
        hits = self.matches(freqs, eps)
        if len(hits) == 1:
            self.dists[hits[0]].append(freqs)
            return hits[0]
        new = self._next_id
        self._next_id += 1
        merged = [F for d in hits for F in self.dists.pop(d)]
        for d in hits:
            self.anchor.pop(d, None)
        self.dists[new] = merged + [freqs]
        self.anchor[new] = freqs
        self.bot_count += 1
        return BOT


def estimate(env, p, q: int) -> np.ndarray:
    """Commit ``p`` for ``q`` rounds and return the empirical outcome frequencies."""
    outcomes = env.commit_many(p, q)
    return np.bincount(outcomes, minlength=env.m) / q


def query(reg: MetaActionRegistry, env, p, q: int, eps: float):
    if q < 1 or eps <= 0:
        raise ValueError("need q >= 1 and eps > 0")
    if reg.round_cap is not None and env.rounds_used + q > reg.round_cap:
        raise RoundBudgetExceeded(env.rounds_used + q, reg.round_cap, np.asarray(p, dtype=float))
    p = np.asarray(p, dtype=float)
    start = env.rounds_used
    freqs = estimate(env, p, q)
    result = reg.update(freqs, eps)
    reg.history.append(QueryRecord(p.copy(), freqs, result, start, q))
    return result


# -- white-box helpers -------------------------------------------------------

def true_action(env, record: QueryRecord) -> int:
    return env.action_at_round(record.first_round)


def associated_actions(reg: MetaActionRegistry, env, d: int) -> set[int]:
    """True best responses behind the estimates currently stored under ``d``."""
    stored = reg.dists[d]
    return {
        true_action(env, rec)
        for rec in reg.history
        if any(rec.freqs is F for F in stored)
    }


def meta_cost_estimate(reg: MetaActionRegistry, env, d: int) -> float:
    """Ground-truth cost of a meta-action: the cheapest associated action."""
    actions = associated_actions(reg, env, d)
    if not actions:
        raise ValueError(f"meta-action {d} has no associated actions")
    return float(min(env.instance.c[a] for a in actions))


def clean_event_held(reg: MetaActionRegistry, env, eps: float) -> bool:
    """Whether every estimate so far was within ``eps`` of the true distribution."""
    F = env.instance.F
    return all(
        np.abs(rec.freqs - F[true_action(env, rec)]).max() <= eps
        for rec in reg.history
    )
