"""Ground-truth principal-agent instances and the agent's exact best response.

Nothing in this module is visible to the learner; only the environment and
white-box tests read it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# agent utilities closer than this are treated as ties
TIE_TOL = 1e-9
_SUM_TOL = 1e-12


class InstanceError(ValueError):
    """Raised when an instance file or array violates the model invariants."""


@dataclass(frozen=True, eq=False)
class Instance:
    """A hidden-action principal-agent problem.

    ``F[a, w]`` is the probability that action ``a`` yields outcome ``w``,
    ``c[a]`` the agent's cost of action ``a`` and ``r[w]`` the principal's
    reward for outcome ``w``.
    """

    F: np.ndarray
    c: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        for name in ("F", "c", "r"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.F.ndim != 2:
            raise InstanceError("F must be an n x m matrix")
        if self.c.shape != (self.F.shape[0],) or self.r.shape != (self.F.shape[1],):
            raise InstanceError(
                f"shape mismatch: F {self.F.shape}, c {self.c.shape}, r {self.r.shape}"
            )

    @property
    def n(self) -> int:
        return self.F.shape[0]

    @property
    def m(self) -> int:
        return self.F.shape[1]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "F": self.F.tolist(),
            "c": self.c.tolist(),
            "r": self.r.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            inst = cls(F=data["F"], c=data["c"], r=data["r"])
        except KeyError as exc:
            raise InstanceError(f"missing field {exc}") from None
        if data.get("n", inst.n) != inst.n or data.get("m", inst.m) != inst.m:
            raise InstanceError("declared n/m disagree with array shapes")
        return inst


def validate_instance(inst: Instance) -> list[str]:
    """Return every invariant violation; an empty list means the instance is valid."""
    problems = []
    for a, row in enumerate(inst.F):
        total = row.sum()
        if abs(total - 1.0) > _SUM_TOL:
            problems.append(f"distribution of action {a} sums to {total:.12g}")
        if np.any(row < 0) or np.any(row > 1):
            problems.append(f"distribution of action {a} has entries outside [0,1]")
    if np.any(inst.c < 0) or np.any(inst.c > 1):
        problems.append("costs must lie in [0,1]")
    if np.any(inst.r < 0) or np.any(inst.r > 1):
        problems.append("rewards must lie in [0,1]")
    if not np.any(inst.c == 0.0):
        problems.append("no zero-cost action")
    return problems


def load_instance(path) -> Instance:
    with open(path) as fh:
        data = json.load(fh)
    inst = Instance.from_dict(data)
    problems = validate_instance(inst)
    if problems:
        raise InstanceError(f"{path}: " + "; ".join(problems))
    return inst


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(inst.to_dict(), indent=2) + "\n")


def _check_contract(inst: Instance, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != inst.m:
        raise ValueError(f"contract has dimension {p.shape[-1]}, expected {inst.m}")
    return p


def agent_utility(inst: Instance, action: int, p) -> float:
    if not 0 <= action < inst.n:
        raise IndexError(f"action {action} out of range for n={inst.n}")
    p = _check_contract(inst, p)
    return float(inst.F[action] @ p - inst.c[action])


def best_responses(inst: Instance, P) -> np.ndarray:
    """Vectorised best response for a batch of contracts (rows of ``P``).

    Agent ties within ``TIE_TOL`` go to the action the principal prefers;
    exact principal ties go to the lowest index.
    """
    P = np.atleast_2d(_check_contract(inst, P))
    agent = P @ inst.F.T - inst.c
    principal = inst.F @ inst.r - P @ inst.F.T
    tied = agent >= agent.max(axis=1, keepdims=True) - TIE_TOL
    return np.where(tied, principal, -np.inf).argmax(axis=1)


def best_response(inst: Instance, p) -> int:
    return int(best_responses(inst, p)[0])


def principal_utility(inst: Instance, p) -> float:
    p = _check_contract(inst, p)
    a = best_response(inst, p)
    return float(inst.F[a] @ (inst.r - p))


def principal_utilities(inst: Instance, P) -> np.ndarray:
    P = np.atleast_2d(_check_contract(inst, P))
    a = best_responses(inst, P)
    return np.einsum("ij,ij->i", inst.F[a], inst.r - P)
