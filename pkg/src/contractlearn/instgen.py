"""Random and hand-built instances."""

from __future__ import annotations

import numpy as np

from .model import Instance, validate_instance

HARDNESS_MAX_EPS = 1 / 80


class GenerationError(ValueError):
    pass


def _separated(F: np.ndarray, row: np.ndarray, min_sep: float) -> bool:
    return all(np.abs(row - other).max() >= min_sep for other in F)


def gen_random(n: int, m: int, seed=None, min_sep: float = 0.0, max_tries: int = 10_000) -> Instance:
    """Dirichlet(1,...,1) distributions, rejected one action at a time until pairwise
    L-infinity separation is at least ``min_sep``. One random action gets cost 0."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if min_sep < 0:
        raise ValueError("min_sep must be non-negative")
    rng = np.random.default_rng(seed)
    rows = []
    tries = 0
    while len(rows) < n:
        tries += 1
        if tries > max_tries:
            raise GenerationError(
                f"could not place {n} distributions with separation {min_sep} in {max_tries} draws"
            )
        row = rng.dirichlet(np.ones(m))
        if _separated(rows, row, min_sep):
            rows.append(row)
    F = np.array(rows)
    c = rng.random(n)
    c[rng.integers(n)] = 0.0
    r = rng.random(m)
    inst = Instance(F, c, r)
    problems = validate_instance(inst)
    if problems:
        raise GenerationError("; ".join(problems))
    return inst


def gen_hardness(eps_h: float, strict: bool = True) -> Instance:
    """Two actions over three outcomes; optimal unbounded payment is ``1/(4 eps_h)`` on outcome 2.

    ``strict=False`` lifts the ``eps_h < 1/80`` restriction (used for fixtures
    such as ``eps_h = 0.1``).
    """
    upper = HARDNESS_MAX_EPS if strict else 1.0
    if not 0 < eps_h < upper:
        raise GenerationError(f"eps_h must lie in (0, {upper:g}), got {eps_h}")
    F = np.array([[0.5, 0.0, 0.5], [0.0, eps_h, 1.0 - eps_h]])
    return Instance(F, np.array([0.0, 0.25]), np.array([0.0, 0.0, 1.0]))
