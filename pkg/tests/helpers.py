"""Shared test utilities."""

import numpy as np


def simplex_points(rng, m, total, k):
    """Uniform points of {p >= 0, sum p <= total}."""
    w = rng.dirichlet(np.ones(m + 1), size=k)
    return w[:, :m] * total


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def report(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE_LINES[-1])
