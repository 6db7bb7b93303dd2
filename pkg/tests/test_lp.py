import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contractlearn.lp import LinearProgram, LPStatus, maximize, solve_lp


def test_box_corner():
    res = maximize([1, 1], [[1, 0], [0, 1]], [1, 1])
    assert res.status is LPStatus.OPTIMAL
    assert res.value == pytest.approx(2.0)
    assert np.allclose(res.x, [1, 1])


def test_infeasible():
    assert maximize([1], [[1]], [-1]).status is LPStatus.INFEASIBLE


def test_unbounded():
    assert maximize([1, 0], [[0, 1]], [1]).status is LPStatus.UNBOUNDED


def test_hardness_region_lp():
    # a2-region of E1 over the unit box
    A = np.vstack([[0.5, -0.1, -0.4], np.eye(3)])
    b = np.array([-0.25, 1, 1, 1])
    res = maximize([0, -0.1, -0.9], A, b)
    assert res.ok
    assert 0.9 + res.value == pytest.approx(0.4625, abs=1e-9)
    assert np.allclose(res.x, [0, 1, 0.375])


def test_dimension_checks():
    with pytest.raises(ValueError):
        LinearProgram(np.ones(2), np.ones((3, 3)), np.ones(3))
    with pytest.raises(ValueError):
        LinearProgram(np.ones(2), np.ones((3, 2)), np.ones(2))


def _random_bounded(rng, m, k):
    A = rng.normal(size=(k, m))
    b = rng.uniform(-0.5, 1.0, size=k)
    A = np.vstack([A, np.eye(m)])
    b = np.concatenate([b, np.ones(m)])
    return rng.normal(size=m), A, b


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_agrees_with_grid(m, k, seed):
    rng = np.random.default_rng(seed)
    c, A, b = _random_bounded(rng, m, k)
    res = maximize(c, A, b)
    axis = np.arange(0, 1.0 + 1e-9, 0.01 if m == 2 else 0.02)
    grid = np.stack(np.meshgrid(*[axis] * m), -1).reshape(-1, m)
    feas = np.all(grid @ A.T <= b + 1e-12, axis=1)
    if res.status is LPStatus.INFEASIBLE:
        assert not feas.any()
        return
    assert res.ok
    assert np.all(A @ res.x <= b + 1e-7) and np.all(res.x >= -1e-7)
    if feas.any():
        assert res.value >= (grid[feas] @ c).max() - 1e-9
        # the grid gets within one cell of the optimum when it has a feasible interior
        if feas.sum() > 5:
            assert res.value - (grid[feas] @ c).max() <= 0.02 * np.abs(c).sum() * 2 + 0.02


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_weak_duality(m, k, seed):
    rng = np.random.default_rng(seed)
    c, A, b = _random_bounded(rng, m, k)
    res = maximize(c, A, b)
    if not res.ok:
        return
    # any y >= 0 with A^T y >= c gives the bound b.y; take the box rows only
    y = np.concatenate([np.zeros(k), np.maximum(c, 0)])
    assert res.value <= b @ y + 1e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_matches_scipy_on_bounded(m, k, seed):
    from scipy.optimize import linprog

    rng = np.random.default_rng(seed)
    c, A, b = _random_bounded(rng, m, k)
    ours = solve_lp(LinearProgram(c, A, b))
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * m, method="highs")
    if ref.status == 0:
        assert ours.ok and ours.value == pytest.approx(-ref.fun, abs=1e-7)
    elif ref.status == 2:
        assert ours.status is LPStatus.INFEASIBLE
