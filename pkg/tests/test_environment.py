import numpy as np
import pytest

from contractlearn.environment import Environment, StratifiedEnvironment, TraceDisabled
from contractlearn.model import Instance


def test_support_respected(e1):
    env = Environment(e1, seed=0)
    outs = env.commit_many([0, 0, 0], 5000)
    assert set(outs.tolist()) <= {0, 2}


def test_deterministic_distribution():
    inst = Instance([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.5], [0.0, 1.0])
    env = Environment(inst, seed=3)
    assert all(env.commit([0, 0]) == 0 for _ in range(50))


def test_frequency_concentration(e1):
    ok = 0
    for seed in range(100):
        outs = Environment(e1, seed=seed).commit_many([0, 0, 0], 10_000)
        ok += abs(np.mean(outs == 2) - 0.5) <= 0.02
    assert ok >= 99


def test_chi_square(e1):
    from scipy.stats import chisquare

    outs = Environment(e1, seed=11).commit_many([0, 0, 1], 10_000)
    counts = np.bincount(outs, minlength=3)[1:]
    assert chisquare(counts, f_exp=[1000, 9000]).pvalue > 0.01


def test_determinism(e1):
    a = Environment(e1, seed=5)
    b = Environment(e1, seed=5)
    seq = [[0, 0, 0], [0, 0, 1], [0, 3, 0]]
    for p in seq:
        assert np.array_equal(a.commit_many(p, 20), b.commit_many(p, 20))


def test_trace_and_actions(e1):
    env = Environment(e1, seed=1, trace=True)
    env.commit_many([0, 0, 0], 7)
    env.commit([0, 0, 1])
    assert env.rounds_used == 8 == env.traced_rounds
    assert env.action_at_round(3) == 0 and env.action_at_round(7) == 1
    assert env.true_actions_for([[0, 0, 0]]) == {0}
    assert env.true_actions_for([]) == set()
    assert env.true_actions_for([[0, 0, 0], [0, 0, 1]]) == {0, 1}


def test_trace_disabled(e1):
    env = Environment(e1, seed=1)
    env.commit([0, 0, 0])
    with pytest.raises(TraceDisabled):
        env.true_actions_for([[0, 0, 0]])


def test_invalid_contracts(e1):
    env = Environment(e1)
    with pytest.raises(ValueError):
        env.commit([0, 0])
    with pytest.raises(ValueError):
        env.commit([0, -1, 0])


def test_stratified_is_exact(e1):
    env = StratifiedEnvironment(e1)
    outs = env.commit_many([0, 0, 1], 10_000)
    assert np.array_equal(np.bincount(outs, minlength=3), [0, 1000, 9000])
