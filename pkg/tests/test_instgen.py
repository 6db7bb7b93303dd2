import itertools

import numpy as np
import pytest

from contractlearn.instgen import GenerationError, gen_hardness, gen_random
from contractlearn.model import principal_utility, validate_instance


def test_single_action():
    inst = gen_random(1, 2, seed=5)
    assert validate_instance(inst) == [] and inst.c[0] == 0.0


def test_separation():
    inst = gen_random(3, 3, seed=7, min_sep=0.2)
    assert validate_instance(inst) == []
    for a, b in itertools.combinations(range(3), 2):
        assert np.abs(inst.F[a] - inst.F[b]).max() >= 0.2


def test_impossible_separation():
    with pytest.raises(GenerationError):
        gen_random(2, 2, seed=0, min_sep=1.1, max_tries=200)


def test_seeded():
    a, b = gen_random(3, 2, seed=9), gen_random(3, 2, seed=9)
    assert np.array_equal(a.F, b.F) and np.array_equal(a.c, b.c)


@pytest.mark.parametrize("eps", [0.01, 0.0125, 0.005, 0.1])
def test_hardness_family(eps):
    inst = gen_hardness(eps, strict=False)
    assert validate_instance(inst) == []
    assert principal_utility(inst, [0, 1 / (4 * eps), 0]) == pytest.approx(0.75 - eps, abs=1e-12)


def test_hardness_range():
    gen_hardness(0.01)
    for bad in (0.1, 0.0125, 0.0, -1):
        with pytest.raises(GenerationError):
            gen_hardness(bad)
    assert np.allclose(gen_hardness(0.1, strict=False).F, [[0.5, 0, 0.5], [0, 0.1, 0.9]])


def test_many_generated_instances_valid():
    for seed in range(50):
        assert validate_instance(gen_random(4, 3, seed=seed, min_sep=0.1)) == []
