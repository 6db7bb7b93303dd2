import io
import json
from math import comb

import numpy as np
import pytest

from contractlearn.action_oracle import BOT, MetaActionRegistry
from contractlearn.driver import compute_params
from contractlearn.environment import StratifiedEnvironment
from contractlearn.geometry import ContractSpace, Halfspace, Polytope, hull_contains, hull_equals_polytope
from contractlearn.model import Instance
from contractlearn.try_cover import query_budget, region_reference, try_cover

from helpers import simplex_points


def params_for(inst, eps=0.005, q=10_000, eta=1e-4):
    return compute_params(0.5, 0.1, 1.0, inst.m, inst.n, eps=eps, q=q, eta=eta)


def test_single_action_cover():
    inst = Instance([[0.3, 0.7]], [0.0], [0.2, 0.9])
    env = StratifiedEnvironment(inst)
    reg = MetaActionRegistry()
    params = params_for(inst)
    assert try_cover(reg, env, params) is BOT
    cover = try_cover(reg, env, params)
    assert cover is not BOT and cover.metas == [reg.metas[0]]
    (d,) = cover.metas
    assert cover.halfspaces == {}
    assert hull_equals_polytope(cover.regions[d], Polytope(ContractSpace(1.0, 2)))


def test_hardness_instance_two_regions(e1):
    env = StratifiedEnvironment(e1, trace=True)
    reg = MetaActionRegistry()
    params = params_for(e1)
    cover = BOT
    while cover is BOT:
        cover = try_cover(reg, env, params)
    assert len(cover.metas) == 2
    # the region containing the origin belongs to the zero-cost action
    inner = next(d for d in cover.metas if np.allclose(cover.anchors[d], e1.F[0]))
    outer = next(d for d in cover.metas if d != inner)
    h = cover.halfspaces[(inner, outer)]
    assert np.allclose(h.normal, [0.5, -0.1, -0.4], atol=1e-9)
    assert h.offset == pytest.approx(-0.25 - params.y, abs=1e-3)
    for d in cover.metas:
        assert hull_equals_polytope(cover.regions[d], cover.upper[d])


class BotOnThirdCall(MetaActionRegistry):
    calls = 0

    def update(self, freqs, eps):
        self.calls += 1
        if self.calls == 3:
            self.dists[self._next_id] = [freqs]
            self.anchor[self._next_id] = freqs
            self._next_id += 1
            self.bot_count += 1
            return BOT
        return super().update(freqs, eps)


def test_registry_change_aborts(e1):
    reg = BotOnThirdCall()
    env = StratifiedEnvironment(e1)
    params = params_for(e1)
    assert try_cover(reg, env, params) is BOT  # discovery
    assert try_cover(reg, env, params) is BOT  # forced change on the third call
    assert reg.bot_count == 2


def test_dump_writes_json_lines(e1):
    env = StratifiedEnvironment(e1)
    reg = MetaActionRegistry()
    params = params_for(e1)
    buf = io.StringIO()
    cover = BOT
    while cover is BOT:
        cover = try_cover(reg, env, params, dump=buf)
    lines = buf.getvalue().splitlines()
    assert lines and all("upper" in json.loads(line) for line in lines)


def test_region_reference_examples(e1):
    space = ContractSpace(1.0, 3)
    full = region_reference([0], {0: e1.F[0]}, {0: 0.0}, space)
    assert hull_equals_polytope_vertices(full[0], Polytope(space))
    same = region_reference([0, 1], {0: e1.F[0], 1: e1.F[0]}, {0: 0.1, 1: 0.1}, space)
    assert all(len(P.vertices()) == 4 for P in same.values())
    split = region_reference([0, 1], {0: e1.F[0], 1: e1.F[1]}, {0: 0.0, 1: 0.25}, space)
    assert split[0].contains([0, 2.5, 0]) and split[1].contains([0, 2.5, 0])
    assert split[0].contains([0, 2.4, 0]) and not split[1].contains([0, 2.4, 0])
    assert split[1].contains([0, 2.6, 0]) and not split[0].contains([0, 2.6, 0])


def hull_equals_polytope_vertices(P, Q):
    a = {tuple(np.round(v, 9)) for v in P.vertices()}
    b = {tuple(np.round(v, 9)) for v in Q.vertices()}
    return a == b


@pytest.mark.parametrize("seed", range(4))
def test_random_cover_properties(seed):
    from contractlearn.instgen import gen_random

    inst = gen_random(3, 2, seed=seed, min_sep=0.3)
    env = StratifiedEnvironment(inst)
    reg = MetaActionRegistry()
    params = params_for(inst, eps=0.01, eta=1e-3)
    cover = BOT
    attempts = 0
    while cover is BOT:
        attempts += 1
        cover = try_cover(reg, env, params)
    assert reg.bot_count <= 2 * inst.n
    n_meta = len(cover.metas)
    assert cover.oracle_calls <= query_budget(n_meta, inst.m, 1.0, params.eta)
    for d in cover.metas:
        assert len(cover.upper[d].vertices()) <= comb(inst.m + n_meta + 1, inst.m)
        assert sum(1 for (i, _) in cover.halfspaces if i == d) <= n_meta - 1
    P = simplex_points(np.random.default_rng(seed), inst.m, inst.m * 1.0, 2000)
    covered = np.zeros(len(P), dtype=bool)
    for d in cover.metas:
        covered |= hull_contains(cover.regions[d].as_array(), P)
    assert covered.all()
