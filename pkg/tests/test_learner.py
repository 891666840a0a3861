import json

import numpy as np
import pytest

from gradcheck import check_draw
from uavisac.learner import (Adam, Featurizer, Mlp, ReplayBuffer, SacAgent, SacParams,
                             make_agent, policy_forward, soft_update, td_target, train)
from uavisac.learner.sac import q_value
from uavisac.environment import UavIsacEnv


class ConstNet:
    def __init__(self, value):
        self.value = value

    def forward(self, x):
        return np.full((x.shape[0], 1), float(self.value)), None


def test_gradients_match_finite_differences():
    for seed in range(3):
        for err in check_draw(seed):
            assert err < 1e-4


def test_td_target_examples(rng):
    p = SacParams(hidden=(4, 4))
    actor = Mlp((3, 4, 4, 4), rng)
    obs = rng.standard_normal((2, 3))
    noise = rng.standard_normal((2, 2))
    r = np.array([1.0, 1.0])
    y = td_target(p, [ConstNet(3.0), ConstNet(5.0)], actor, r, obs, np.zeros(2), 0.0, noise)
    assert np.allclose(y, 3.97)
    y = td_target(p, [ConstNet(3.0), ConstNet(5.0)], actor, r, obs, np.ones(2), 0.7, noise)
    assert np.array_equal(y, r)


def test_policy_sample_range_and_degenerate_sigma(rng):
    p = SacParams(hidden=(4, 4))
    actor = Mlp((3, 4, 4, 4), rng)
    obs = rng.standard_normal((100_000, 3))
    pol = policy_forward(actor, obs, rng.standard_normal((100_000, 2)), p)
    assert np.all(np.abs(pol.action) < 1)
    # push log-std to its floor: sigma ~ e^-20
    actor.params[-1][2:] = -1e3
    pol = policy_forward(actor, obs[:10], rng.standard_normal((10, 2)), p)
    assert np.allclose(pol.action, np.tanh(pol.mean), atol=1e-8)


def test_log_prob_matches_histogram():
    # 1-D policy with fixed mean/std: compare density at the mode against a histogram
    rng = np.random.default_rng(3)
    p = SacParams(hidden=(1,))
    actor = Mlp((1, 1, 2), rng)
    for i in range(len(actor.params)):
        actor.params[i][...] = 0.0
    mu, log_sigma = 0.3, np.log(0.4)
    actor.params[-1][:] = [mu, log_sigma]
    n = 2_000_000
    pol = policy_forward(actor, np.zeros((n, 1)), rng.standard_normal((n, 1)), p)
    a = pol.action[:, 0]
    mode = np.tanh(mu)
    half = 0.01
    est = np.mean(np.abs(a - mode) < half) / (2 * half)
    one = policy_forward(actor, np.zeros((1, 1)), np.zeros((1, 1)), p)
    assert np.exp(one.log_prob[0]) == pytest.approx(est, rel=0.02)


def test_soft_update_examples(rng):
    a, b = Mlp((2, 3, 1), rng), Mlp((2, 3, 1), rng)
    keep = b.flat()
    soft_update(b, a, 0.0)
    assert np.array_equal(b.flat(), keep)
    soft_update(b, a, 1.0)
    assert np.array_equal(b.flat(), a.flat())
    s, t = Mlp((1, 1), rng), Mlp((1, 1), rng)
    s.set_flat([4.0, 4.0])
    t.set_flat([0.0, 0.0])
    soft_update(t, s, 0.25)
    assert np.allclose(t.flat(), 1.0)
    with pytest.raises(ValueError):
        soft_update(t, a, 0.5)


def test_mlp_backward_input_gradient(rng):
    net = Mlp((3, 5, 2), rng)
    x = rng.standard_normal((4, 3))
    w = rng.standard_normal((4, 2))
    out, cache = net.forward(x)
    _, dx = net.backward(cache, w)
    eps = 1e-6
    for i in range(4):
        for j in range(3):
            xp, xm = x.copy(), x.copy()
            xp[i, j] += eps
            xm[i, j] -= eps
            fd = (np.sum(w * net(xp)) - np.sum(w * net(xm))) / (2 * eps)
            assert dx[i, j] == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_adam_first_step_is_lr_sign():
    p = [np.array([1.0, -2.0])]
    opt = Adam(p, lr=0.1)
    opt.step(p, [np.array([3.0, -0.5])])
    assert np.allclose(p[0], [0.9, -1.9])
    with pytest.raises(ValueError):
        opt.step(p, [np.zeros(3)])


def test_replay_buffer_ring(rng):
    buf = ReplayBuffer(3, 2, 1, rng)
    with pytest.raises(ValueError):
        buf.sample(1)
    for i in range(5):
        buf.push([i, i], [i], float(i), [i + 1, i + 1], i == 4)
    assert len(buf) == 3
    r, d = np.concatenate([buf.sample(3)[2] for _ in range(20)]), None
    s, a, r2, s2, d = buf.sample(3)
    assert np.all(d[r2 == 4.0] == 1.0)
    assert set(r) == {2.0, 3.0, 4.0}


def test_featurizer_shapes_and_bounds(desk_cfg):
    f = Featurizer.from_config(desk_cfg)
    env = UavIsacEnv(desk_cfg)
    s = env.reset(0)
    x = f(s)
    assert x.shape == (1, f.dim)
    assert np.all(np.isfinite(x))
    g = Featurizer.from_dict(json.loads(json.dumps(f.to_dict())))
    assert np.array_equal(g(s), x)


def test_train_zero_episodes_and_guard(desk_cfg):
    p = SacParams(hidden=(8, 8), batch_size=64)
    agent0 = make_agent(desk_cfg, p)
    before = agent0.actor.flat().copy()
    agent, returns = train(lambda: UavIsacEnv(desk_cfg), p, 0, agent=agent0)
    assert returns == [] and np.array_equal(agent.actor.flat(), before)
    # 3 episodes x 20 steps < 64: the buffer never reaches a batch
    agent, returns = train(lambda: UavIsacEnv(desk_cfg), p, 3, agent=agent0)
    assert len(returns) == 3
    assert agent.updates == 0 and np.array_equal(agent.actor.flat(), before)


def test_training_updates_and_checkpoint_roundtrip(desk_cfg, tmp_path):
    p = SacParams(hidden=(8, 8), batch_size=16, grad_repeat=2)
    agent, returns = train(lambda: UavIsacEnv(desk_cfg), p, 2)
    assert agent.updates == 2 * (40 - 16 + 1)
    path = tmp_path / "agent.json"
    agent.save(path)
    other = SacAgent.load(path)
    s = UavIsacEnv(desk_cfg).reset(4)
    assert np.array_equal(agent(s), other(s))
    assert other.temperature == agent.temperature
    # identical continuation after reload
    batch = tuple(np.atleast_1d(x) for x in (np.tile(s, (16, 1)), np.zeros((16, 5)),
                                            np.ones(16), np.tile(s, (16, 1)), np.zeros(16)))
    agent.update(batch)
    other.update(batch)
    assert np.array_equal(agent.actor.flat(), other.actor.flat())
    with pytest.raises(FileNotFoundError, match="missing.json"):
        SacAgent.load(tmp_path / "missing.json")


def test_critic_loss_zero_when_exact(rng):
    from uavisac.learner import critic_loss

    c = Mlp((4, 3, 1), rng)
    obs, act = rng.standard_normal((5, 2)), rng.standard_normal((5, 2))
    y, _ = q_value(c, obs, act)
    loss, _ = critic_loss([c], obs, act, y)
    assert loss == 0.0
