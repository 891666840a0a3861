import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavisac.array_geometry import compute_aod
from uavisac.beam_control import (ALPHA_FLOOR, assemble, plan_beams, power_split, rzf_alpha,
                                  rzf_directions, schedule_users, sensing_direction)
from uavisac.rf_link import array_factor_gain, channel_vector


def test_schedule_examples():
    assert schedule_users([2, -1, 0.5], 0) == (0, 2)
    assert schedule_users([-3, -1, -2], 0) == (1,)
    assert schedule_users([1, 1, 0], 2) == (0,)


def test_power_split_examples():
    r = power_split([0.0], 0.0, (0,))
    assert np.allclose(r, [0.5, 0.5])
    r = power_split([0.0, 3.0], math.log(2), (0,))
    assert np.allclose(r, [2 / 3, 1 / 3, 0.0])
    assert r[2] == 0.0
    with pytest.raises(ValueError):
        power_split([0.0], 0.0, ())


@settings(max_examples=200)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=12), st.floats(-5, 5), st.floats(-5, 5))
def test_split_is_on_simplex(logits, target, tau):
    sched = schedule_users(logits, tau)
    r = power_split(logits, target, sched)
    assert len(sched) >= 1
    assert np.all(r >= 0)
    assert abs(r.sum() - 1) <= 1e-12
    off = [k for k in range(len(logits)) if k not in sched]
    assert np.all(r[np.array(off, int) + 1] == 0)


def test_sensing_direction(table_cfg):
    cfg = table_cfg.array_config()
    uav = np.array([0.0, 0.0, 50.0])
    v = sensing_direction(cfg, uav, (120.0, 60.0))
    assert abs(np.linalg.norm(v) - 1) <= 1e-12
    truth = compute_aod(uav, (120.0, 60.0, 0.0))
    assert array_factor_gain(cfg, truth, v) == pytest.approx(cfg.size)
    horiz = math.sqrt(200**2 - 50**2)
    off = sensing_direction(cfg, uav, (horiz + 10, 0.0))
    assert array_factor_gain(cfg, compute_aod(uav, (horiz, 0, 0)), off) < cfg.size


def test_rzf_single_user_is_matched_filter(table_cfg):
    cfg, link = table_cfg.array_config(), table_cfg.link_budget()
    h = channel_vector(link, cfg, (0, 0, 50), (300, 200))
    v = rzf_directions(h[None, :], [0.05], 1e-12)[0]
    assert abs(np.linalg.norm(v) - 1) < 1e-12
    assert abs(np.vdot(h, v)) == pytest.approx(np.linalg.norm(h), rel=1e-9)


def test_rzf_orthogonal_channels():
    m = 16
    h = np.zeros((2, m), complex)
    h[0, :8] = np.exp(1j * np.arange(8))
    h[1, 8:] = np.exp(-1j * np.arange(8))
    h *= 1e-4
    v = rzf_directions(h, [0.05, 0.05], 1e-12)
    assert abs(np.vdot(h[1], v[0])) <= 1e-9 * abs(np.vdot(h[0], v[0]))
    assert abs(np.vdot(h[0], v[1])) <= 1e-9 * abs(np.vdot(h[1], v[1]))


def test_rzf_nulls_interference_generic(rng):
    # vanishing regulariser: RZF tends to plain zero forcing
    h = rng.standard_normal((3, 16)) + 1j * rng.standard_normal((3, 16))
    v = rzf_directions(h, [1.0, 1.0, 1.0], 1e-12, alpha=1e-12)
    g = np.abs(np.conj(h) @ v.T)
    off = g - np.diag(np.diag(g))
    assert off.max() < 1e-6 * np.diag(g).min()


def test_alpha_floor():
    assert rzf_alpha(3, 1e-12, 1e6) == ALPHA_FLOOR
    assert rzf_alpha(2, 1e-3, 1.0) == pytest.approx(2e-3)
    assert rzf_alpha(2, 1e-3, 0.0) == ALPHA_FLOOR


def test_assemble_examples(rng):
    d = np.ones((3, 4), complex) / 2
    plan = assemble([1.0, 0.0, 0.0], d, 0.1)
    assert np.linalg.norm(plan.sensing_beam) ** 2 == pytest.approx(0.1)
    plan = assemble([1 / 3] * 3, d, 0.1)
    assert np.allclose(plan.powers, 0.1 / 3)
    for _ in range(100):
        r = rng.dirichlet(np.ones(5))
        d = rng.standard_normal((5, 16)) + 1j * rng.standard_normal((5, 16))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        total = sum(float(np.sum(np.abs(w) ** 2)) for w in assemble(r, d, 0.1).beams)
        assert total == pytest.approx(0.1, abs=1e-9)
    with pytest.raises(ValueError):
        assemble([0.7, 0.7], np.ones((2, 4)) / 2, 0.1)


def test_plan_beams_pipeline(table_cfg, rng):
    cfg, link = table_cfg.array_config(), table_cfg.link_budget()
    uav = np.array([400.0, 400.0, 50.0])
    users = rng.uniform(0, 1600, (6, 2))
    h = np.array([channel_vector(link, cfg, uav, u) for u in users])
    logits = np.array([1.0, -2.0, 0.5, -4.0, 2.0, -1.0])
    plan = plan_beams(cfg, uav, (420.0, 390.0), h, logits, 0.0, 0.0, 0.1, 1e-12)
    assert plan.scheduled == (0, 2, 4)
    assert plan.powers.sum() == pytest.approx(0.1)
    assert np.allclose(plan.powers[[2, 4, 6]], 0.0)
    assert np.allclose(np.linalg.norm(plan.directions[[0, 1, 3, 5]], axis=1), 1.0)
