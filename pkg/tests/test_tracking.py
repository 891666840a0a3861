import numpy as np
import pytest

from uavisac.tracking import KfModel, KfState, gated_step, predict, update


def test_predict_examples():
    m = KfModel(dt=1.0)
    s = predict(m, KfState.initial((0, 0), (1, 1)))
    assert np.allclose(s.mean, [1, 1, 1, 1])
    z = predict(m, KfState(np.zeros(4), np.zeros((4, 4))))
    assert np.allclose(z.cov, m.Q)


def test_predict_trace_oracle():
    m = KfModel(dt=1.0, process_var=0.25)
    cov = 3.0 * np.eye(4)
    out = predict(m, KfState(np.zeros(4), cov))
    oracle = m.F @ cov @ m.F.T + m.Q
    assert np.allclose(out.cov, oracle)
    # F adds dt^2 * sigma^2 per position axis on top of trace(Q)
    assert np.trace(out.cov) == pytest.approx(np.trace(cov) + 2 * 3.0 + np.trace(m.Q))


def test_update_limits():
    m = KfModel()
    prior = KfState(np.array([10.0, -5.0, 1.0, 2.0]), np.diag([4.0, 4.0, 1.0, 1.0]))
    z = np.array([12.0, -3.0])
    loose = update(m, prior, z, 1e12 * np.eye(2))
    assert np.allclose(loose.mean, prior.mean, atol=1e-9)
    tight = update(m, prior, z, 1e-12 * np.eye(2))
    assert np.allclose(tight.mean[:2], z, atol=1e-9)


def test_update_is_bayesian_fusion_per_axis(rng):
    m = KfModel()
    for _ in range(50):
        mu0 = rng.normal(0, 100, 2)
        s0 = rng.uniform(0.1, 50, 2)
        sz = rng.uniform(0.1, 50, 2)
        cov = np.diag([s0[0], s0[1], 1.0, 1.0])
        z = rng.normal(0, 100, 2)
        post = update(m, KfState(np.array([*mu0, 0, 0]), cov), z, np.diag(sz))
        fused = (sz * mu0 + s0 * z) / (s0 + sz)
        var = s0 * sz / (s0 + sz)
        assert np.allclose(post.mean[:2], fused, rtol=0, atol=1e-10 * (1 + np.abs(fused)).max())
        assert np.allclose(np.diag(post.cov)[:2], var, rtol=1e-10)


def test_update_rejects_bad_covariance():
    m = KfModel()
    prior = KfState(np.zeros(4), np.zeros((4, 4)))
    with pytest.raises(ValueError):
        update(m, prior, np.zeros(2), -np.eye(2))


def test_gated_step_composition():
    m = KfModel()
    s = KfState.initial((3.0, 4.0), (1.0, -1.0))
    p = predict(m, s)
    g = gated_step(m, s)
    assert np.array_equal(g.mean, p.mean) and np.array_equal(g.cov, p.cov)
    z, R = np.array([4.5, 2.5]), 0.3 * np.eye(2)
    u = update(m, p, z, R)
    g = gated_step(m, s, (z, R))
    assert np.allclose(g.mean, u.mean) and np.allclose(g.cov, u.cov)


def test_tracking_consistency_on_cv_truth():
    rng = np.random.default_rng(7)
    m = KfModel(process_var=0.25)
    inside = 0
    runs = 200
    for _ in range(runs):
        truth = np.array([0.0, 0.0, 10.0, -4.0])
        s = KfState.initial((0.0, 0.0))
        R = 0.01 * np.eye(2)
        for _ in range(60):
            truth = m.F @ truth + rng.normal(0, 0.5, 4)
            z = truth[:2] + rng.normal(0, 0.1, 2)
            s = gated_step(m, s, (z, R))
        err = s.mean[:2] - truth[:2]
        sd = np.sqrt(np.diag(s.cov)[:2])
        inside += np.all(np.abs(err) <= 3 * sd)
    assert inside / runs > 0.97


def test_covariance_stays_symmetric_psd(rng):
    m = KfModel()
    s = KfState.initial((0.0, 0.0))
    for i in range(200):
        meas = None if i % 3 else (rng.normal(0, 10, 2), rng.uniform(0.01, 10) * np.eye(2))
        s = gated_step(m, s, meas)
        assert np.array_equal(s.cov, s.cov.T)
        assert np.linalg.eigvalsh(s.cov).min() > 0


def test_velocity_converges_on_noiseless_track():
    m = KfModel(process_var=0.25)
    truth = np.array([0.0, 0.0, 12.0, -7.0])
    s = KfState.initial((0.0, 0.0))
    errs = []
    for _ in range(10):
        truth = m.F @ truth
        s = gated_step(m, s, (truth[:2], 1e-6 * np.eye(2)))
        errs.append(np.linalg.norm(s.mean[2:] - truth[2:]))
    assert np.all(np.diff(errs) < 0)


def test_translation_invariance(rng):
    m = KfModel()
    shift = np.array([123.0, -45.0])
    s = KfState(rng.normal(0, 10, 4), np.diag(rng.uniform(1, 20, 4)))
    t = KfState(s.mean + np.r_[shift, 0, 0], s.cov)
    z, R = rng.normal(0, 10, 2), np.diag(rng.uniform(0.1, 5, 2))
    a = gated_step(m, s, (z, R))
    b = gated_step(m, t, (z + shift, R))
    assert np.allclose(b.mean, a.mean + np.r_[shift, 0, 0])
    assert np.allclose(a.cov, b.cov)


def test_posterior_below_prior_loewner(rng):
    m = KfModel()
    for _ in range(500):
        a = rng.standard_normal((4, 4))
        prior = KfState(np.zeros(4), a @ a.T + 1e-3 * np.eye(4))
        post = update(m, prior, rng.normal(0, 1, 2), np.diag(rng.uniform(0.01, 10, 2)))
        assert np.linalg.eigvalsh(prior.cov - post.cov).min() > -1e-10
