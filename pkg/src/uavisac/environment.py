"""Finite-horizon MDP for the UAV sensing-and-communication task.

Slot timeline: ``reset`` places the UAV at its pre-deployment position
(slot 0) and returns that observation with progress 0. Each ``step`` then
plays one slot ``n = 1..N``::

    move UAV -> KF predict -> beams (sensing beam from the prior, RZF at the
    new position) -> target at slot n -> radar echo, gate, KF update ->
    user SINRs -> AoI -> reward -> observation

Slot 1 uses the AoI initial condition (all ages 1, generation slot 1), so
an episode yields exactly ``N`` rewards.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import aoi as aoi_mod
from . import tracking
from .array_geometry import compute_aod
from .beam_control import plan_beams
from .rf_link import (array_factor_gain, channel_vector, measurement_covariance, pulse_snr,
                      radar_received_power, reliability_gate, sample_measurement, sinr_all_users)

# stream ids handed to SeedSequence alongside the episode seed
LAYOUT_STREAM, SPAWN_STREAM, TARGET_STREAM, RADAR_STREAM, POLICY_STREAM = range(5)


def episode_rng(seed, stream):
    """Independent generator for one purpose within one seeded episode."""
    return np.random.default_rng([int(seed), stream])


class StateLayout:
    """Index map of the flat observation vector of size ``5K + 14``."""

    def __init__(self, num_users):
        k = num_users
        self.num_users = k
        self.uav = slice(0, 2)
        self.users = slice(2, 2 + 5 * k)
        o = 2 + 5 * k
        self.kf_mean = slice(o, o + 4)
        self.snr = o + 4
        self.cov_diag = slice(o + 5, o + 9)
        self.cov_trace = o + 9
        self.mean_aoi = o + 10
        self.progress = o + 11
        self.size = o + 12

    def user_block(self, state):
        """``(K, 5)`` view: distance, azimuth, elevation, SINR, AoI."""
        return np.asarray(state)[self.users].reshape(self.num_users, 5)


def build_state(uav_xy, distances, azimuths, elevations, sinrs, ages, kf_state, snr,
                progress):
    users = np.column_stack([distances, azimuths, elevations, sinrs, ages]).ravel()
    cov = kf_state.cov
    return np.concatenate([
        np.asarray(uav_xy, float),
        users,
        kf_state.mean,
        [snr],
        np.diag(cov),
        [np.trace(cov)],
        [float(np.mean(ages))],
        [progress],
    ])


class DecodedAction(NamedTuple):
    displacement: np.ndarray
    target_logit: float
    user_logits: np.ndarray
    threshold: float


def decode_action(raw, config):
    """Map a raw action in ``[-1, 1]^(K+3)`` to physical controls.

    Out-of-range entries are clamped. The displacement is scaled by the
    per-slot travel limit and then norm-clipped to it; logits and threshold
    are scaled to ``[-L, L]``.
    """
    raw = np.clip(np.asarray(raw, dtype=float), -1.0, 1.0)
    k = config.num_users
    if raw.shape != (k + 3,):
        raise ValueError(f"action must have {k + 3} entries, got {raw.shape}")
    limit = config.step_limit
    disp = raw[:2] * limit
    norm = np.linalg.norm(disp)
    if norm > limit:
        disp = disp * (limit / norm)
    scale = config.logit_scale
    return DecodedAction(disp, float(config.target_logit), raw[2:2 + k] * scale,
                         float(raw[2 + k] * scale))


def _largest_feasible_scale(d, u, vmax):
    """Largest t in [0, 1] with ||d + t u|| <= vmax, given ||d|| <= vmax."""
    uu = u @ u
    if uu == 0.0:
        return 1.0
    du = d @ u
    disc = du * du - uu * (d @ d - vmax * vmax)
    t = (-du + np.sqrt(max(disc, 0.0))) / uu
    return min(1.0, max(t, 0.0))


def target_next(current, index, config, rng):
    """Next point of the randomly perturbed target path.

    ``index`` counts path points from 0 (start) to ``N - 1`` (end). The step
    is the drift towards the end point plus a perturbation drawn uniformly
    from the disc of radius ``sqrt(vmax^2 - |drift|^2)``. The perturbation
    is shrunk, if needed, so that this step and the next drift both respect
    the speed limit; when the drift alone exceeds it no perturbation is
    added. The last step lands on the end point exactly.
    """
    n_pts = config.horizon
    if not 0 <= index < n_pts - 1:
        raise ValueError(f"path index {index} outside [0, {n_pts - 2}]")
    current = np.asarray(current, dtype=float)
    end = np.asarray(config.target_end, dtype=float)
    if index == n_pts - 2:
        return end.copy()
    drift = (end - current) / (n_pts - 1 - index)
    vmax = config.target_vmax * config.dt
    d2 = drift @ drift
    if d2 >= vmax * vmax:
        return current + drift
    radius = np.sqrt(vmax * vmax - d2) * config.target_jitter
    r = radius * np.sqrt(rng.uniform())
    theta = rng.uniform(-np.pi, np.pi)
    omega = r * np.array([np.cos(theta), np.sin(theta)])
    remaining = n_pts - 2 - index
    t = min(_largest_feasible_scale(drift, omega, vmax),
            _largest_feasible_scale(drift, -omega / remaining, vmax))
    return current + drift + t * omega


def target_trajectory(config, rng):
    """``(N, 2)`` target positions; row ``n - 1`` is the position at slot ``n``."""
    path = np.empty((config.horizon, 2))
    path[0] = config.target_start
    for i in range(config.horizon - 1):
        path[i + 1] = target_next(path[i], i, config, rng)
    return path


@dataclass
class SlotRecord:
    """Diagnostics of the most recent slot."""

    slot: int
    plan: object
    sinr: np.ndarray
    decoded: np.ndarray
    snr: float
    received_power: float
    array_gain: float
    sensing_ok: bool
    target_pos: np.ndarray


class UavIsacEnv:
    """One UAV, ``K`` static users and one moving target."""

    def __init__(self, config):
        self.config = config
        self.layout = StateLayout(config.num_users)
        self._array = config.array_config()
        self._link = config.link_budget()
        self._radar = config.radar_budget()
        self._kf = config.kf_model()
        self.done = True
        self.slot = 0

    @property
    def state_dim(self):
        return self.layout.size

    @property
    def action_dim(self):
        return self.config.action_dim

    def _user_layout(self, seed):
        cfg = self.config
        if cfg.user_positions is not None:
            return np.array(cfg.user_positions, dtype=float)
        rng = episode_rng(seed, LAYOUT_STREAM)
        return rng.uniform(0.0, cfg.arena, size=(cfg.num_users, 2))

    def reset(self, seed=None):
        cfg = self.config
        seed = cfg.seed if seed is None else seed
        self.seed = int(seed)
        self.users = self._user_layout(seed)
        start = np.asarray(cfg.target_start, dtype=float)
        spawn = episode_rng(seed, SPAWN_STREAM)
        self.uav_xy = start + cfg.uav_spawn_std * spawn.standard_normal(2)
        self.target_path = target_trajectory(cfg, episode_rng(seed, TARGET_STREAM))
        self._radar_rng = episode_rng(seed, RADAR_STREAM)
        self.kf_state = self._initial_track(start)
        self.aoi = aoi_mod.AoiState.initial(cfg.num_users)
        self.sinr = np.zeros(cfg.num_users)
        self.snr = 0.0
        self.slot = 0
        self.done = False
        self.last = None
        return self.observe()

    def _initial_track(self, start):
        """Slot-0 track whose one-step prediction is the path start."""
        cfg = self.config
        if cfg.kf_init_velocity == "zero":
            return tracking.KfState.initial(start)
        v = np.asarray(cfg.nominal_target_velocity)
        return tracking.KfState.initial(start - v * cfg.dt, v)

    @property
    def uav_pos(self):
        return np.array([self.uav_xy[0], self.uav_xy[1], self.config.uav_alt])

    def _user_geometry(self):
        uav = self.uav_pos
        out = np.empty((self.config.num_users, 3))
        for k, (x, y) in enumerate(self.users):
            ground = np.array([x, y, 0.0])
            aod = compute_aod(uav, ground)
            out[k] = np.linalg.norm(uav - ground), aod.azimuth, aod.elevation
        return out

    def observe(self):
        geo = self._user_geometry()
        return build_state(self.uav_xy, geo[:, 0], geo[:, 1], geo[:, 2], self.sinr,
                           np.asarray(self.aoi.ages, float), self.kf_state, self.snr,
                           self.slot / self.config.horizon)

    def channels(self):
        uav = self.uav_pos
        return np.array([channel_vector(self._link, self._array, uav, p) for p in self.users])

    def step(self, action):
        if self.done:
            raise RuntimeError("episode is finished; call reset()")
        cfg = self.config
        n = self.slot + 1
        act = decode_action(action, cfg)
        self.uav_xy = self.uav_xy + act.displacement
        uav = self.uav_pos

        prior = tracking.predict(self._kf, self.kf_state)
        h = self.channels()
        plan = plan_beams(self._array, uav, prior.position, h, act.user_logits,
                          act.target_logit, act.threshold, cfg.p_max, cfg.noise_power)

        target = self.target_path[n - 1]
        target3 = np.array([target[0], target[1], 0.0])
        gain = array_factor_gain(self._array, compute_aod(uav, target3), plan.directions[0])
        p_r = radar_received_power(self._radar, self._array, plan.ratios[0] * cfg.p_max, gain,
                                   float(np.linalg.norm(uav - target3)))
        snr = pulse_snr(self._radar, p_r)
        sensing_ok = reliability_gate(self._radar, snr)
        if sensing_ok:
            cov = measurement_covariance(self._radar, snr)
            z = sample_measurement(self._radar_rng, target, cov)
            self.kf_state = tracking.update(self._kf, prior, z, cov)
        else:
            self.kf_state = prior

        sinr = sinr_all_users(h, plan, cfg.noise_power)
        decoded = sinr >= self._link.sinr_threshold
        if n == 1:
            self.aoi = aoi_mod.AoiState.initial(cfg.num_users)
        else:
            self.aoi = aoi_mod.step(self.aoi, sensing_ok, decoded)

        self.sinr = sinr
        self.snr = float(snr)
        self.slot = n
        self.done = n == cfg.horizon
        self.last = SlotRecord(n, plan, sinr, decoded, float(snr), float(p_r), gain,
                               sensing_ok, target.copy())
        reward = -aoi_mod.average_age(self.aoi)
        return self.observe(), reward, self.done
