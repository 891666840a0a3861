"""Scripted comparison policies.

Every policy is a callable ``policy(state, rng) -> raw action`` emitting
values in ``[-1, 1]^(K+3)``, the same interface the learned agent uses.
"""
import numpy as np

from .environment import StateLayout


def _to_raw_displacement(disp, config):
    """Inverse of the displacement scaling in ``decode_action``."""
    limit = config.step_limit
    norm = np.linalg.norm(disp)
    if norm > limit:
        disp = disp * (limit / norm)
    return np.clip(disp / limit, -1.0, 1.0)


def sags_action(state, config):
    """Serve and fly towards the user with the largest AoI.

    The chosen user gets the sensing beam's logit, all others the minimum
    logit, and the threshold sits halfway, so exactly that user is scheduled
    and power splits evenly between it and the sensing beam.
    """
    layout = StateLayout(config.num_users)
    users = layout.user_block(state)
    k = int(np.argmax(users[:, 4]))
    dist, az = users[k, 0], users[k, 1]
    horiz = np.sqrt(max(dist * dist - config.uav_alt**2, 0.0))
    disp = horiz * np.array([np.cos(az), np.sin(az)])

    scale = config.logit_scale
    chosen = np.clip(config.target_logit / scale, -1.0, 1.0)
    logits = np.full(config.num_users, -1.0)
    logits[k] = chosen
    threshold = (chosen - 1.0) / 2.0
    return np.concatenate([_to_raw_displacement(disp, config), logits, [threshold]])


def kfrand_action(state, config, rng, logit_std=None, jitter_std=None):
    """Hover near the Kalman forecast with random user logits.

    The waypoint is the one-slot KF forecast plus a uniform draw from the
    disc of radius ``vmax * dt`` plus Gaussian jitter. Users with a negative
    logit are left out (threshold 0).
    """
    logit_std = config.kfrand_logit_std if logit_std is None else logit_std
    jitter_std = config.kfrand_jitter_std if jitter_std is None else jitter_std
    layout = StateLayout(config.num_users)
    state = np.asarray(state)
    mean = state[layout.kf_mean]
    forecast = mean[:2] + mean[2:] * config.dt

    r = config.step_limit * np.sqrt(rng.uniform())
    theta = rng.uniform(-np.pi, np.pi)
    waypoint = forecast + r * np.array([np.cos(theta), np.sin(theta)])
    waypoint = waypoint + jitter_std * rng.standard_normal(2)
    disp = waypoint - state[layout.uav]

    logits = logit_std * rng.standard_normal(config.num_users)
    raw_logits = np.clip(logits / config.logit_scale, -1.0, 1.0)
    return np.concatenate([_to_raw_displacement(disp, config), raw_logits, [0.0]])


def random_action(config, rng):
    """Uniform random raw action."""
    return rng.uniform(-1.0, 1.0, size=config.action_dim)


class SagsPolicy:
    name = "sags"

    def __init__(self, config):
        self.config = config

    def __call__(self, state, rng=None):
        return sags_action(state, self.config)


class KfRandPolicy:
    name = "kfrand"

    def __init__(self, config):
        self.config = config

    def __call__(self, state, rng):
        return kfrand_action(state, self.config, rng)


class RandomPolicy:
    name = "random"

    def __init__(self, config):
        self.config = config

    def __call__(self, state, rng):
        return random_action(self.config, rng)


POLICIES = {cls.name: cls for cls in (SagsPolicy, KfRandPolicy, RandomPolicy)}
