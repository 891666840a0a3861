"""Fixed observation preprocessing for the networks.

The raw observation mixes metres, radians and linear SNRs spanning many
decades. The networks see an affine- or log-scaled copy plus a few
derived geometric features (target and user offsets relative to the UAV).
Everything is a fixed function of the observation; nothing is learned.
"""
import numpy as np

from ..environment import StateLayout


class Featurizer:
    def __init__(self, num_users, offset, scale, log_mask, uav_alt, rel_target_scale,
                 user_offset_scale):
        self.layout = StateLayout(num_users)
        self.offset = np.asarray(offset, dtype=float)
        self.scale = np.asarray(scale, dtype=float)
        self.log_mask = np.asarray(log_mask, dtype=bool)
        self.uav_alt = float(uav_alt)
        self.rel_target_scale = float(rel_target_scale)
        self.user_offset_scale = float(user_offset_scale)

    @classmethod
    def from_config(cls, config):
        k = config.num_users
        lay = StateLayout(k)
        half = config.arena / 2.0
        offset = np.zeros(lay.size)
        scale = np.ones(lay.size)
        log_mask = np.zeros(lay.size, dtype=bool)
        offset[lay.uav] = half
        scale[lay.uav] = half
        users_off = np.tile([0.0, 0.0, np.pi / 4, 0.0, 1.0], k)
        users_scale = np.tile([config.arena, np.pi, np.pi / 4, 5.0, 10.0], k)
        users_log = np.tile([False, False, False, True, False], k)
        offset[lay.users], scale[lay.users], log_mask[lay.users] = users_off, users_scale, users_log
        offset[lay.kf_mean] = [half, half, 0.0, 0.0]
        scale[lay.kf_mean] = [half, half, config.target_vmax, config.target_vmax]
        scale[lay.snr] = 3.0
        log_mask[lay.snr] = True
        scale[lay.cov_diag] = 3.0
        log_mask[lay.cov_diag] = True
        scale[lay.cov_trace] = 3.0
        log_mask[lay.cov_trace] = True
        offset[lay.mean_aoi], scale[lay.mean_aoi] = 1.0, 10.0
        offset[lay.progress], scale[lay.progress] = 0.5, 0.5
        return cls(k, offset, scale, log_mask, config.uav_alt,
                   rel_target_scale=5.0 * config.step_limit, user_offset_scale=config.arena)

    @property
    def dim(self):
        return self.layout.size + 2 + 2 * self.layout.num_users

    def __call__(self, states):
        s = np.atleast_2d(np.asarray(states, dtype=float))
        lay = self.layout
        x = np.where(self.log_mask, np.log10(1.0 + np.maximum(s, 0.0)), s)
        base = (x - self.offset) / self.scale

        uav = s[:, lay.uav]
        rel_target = (s[:, lay.kf_mean][:, :2] - uav) / self.rel_target_scale
        users = s[:, lay.users].reshape(len(s), lay.num_users, 5)
        horiz = np.sqrt(np.maximum(users[:, :, 0] ** 2 - self.uav_alt**2, 0.0))
        user_dx = horiz * np.cos(users[:, :, 1]) / self.user_offset_scale
        user_dy = horiz * np.sin(users[:, :, 1]) / self.user_offset_scale
        return np.hstack([base, np.clip(rel_target, -3.0, 3.0), user_dx, user_dy])

    def to_dict(self):
        return {"num_users": self.layout.num_users, "offset": self.offset.tolist(),
                "scale": self.scale.tolist(), "log_mask": self.log_mask.tolist(),
                "uav_alt": self.uav_alt, "rel_target_scale": self.rel_target_scale,
                "user_offset_scale": self.user_offset_scale}

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


class Identity:
    """Pass-through featurizer for tests on bare networks."""

    def __init__(self, dim):
        self.dim = int(dim)

    def __call__(self, states):
        return np.atleast_2d(np.asarray(states, dtype=float))

    def to_dict(self):
        return {"identity": self.dim}
