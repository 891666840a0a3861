"""Scenario configuration with the default simulation parameters.

Fields carry their natural units (dB, dBm, dBi where the parameter is
usually quoted that way); the ``*_budget`` helpers convert to the linear
quantities the physics modules expect. JSON fixtures use the same field
names as this dataclass.
"""
import dataclasses
import json
from dataclasses import dataclass

from .array_geometry import ArrayConfig
from .constants import SPEED_OF_LIGHT, db_to_linear, dbm_to_watts
from .rf_link import EPSILON, LinkBudget, RadarBudget
from .tracking import KfModel


@dataclass(frozen=True)
class ScenarioConfig:
    num_users: int = 6
    horizon: int = 60
    dt: float = 1.0
    arena: float = 1600.0
    uav_alt: float = 50.0
    uav_vmax: float = 20.0
    uav_spawn_std: float = 10.0
    target_vmax: float = 15.0
    target_start: tuple = (350.0, 350.0)
    target_end: tuple = (1150.0, 1150.0)
    #: scale of the random trajectory perturbation relative to its allowed radius
    target_jitter: float = 1.0
    mx: int = 4
    my: int = 4
    carrier_hz: float = 2e9
    p_max_dbm: float = 20.0
    elem_gain_dbi: float = 3.0
    user_gain_dbi: float = 0.0
    noise_dbm: float = -90.0
    gamma_th_db: float = 10.0
    rcs: float = 1.0
    noise_temp: float = 290.0
    bandwidth: float = 100e6
    noise_figure_db: float = 20.0
    pulses_per_slot: int = 32
    sigma_req: float = 1.0
    epsilon: float = EPSILON
    process_var: float = 0.25
    #: "drift": KF starts with the nominal path velocity; "zero": at rest
    kf_init_velocity: str = "drift"
    discount: float = 0.99
    target_logit: float = 0.0
    logit_scale: float = 5.0
    kfrand_logit_std: float = 1.0
    kfrand_jitter_std: float = 5.0
    user_positions: tuple = None
    seed: int = 0

    def __post_init__(self):
        if self.num_users < 1 or self.horizon < 2:
            raise ValueError("need at least one user and two slots")
        if self.dt <= 0 or self.uav_vmax <= 0 or self.target_vmax <= 0:
            raise ValueError("dt and speed limits must be positive")
        if self.uav_alt <= 0:
            raise ValueError("UAV altitude must be positive")
        if self.kf_init_velocity not in ("drift", "zero"):
            raise ValueError("kf_init_velocity must be 'drift' or 'zero'")
        if not 0.0 < self.discount < 1.0:
            raise ValueError("discount must lie in (0, 1)")
        object.__setattr__(self, "target_start", tuple(float(v) for v in self.target_start))
        object.__setattr__(self, "target_end", tuple(float(v) for v in self.target_end))
        if self.user_positions is not None:
            users = tuple(tuple(float(v) for v in p) for p in self.user_positions)
            if len(users) != self.num_users or any(len(p) != 2 for p in users):
                raise ValueError(f"user_positions must hold {self.num_users} [x, y] pairs")
            object.__setattr__(self, "user_positions", users)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def p_max(self):
        return float(dbm_to_watts(self.p_max_dbm))

    @property
    def noise_power(self):
        return float(dbm_to_watts(self.noise_dbm))

    @property
    def step_limit(self):
        return self.uav_vmax * self.dt

    @property
    def num_antennas(self):
        return self.mx * self.my

    @property
    def state_dim(self):
        return 5 * self.num_users + 14

    @property
    def action_dim(self):
        return self.num_users + 3

    @property
    def nominal_target_velocity(self):
        """Straight-line velocity from the path start to its end."""
        start, end = self.target_start, self.target_end
        steps = (self.horizon - 1) * self.dt
        return ((end[0] - start[0]) / steps, (end[1] - start[1]) / steps)

    def array_config(self):
        return ArrayConfig(mx=self.mx, my=self.my, wavelength=self.wavelength,
                           elem_gain=float(db_to_linear(self.elem_gain_dbi)))

    def link_budget(self):
        return LinkBudget(elem_gain=float(db_to_linear(self.elem_gain_dbi)),
                          user_gain=float(db_to_linear(self.user_gain_dbi)),
                          wavelength=self.wavelength,
                          noise_power=self.noise_power,
                          sinr_threshold=float(db_to_linear(self.gamma_th_db)))

    def radar_budget(self):
        return RadarBudget(rcs=self.rcs, bandwidth=self.bandwidth, noise_temp=self.noise_temp,
                           noise_figure=float(db_to_linear(self.noise_figure_db)),
                           pulses_per_slot=self.pulses_per_slot,
                           accuracy_req=self.sigma_req, epsilon=self.epsilon)

    def kf_model(self):
        return KfModel(dt=self.dt, process_var=self.process_var)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = [list(v) if isinstance(v, tuple) else v for v in value]
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)


def load_user_layout(path):
    """Read a JSON array of ``[x, y]`` pairs."""
    with open(path) as fh:
        data = json.load(fh)
    if not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise ValueError(f"{path}: expected a JSON array of [x, y] pairs")
    return tuple((float(x), float(y)) for x, y in data)


def desk_scenario(**overrides):
    """Reduced scenario for the desk-scale learning check.

    Two users, 20 slots and a 2x2 array. The target path is shortened so the
    required drift (about 11 m/s) stays under the target's speed limit.
    """
    base = dict(num_users=2, horizon=20, mx=2, my=2,
                target_start=(350.0, 350.0), target_end=(500.0, 500.0))
    base.update(overrides)
    return ScenarioConfig(**base)
