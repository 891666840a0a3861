"""Uniform planar array geometry, angles of departure and steering vectors.

The array lies in the horizontal plane under the UAV. Elements are indexed
``(iy, ix)`` and flattened y-major, i.e. the steering vector is the
Kronecker product ``a_y (x) a_x`` and entry ``iy * mx + ix`` belongs to
element ``(iy, ix)``.
"""
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry of an ``mx`` by ``my`` UPA.

    Parameters
    ----------
    mx, my : int
        Element counts along x and y.
    wavelength : float
        Carrier wavelength in meters.
    spacing_x, spacing_y : float, optional
        Element spacing in meters. Defaults to half a wavelength.
    elem_gain : float
        Linear per-element gain.
    """

    mx: int
    my: int
    wavelength: float
    spacing_x: float = None
    spacing_y: float = None
    elem_gain: float = 1.0

    def __post_init__(self):
        if self.mx < 1 or self.my < 1:
            raise ValueError(f"array needs at least one element per axis, got {self.mx}x{self.my}")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        if self.spacing_x is None:
            object.__setattr__(self, "spacing_x", self.wavelength / 2)
        if self.spacing_y is None:
            object.__setattr__(self, "spacing_y", self.wavelength / 2)

    @classmethod
    def from_carrier(cls, mx, my, carrier_hz, elem_gain=1.0):
        return cls(mx=mx, my=my, wavelength=SPEED_OF_LIGHT / carrier_hz, elem_gain=elem_gain)

    @property
    def size(self):
        return self.mx * self.my


@dataclass(frozen=True)
class AoD:
    """Azimuth in [-pi, pi] and elevation in [0, pi/2] (0 = straight down)."""

    azimuth: float
    elevation: float


def compute_aod(uav_pos, ground_pos):
    """Angle of departure from the UAV towards a ground point.

    Directly overhead, ``atan2(0, 0)`` gives azimuth 0; the elevation is 0
    there so the steering vector does not depend on the azimuth anyway.
    """
    uav_pos = np.asarray(uav_pos, dtype=float)
    ground_pos = np.asarray(ground_pos, dtype=float)
    dx = ground_pos[0] - uav_pos[0]
    dy = ground_pos[1] - uav_pos[1]
    height = uav_pos[2] - (ground_pos[2] if ground_pos.size > 2 else 0.0)
    dist = np.sqrt(dx * dx + dy * dy + height * height)
    azimuth = np.arctan2(dy, dx)
    if dist == 0.0:
        return AoD(float(azimuth), 0.0)
    elevation = np.arccos(np.clip(height / dist, -1.0, 1.0))
    return AoD(float(azimuth), float(elevation))


def axis_phases(cfg, aod):
    """Per-axis phasors ``(a_x, a_y)`` for one AoD."""
    k = 2.0 * np.pi / cfg.wavelength
    s = np.sin(aod.elevation)
    ax = np.exp(-1j * k * cfg.spacing_x * np.arange(cfg.mx) * s * np.cos(aod.azimuth))
    ay = np.exp(-1j * k * cfg.spacing_y * np.arange(cfg.my) * s * np.sin(aod.azimuth))
    return ax, ay


def steering_vector(cfg, aod):
    """Length ``mx * my`` unit-modulus steering vector, y-major order."""
    ax, ay = axis_phases(cfg, aod)
    return np.kron(ay, ax)


def steering_towards(cfg, uav_pos, ground_pos):
    return steering_vector(cfg, compute_aod(uav_pos, ground_pos))
