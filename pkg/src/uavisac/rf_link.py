"""Downlink channel and SINR, radar return power, pulse SNR and the
SNR-gated position measurement model.

Everything here works in linear units. Conversions to dB happen in the
config layer (inputs) and in the harness (outputs).
"""
from dataclasses import dataclass

import numpy as np

from .array_geometry import compute_aod, steering_vector
from .constants import BOLTZMANN, SPEED_OF_LIGHT

#: Regulariser in the measurement covariance; far below any usable SNR.
EPSILON = 1e-12


@dataclass(frozen=True)
class LinkBudget:
    elem_gain: float
    user_gain: float
    wavelength: float
    noise_power: float
    sinr_threshold: float

    def __post_init__(self):
        for name in ("elem_gain", "user_gain", "wavelength", "noise_power", "sinr_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class RadarBudget:
    """Monostatic radar parameters.

    ``sigma0`` and ``snr_gate`` are derived from the bandwidth and the
    accuracy requirement, never set directly.
    """

    rcs: float
    bandwidth: float
    noise_temp: float
    noise_figure: float
    pulses_per_slot: int
    accuracy_req: float
    epsilon: float = EPSILON

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.bandwidth <= 0 or self.accuracy_req <= 0:
            raise ValueError("bandwidth and accuracy requirement must be positive")

    @property
    def sigma0(self):
        """High-SNR range accuracy bound c / (sqrt(8) pi B)."""
        return SPEED_OF_LIGHT / (np.sqrt(8.0) * np.pi * self.bandwidth)

    @property
    def snr_gate(self):
        return (self.sigma0 / self.accuracy_req) ** 2

    @property
    def noise_power(self):
        return BOLTZMANN * self.noise_temp * self.bandwidth * self.noise_figure


def path_loss(budget, distance):
    """Friis free-space gain ``G_elem G_user lambda^2 / (4 pi d)^2``."""
    if not np.all(np.asarray(distance) > 0):
        raise ValueError(f"distance must be positive, got {distance}")
    return budget.elem_gain * budget.user_gain * budget.wavelength**2 / (4.0 * np.pi * distance) ** 2


def channel_vector(budget, cfg, uav_pos, user_pos):
    """Channel ``h`` such that ``h^H = sqrt(beta) e^{-j 2 pi d / lambda} a^H``.

    Use ``np.vdot(h, w)`` for ``h^H w``.
    """
    uav_pos = np.asarray(uav_pos, dtype=float)
    user = np.zeros(3)
    user[: len(user_pos)] = user_pos
    d = float(np.linalg.norm(uav_pos - user))
    beta = path_loss(budget, d)
    a = steering_vector(cfg, compute_aod(uav_pos, user))
    return np.sqrt(beta) * np.exp(1j * 2.0 * np.pi * d / budget.wavelength) * a


def sinr_all_users(channels, beams, noise_power):
    """Per-user SINR with the sensing beam excluded from interference.

    Parameters
    ----------
    channels : (K, M) complex array
        Row ``k`` is user ``k``'s channel vector ``h_k``.
    beams : (K, M) complex array or BeamPlan
        User beams ``w_k``; zero rows for unscheduled users.
    noise_power : float

    Returns
    -------
    (K,) float array of linear SINR. A zero beam gives SINR 0.
    """
    w = getattr(beams, "user_beams", beams)
    h = np.asarray(channels)
    w = np.asarray(w)
    if h.shape[0] != w.shape[0]:
        raise ValueError(f"{h.shape[0]} channels but {w.shape[0]} beams")
    # gains[k, j] = |h_k^H w_j|^2
    gains = np.abs(h.conj() @ w.T) ** 2
    signal = np.diag(gains)
    interference = gains.sum(axis=1) - signal
    return signal / (interference + noise_power)


def array_factor_gain(cfg, true_aod, sensing_dir, tol=1e-9):
    """One-way array gain ``|a^H(true angles) v_T|^2``; at most ``M``."""
    v = np.asarray(sensing_dir)
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError("sensing direction must have unit norm")
    a = steering_vector(cfg, true_aod)
    return float(np.abs(np.vdot(a, v)) ** 2)


def radar_received_power(radar, cfg, sensing_power, gain, target_range):
    """Echo power from the radar equation with two-way element and array gain."""
    if not target_range > 0:
        raise ValueError(f"range must be positive, got {target_range}")
    num = sensing_power * (cfg.elem_gain * gain) ** 2 * cfg.wavelength**2 * radar.rcs
    return num / ((4.0 * np.pi) ** 3 * target_range**4)


def pulse_snr(radar, received_power):
    """Coherently integrated SNR over ``N_p`` pulses."""
    return received_power / radar.noise_power * radar.pulses_per_slot


def measurement_covariance(radar, snr):
    return radar.sigma0**2 / (snr + radar.epsilon) * np.eye(2)


def reliability_gate(radar, snr):
    return bool(snr >= radar.snr_gate)


def sample_measurement(rng, true_pos, cov):
    """Horizontal position plus a zero-mean Gaussian draw with covariance ``cov``.

    ``cov`` is diagonal here, so the draw is per-axis scaled normals; this
    keeps the zero-covariance case exact.
    """
    true_pos = np.asarray(true_pos, dtype=float)[:2]
    std = np.sqrt(np.maximum(np.diag(cov), 0.0))
    return true_pos + std * rng.standard_normal(2)
