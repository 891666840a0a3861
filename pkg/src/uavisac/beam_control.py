"""From agent logits to beamforming vectors.

Beam index 0 is always the sensing beam; beams ``1..K`` belong to users.
Users are 0-indexed in code.
"""
from dataclasses import dataclass

import numpy as np

from .array_geometry import steering_towards

ALPHA_FLOOR = 1e-9


@dataclass(frozen=True)
class BeamPlan:
    scheduled: tuple
    ratios: np.ndarray
    directions: np.ndarray
    beams: np.ndarray

    @property
    def sensing_beam(self):
        return self.beams[0]

    @property
    def user_beams(self):
        return self.beams[1:]

    @property
    def powers(self):
        return np.sum(np.abs(self.beams) ** 2, axis=1)


def schedule_users(logits, threshold):
    """Users whose logit reaches the threshold, else the single argmax.

    ``np.argmax`` returns the first maximum, so ties go to the lowest index.
    """
    logits = np.asarray(logits, dtype=float)
    chosen = np.flatnonzero(logits >= threshold)
    if chosen.size == 0:
        chosen = np.array([int(np.argmax(logits))])
    return tuple(int(k) for k in chosen)


def power_split(logits, target_logit, scheduled):
    """Softmax over the sensing beam and the scheduled users.

    Returns ``K + 1`` ratios, sensing first, zeros for unscheduled users.
    """
    logits = np.asarray(logits, dtype=float)
    if len(scheduled) == 0:
        raise ValueError("at least one user must be scheduled")
    idx = np.asarray(scheduled)
    z = np.concatenate([[target_logit], logits[idx]])
    z = np.exp(z - z.max())
    z /= z.sum()
    ratios = np.zeros(len(logits) + 1)
    ratios[0] = z[0]
    ratios[idx + 1] = z[1:]
    return ratios


def sensing_direction(cfg, uav_pos, predicted_pos):
    """Normalised steering vector towards a predicted ground position."""
    a = steering_towards(cfg, uav_pos, (predicted_pos[0], predicted_pos[1], 0.0))
    return a / np.linalg.norm(a)


def rzf_alpha(num_scheduled, noise_power, total_power):
    if total_power <= 0:
        return ALPHA_FLOOR
    return max(ALPHA_FLOOR, num_scheduled * noise_power / total_power)


def rzf_directions(channels, powers, noise_power, alpha=None):
    """Unit-norm regularised zero-forcing directions.

    Parameters
    ----------
    channels : (U, M) complex array
        Channel vectors ``h_k`` of the scheduled users.
    powers : (U,) array
        Power assigned to each scheduled user, used for the regulariser.
    noise_power : float
    alpha : float, optional
        Override the adaptive regulariser.

    Returns
    -------
    (U, M) complex array, row ``k`` the direction for scheduled user ``k``.
    """
    h = np.atleast_2d(np.asarray(channels))
    n = h.shape[0]
    if alpha is None:
        alpha = rzf_alpha(n, noise_power, float(np.sum(powers)))
    hs = h.conj()  # rows are h_k^H
    gram = hs @ hs.conj().T + alpha * np.eye(n)
    # V = Hs^H (Hs Hs^H + alpha I)^-1; gram is Hermitian so solve on the right via transpose
    v = np.linalg.solve(gram.T, hs.conj()).T  # (M, U)
    v = v / np.linalg.norm(v, axis=0, keepdims=True)
    return v.T


def assemble(ratios, directions, p_max, tol=1e-6):
    """Scale directions to ``sqrt(rho_i P_max)`` beams."""
    ratios = np.asarray(ratios, dtype=float)
    if np.any(ratios < -tol) or abs(ratios.sum() - 1.0) > tol:
        raise ValueError(f"power ratios must lie on the simplex, got sum {ratios.sum():.9g}")
    ratios = np.clip(ratios, 0.0, None)
    directions = np.asarray(directions, dtype=complex)
    beams = np.sqrt(ratios * p_max)[:, None] * directions
    scheduled = tuple(int(i - 1) for i in np.flatnonzero(ratios[1:] > 0) + 1)
    return BeamPlan(scheduled=scheduled, ratios=ratios, directions=directions, beams=beams)


def plan_beams(cfg, uav_pos, predicted_pos, channels, user_logits, target_logit,
               threshold, p_max, noise_power):
    """Full per-slot pipeline: schedule, split power, steer and assemble.

    Per-user powers inside the RZF regulariser come from this slot's split.
    """
    scheduled = schedule_users(user_logits, threshold)
    ratios = power_split(user_logits, target_logit, scheduled)
    k = len(user_logits)
    directions = np.zeros((k + 1, cfg.size), dtype=complex)
    directions[0] = sensing_direction(cfg, uav_pos, predicted_pos)
    idx = np.asarray(scheduled)
    directions[idx + 1] = rzf_directions(channels[idx], ratios[idx + 1] * p_max, noise_power)
    plan = assemble(ratios, directions, p_max)
    return BeamPlan(scheduled=scheduled, ratios=plan.ratios, directions=directions, beams=plan.beams)
