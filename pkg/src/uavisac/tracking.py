"""Kalman filter for a nearly-constant-velocity target in the ground plane.

State ordering is ``(x, y, vx, vy)``; only position is measured.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

#: Default prior covariance: 10 m position std, 5 m/s velocity std.
DEFAULT_INITIAL_COV = np.diag([100.0, 100.0, 25.0, 25.0])


@dataclass(frozen=True)
class KfModel:
    dt: float = 1.0
    process_var: float = 0.25
    F: np.ndarray = field(init=False, repr=False)
    Q: np.ndarray = field(init=False, repr=False)
    H: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.process_var <= 0:
            raise ValueError("process variance must be positive")
        F = np.eye(4)
        F[0, 2] = F[1, 3] = self.dt
        H = np.zeros((2, 4))
        H[0, 0] = H[1, 1] = 1.0
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "Q", self.process_var * np.eye(4))
        object.__setattr__(self, "H", H)


@dataclass(frozen=True)
class KfState:
    mean: np.ndarray
    cov: np.ndarray

    @classmethod
    def initial(cls, position, velocity=(0.0, 0.0), cov=None):
        mean = np.concatenate([np.asarray(position, float)[:2], np.asarray(velocity, float)])
        return cls(mean, DEFAULT_INITIAL_COV.copy() if cov is None else np.array(cov, float))

    @property
    def position(self):
        return self.mean[:2]


def _sym(c):
    return 0.5 * (c + c.T)


def predict(model, state):
    mean = model.F @ state.mean
    cov = model.F @ state.cov @ model.F.T + model.Q
    return KfState(mean, _sym(cov))


def update(model, prior, z, R):
    """Measurement update with the standard gain and ``(I - K H) C``.

    The innovation covariance is factored by Cholesky; a failed factorization
    means the inputs are not positive definite and raises ``ValueError``.
    """
    H = model.H
    S = H @ prior.cov @ H.T + np.asarray(R, float)
    try:
        factor = linalg.cho_factor(_sym(S))
    except linalg.LinAlgError as err:
        raise ValueError("innovation covariance is not positive definite") from err
    # K = C H^T S^-1, computed as (S^-1 H C)^T since S and C are symmetric
    gain = linalg.cho_solve(factor, H @ prior.cov).T
    innovation = np.asarray(z, float) - H @ prior.mean
    mean = prior.mean + gain @ innovation
    cov = (np.eye(4) - gain @ H) @ prior.cov
    return KfState(mean, _sym(cov))


def gated_step(model, state, measurement=None):
    """Predict, then update only if a ``(z, R)`` pair is supplied."""
    prior = predict(model, state)
    if measurement is None:
        return prior
    z, R = measurement
    return update(model, prior, z, R)
