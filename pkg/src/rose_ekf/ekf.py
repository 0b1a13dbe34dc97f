"""Extended Kalman filter recursion over the planar motion model.

The correction uses the Joseph form (I-KC) P (I-KC)^T + K R K^T, which
preserves symmetry and non-negative diagonals, and the prediction propagates
the covariance as

    P_pred = A (P + Q) A^T

i.e. the process noise is added to the corrected covariance before it is
pushed through the transition Jacobian, not after.  This differs from the
conventional A P A^T + Q placement; the difference is absorbed by the tuning
of Q.  Covariances are re-symmetrized as (P + P^T) / 2 after every update to
bound floating-point drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericalError
from .model import Measurement, StateVector, jacobian_a, measure, predict_state, wrap_angle

# Weakly informative prior: 10 m^2 position, 1 rad^2 heading, 0.1 (1/m)^2
# curvature, 4 (m/s)^2 speed.
DEFAULT_P0_DIAG = (10.0, 10.0, 1.0, 0.1, 4.0)
# Per-step process noise: curvature nearly constant, speed allowed to drift.
DEFAULT_Q_DIAG = (1e-4, 1e-4, 1e-4, 1e-5, 1e-2)

_SYMMETRY_RTOL = 1e-9
_MAX_CONDITION = 1e12
_MIN_DET = 1e-300


def default_p0() -> np.ndarray:
    return np.diag(DEFAULT_P0_DIAG)


def default_q() -> np.ndarray:
    return np.diag(DEFAULT_Q_DIAG)


def validate_covariance(m: np.ndarray, name: str, dim: int) -> np.ndarray:
    """Check shape, finiteness, symmetry and non-negative diagonal."""
    m = np.asarray(m, dtype=float)
    if m.shape != (dim, dim):
        raise ValueError(f"{name} must be {dim}x{dim}, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    scale = max(float(np.max(np.abs(m))), 1.0)
    if float(np.max(np.abs(m - m.T))) > _SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} is not symmetric within tolerance")
    if float(np.min(np.diag(m))) < 0.0:
        raise ValueError(f"{name} has a negative diagonal entry")
    return m


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class EkfState:
    """A state estimate paired with its error covariance."""

    x_hat: StateVector
    P: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "P", validate_covariance(self.P, "P", 5).copy())


class StepResult(NamedTuple):
    predicted: EkfState
    corrected: EkfState


def _invert_2x2(s: np.ndarray, name: str) -> np.ndarray:
    """Closed-form adjugate inverse with singularity and conditioning guards."""
    a, b = s[0, 0], s[0, 1]
    c, d = s[1, 0], s[1, 1]
    det = a * d - b * c
    if not math.isfinite(det) or abs(det) < _MIN_DET:
        raise NumericalError(f"{name} is singular (det={det})")
    # Condition estimate from the symmetric part's eigenvalues.
    tr = a + d
    disc = math.sqrt(max((a - d) * (a - d) + 4.0 * b * c, 0.0))
    lo = (tr - disc) / 2.0
    hi = (tr + disc) / 2.0
    if lo == 0.0 or abs(hi) / abs(lo) > _MAX_CONDITION:
        raise NumericalError(f"{name} is ill-conditioned (eigenvalues {lo}, {hi})")
    return np.array([[d, -b], [-c, a]]) / det


def gain(p_pred: np.ndarray, c: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Kalman gain K = P C^T (C P C^T + R)^-1."""
    s = c @ p_pred @ c.T + r
    s_inv = _invert_2x2(s, "innovation covariance C*P*C^T + R")
    return p_pred @ c.T @ s_inv


def correct(
    e: EkfState, y: np.ndarray, k: np.ndarray, c: np.ndarray, r: np.ndarray
) -> EkfState:
    """Joseph-form measurement update; the heading component is re-wrapped."""
    y = np.asarray(y, dtype=float)
    innovation = y - measure(e.x_hat)
    x = e.x_hat.as_array() + k @ innovation
    if not np.all(np.isfinite(x)):
        raise NumericalError("corrected state contains non-finite entries")
    x[2] = wrap_angle(x[2])
    i_kc = np.eye(5) - k @ c
    p = i_kc @ e.P @ i_kc.T + k @ r @ k.T
    p = symmetrize(p)
    if not np.all(np.isfinite(p)):
        raise NumericalError("corrected covariance contains non-finite entries")
    return EkfState(x_hat=StateVector.from_array(x), P=p)


def predict(e: EkfState, q: np.ndarray, dt: float) -> EkfState:
    """Time update: nonlinear state prediction and P_pred = A (P + Q) A^T."""
    a = jacobian_a(e.x_hat, dt)
    x = predict_state(e.x_hat, dt)
    p = symmetrize(a @ (e.P + q) @ a.T)
    return EkfState(x_hat=x, P=p)


def step(
    e: EkfState, m: Measurement, r: np.ndarray, q: np.ndarray, dt: float
) -> StepResult:
    """One full recursion: gain, Joseph correction, then prediction by dt.

    The input e must be the prediction for the measurement's timestamp; dt is
    the spacing to the next expected measurement (for an evenly sampled
    series, the spacing between consecutive timestamps).  Returns the
    post-prediction state along with the corrected state for logging.
    """
    c = np.array([[1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0]])
    k = gain(e.P, c, r)
    corrected = correct(e, np.array([m.x, m.y]), k, c, r)
    predicted = predict(corrected, q, dt)
    return StepResult(predicted=predicted, corrected=corrected)


def init_from_measurements(m0: Measurement, m1: Measurement, p0: np.ndarray) -> EkfState:
    """Initialize the state from the first two measurements.

    Position is taken from m1, speed from the displacement rate, and the
    heading from the displacement direction under the model's convention
    (alpha = atan2(-dx, dy)); curvature starts at zero.  A zero displacement
    yields v = 0 and alpha = 0.
    """
    if not m1.t > m0.t:
        raise ValueError(f"timestamps must increase: {m0.t} then {m1.t}")
    dt = m1.t - m0.t
    dx = m1.x - m0.x
    dy = m1.y - m0.y
    v = math.hypot(dx, dy) / dt
    alpha = 0.0 if (dx == 0.0 and dy == 0.0) else math.atan2(-dx, dy)
    state = StateVector(x=m1.x, y=m1.y, alpha=alpha, kappa=0.0, v=v)
    return EkfState(x_hat=state, P=validate_covariance(p0, "P0", 5))
