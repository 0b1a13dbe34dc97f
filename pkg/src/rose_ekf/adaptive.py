"""Online estimation of the measurement-noise variance from tracker residuals.

Each measured coordinate gets an auxiliary two-state (position, velocity)
tracker running at a fixed steady-state gain.  The tracker's filtered
position is the expected measurement; the gap between it and the actual
measurement drives an exponentially weighted update of the per-axis
measurement variance:

    R <- max(r_floor, gamma * alpha_r * residual**2 + (1 - alpha_r) * R)

The tracker gain comes from a closed form parameterized by the dimensionless
tracking index lambda = dt * sqrt(q / r), the knob that trades lag against
noise transmission.  An independent Riccati iteration is provided to validate
the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError

# Gain recomputation threshold for variable sample spacing, in seconds.
DT_TOLERANCE = 1e-9


def steady_state_gain(lam: float, dt: float) -> tuple[float, float]:
    """Closed-form steady-state gain of the constant-velocity tracker.

    Args:
        lam: tracking index (dimensionless, >= 0).
        dt: sample period in seconds.

    Returns:
        (k0, k1): position gain (dimensionless, in [0, 1)) and velocity
        gain (1/s).
    """
    lam = float(lam)
    dt = float(dt)
    if not math.isfinite(lam) or lam < 0.0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    s = math.sqrt(lam * lam + 8.0 * lam)
    k0 = 0.125 * (-lam * lam - 8.0 * lam + (lam + 4.0) * s)
    k1 = 0.25 / dt * (lam * lam + 4.0 * lam - lam * s)
    return k0, k1


def riccati_gain_oracle(
    q: float, r: float, dt: float, tol: float, max_iter: int = 1_000_000
) -> tuple[float, float]:
    """Steady-state gain by iterating the covariance recursion to a fixed point.

    Independent validation path for steady_state_gain: no closed form is used.
    The recursion adds the process noise before propagating through the
    transition, P_pred = A (P + Q) A^T, with Q the white-acceleration noise of
    the constant-velocity model mapped back through the inverse transition so
    the effective per-step noise A Q A^T is the usual
    sigma_w^2 * [[dt^4/4, dt^3/2], [dt^3/2, dt^2]] with sigma_w^2 = q / dt^2.
    That choice makes the fixed-point gain a function of the tracking index
    lambda = dt * sqrt(q / r) alone.

    Args:
        q: process variance rate in m^2/s^2 (velocity-jump variance per step).
        r: measurement variance in m^2.
        dt: sample period in seconds.
        tol: stop when the gain changes by less than this between iterations.

    Returns:
        The converged (k0, k1).
    """
    if q < 0.0 or r <= 0.0 or dt <= 0.0 or tol <= 0.0:
        raise ValueError(f"need q >= 0, r > 0, dt > 0, tol > 0; got {q}, {r}, {dt}, {tol}")
    if q == 0.0:
        # Zero process noise: the recursion's covariance decays to zero and
        # the gain with it; return the exact limit.
        return 0.0, 0.0

    sw2 = q / (dt * dt)
    q00 = sw2 * dt**4 / 4.0
    q01 = -sw2 * dt**3 / 2.0
    q11 = sw2 * dt * dt
    # Corrected-covariance seed; any positive-definite start converges.
    p00, p01, p11 = r, 0.0, r / (dt * dt)
    k0_prev, k1_prev = math.inf, math.inf
    for _ in range(max_iter):
        # P_pred = A (P + Q) A^T with A = [[1, dt], [0, 1]].
        b00, b01, b11 = p00 + q00, p01 + q01, p11 + q11
        pp00 = b00 + 2.0 * dt * b01 + dt * dt * b11
        pp01 = b01 + dt * b11
        pp11 = b11
        s = pp00 + r
        k0 = pp00 / s
        k1 = pp01 / s
        # Joseph update keeps the 2x2 covariance symmetric and non-negative.
        one_m = 1.0 - k0
        p00 = one_m * one_m * pp00 + k0 * k0 * r
        p01 = one_m * (pp01 - k1 * pp00) + k0 * k1 * r
        p11 = pp11 - 2.0 * k1 * pp01 + k1 * k1 * pp00 + k1 * k1 * r
        if abs(k0 - k0_prev) < tol and abs(k1 - k1_prev) < tol:
            return k0, k1
        k0_prev, k1_prev = k0, k1
    raise ConvergenceError(
        f"gain iteration did not converge within {max_iter} iterations "
        f"(q={q}, r={r}, dt={dt}, tol={tol})"
    )


@dataclass(frozen=True)
class AxisTracker:
    """Constant-velocity tracker for one measured coordinate.

    xt holds the filtered (position, velocity); k is the steady-state gain
    computed for sample period dt_ref and is refreshed whenever the observed
    spacing differs from dt_ref by more than DT_TOLERANCE.
    """

    xt: tuple[float, float]
    lam: float
    k: tuple[float, float] = (0.0, 0.0)
    dt_ref: float = 0.0


def new_axis_tracker(y0: float, lam: float) -> AxisTracker:
    """Tracker starting at the first measurement with zero velocity."""
    if not math.isfinite(y0):
        raise ValueError(f"initial measurement must be finite, got {y0}")
    return AxisTracker(xt=(float(y0), 0.0), lam=float(lam))


def track(tr: AxisTracker, y: float, dt: float) -> tuple[float, AxisTracker]:
    """Advance the tracker with measurement y taken dt after the previous one.

    Returns the expected measurement (the updated position estimate) and the
    updated tracker.
    """
    y = float(y)
    dt = float(dt)
    if not math.isfinite(y):
        raise ValueError(f"measurement must be finite, got {y}")
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    k = tr.k
    dt_ref = tr.dt_ref
    if abs(dt - dt_ref) > DT_TOLERANCE:
        k = steady_state_gain(tr.lam, dt)
        dt_ref = dt
    pos_pred = tr.xt[0] + dt * tr.xt[1]
    # Gain-weighted blend k*y + (I - k*C) A xt; exact at k0 = 1.
    pos = k[0] * y + (1.0 - k[0]) * pos_pred
    vel = tr.xt[1] + k[1] * (y - pos_pred)
    return pos, AxisTracker(xt=(pos, vel), lam=tr.lam, k=k, dt_ref=dt_ref)


def update_r(
    r_prev: float, residual: float, gamma: float, alpha_r: float, r_floor: float
) -> float:
    """One exponentially weighted update of a per-axis measurement variance."""
    if not 0.0 < alpha_r <= 1.0:
        raise ValueError(f"alpha_r must be in (0, 1], got {alpha_r}")
    if gamma <= 0.0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if r_floor <= 0.0:
        raise ValueError(f"r_floor must be > 0, got {r_floor}")
    if r_prev < r_floor:
        raise ValueError(f"r_prev ({r_prev}) must be >= r_floor ({r_floor})")
    return max(r_floor, gamma * alpha_r * residual * residual + (1.0 - alpha_r) * r_prev)


def auto_gamma(k: tuple[float, float]) -> float:
    """Residual-inflation factor that makes the variance update unbiased.

    The tracker's post-fit residual is (1 - k0) times its innovation, whose
    variance at the steady state is R / (1 - k0); the residual variance is
    therefore (1 - k0) * R and scaling the squared residual by 1 / (1 - k0)
    recovers R in expectation.
    """
    k0 = float(k[0])
    if not 0.0 <= k0 < 1.0:
        raise ValueError(f"position gain must be in [0, 1), got {k0}")
    return 1.0 / (1.0 - k0)


@dataclass(frozen=True)
class AdaptiveConfig:
    """Knobs of the adaptive measurement-noise estimator.

    lam: tracking index of the auxiliary trackers.  Configured directly
        rather than derived from Q/R, since the R being estimated is the
        quantity under adaptation.
    alpha_r: smoothing weight in (0, 1]; ~3/alpha_r samples form the
        effective estimation window.
    gamma: residual-inflation factor, or "auto" for 1 / (1 - k0).
    r_init: per-axis variance before any update, m^2.
    r_floor: lower bound keeping the filter from locking up when residuals
        are transiently tiny, m^2.
    """

    lam: float = 0.5
    alpha_r: float = 0.02
    gamma: float | str = "auto"
    r_init: float = 0.25
    r_floor: float = 1e-6

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam) or self.lam < 0.0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not 0.0 < self.alpha_r <= 1.0:
            raise ValueError(f"alpha_r must be in (0, 1], got {self.alpha_r}")
        if self.gamma != "auto" and not (
            isinstance(self.gamma, (int, float)) and self.gamma > 0.0
        ):
            raise ValueError(f"gamma must be > 0 or 'auto', got {self.gamma!r}")
        if not self.r_floor > 0.0:
            raise ValueError(f"r_floor must be > 0, got {self.r_floor}")
        if self.r_init < self.r_floor:
            raise ValueError(
                f"r_init ({self.r_init}) must be >= r_floor ({self.r_floor})"
            )

    def gamma_for(self, k: tuple[float, float]) -> float:
        """Resolve the inflation factor for a tracker gain."""
        if self.gamma == "auto":
            return auto_gamma(k)
        return float(self.gamma)
