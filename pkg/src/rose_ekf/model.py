"""Planar vehicle motion model: state, transition, measurement and Jacobians.

The state is (x, y, alpha, kappa, v): east/north position in meters, heading
angle in radians, path curvature in 1/m and speed in m/s.

Heading convention: alpha is measured from the +y axis, counterclockwise
positive, so the instantaneous motion direction is (-sin(alpha), +cos(alpha)).
alpha = 0 means driving toward +y; alpha = pi/2 means driving toward -x.
This differs from the common atan2(vy, vx) convention.

Transition over a time step dt:

    x'     = x - v*dt*sin(alpha)
    y'     = y + v*dt*cos(alpha)
    alpha' = alpha + v*dt*kappa      (wrapped to (-pi, pi])
    kappa' = kappa
    v'     = v

The position update evaluates sin/cos at the current alpha; the curvature
midpoint term is already absorbed into alpha by construction, which keeps
the analytic Jacobian below exact for this transition.  Speed and curvature
are deliberately unconstrained: clamping (e.g. forcing v >= 0) would bias
the filter that runs on top of this model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi].

    The result differs from the input by a multiple of 2*pi; values already
    in range are returned unchanged.
    """
    a = float(a)
    if not math.isfinite(a):
        raise ValueError(f"angle must be finite, got {a}")
    if -math.pi < a <= math.pi:
        return a
    return math.pi - (math.pi - a) % TWO_PI


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class StateVector:
    """Filter state (x, y, alpha, kappa, v); alpha is stored wrapped."""

    x: float
    y: float
    alpha: float
    kappa: float
    v: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "kappa", "v"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.alpha, self.kappa, self.v])

    @classmethod
    def from_array(cls, arr) -> "StateVector":
        x, y, alpha, kappa, v = (float(c) for c in arr)
        return cls(x, y, alpha, kappa, v)


@dataclass(frozen=True)
class Measurement:
    """Timestamped 2D position observation, the filter's only input."""

    t: float
    x: float
    y: float

    def __post_init__(self) -> None:
        for name in ("t", "x", "y"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))


def _require_dt(dt: float) -> float:
    dt = float(dt)
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be finite and > 0, got {dt}")
    return dt


def predict_state(s: StateVector, dt: float) -> StateVector:
    """Advance the state by one time step of the motion model."""
    dt = _require_dt(dt)
    sin_a = math.sin(s.alpha)
    cos_a = math.cos(s.alpha)
    return StateVector(
        x=s.x - s.v * dt * sin_a,
        y=s.y + s.v * dt * cos_a,
        alpha=wrap_angle(s.alpha + s.v * dt * s.kappa),
        kappa=s.kappa,
        v=s.v,
    )


def jacobian_a(s: StateVector, dt: float) -> np.ndarray:
    """5x5 Jacobian of predict_state with respect to the state."""
    dt = _require_dt(dt)
    sin_a = math.sin(s.alpha)
    cos_a = math.cos(s.alpha)
    a = np.eye(5)
    a[0, 2] = -s.v * dt * cos_a
    a[0, 4] = -dt * sin_a
    a[1, 2] = -s.v * dt * sin_a
    a[1, 4] = dt * cos_a
    a[2, 3] = s.v * dt
    a[2, 4] = dt * s.kappa
    return a


def jacobian_c() -> np.ndarray:
    """2x5 measurement Jacobian: the observation selects (x, y)."""
    return np.array([[1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0]])


def measure(s: StateVector) -> np.ndarray:
    """Measurement function h(s): the observed position (x, y)."""
    return np.array([s.x, s.y])
