"""Shared test helpers: independent oracles and signal generators."""

from __future__ import annotations

import math

import numpy as np

from rose_ekf import Measurement, StateVector, predict_state, wrap_angle


def random_state(rng: np.random.Generator) -> StateVector:
    """A state in the regime the filter is exercised in."""
    return StateVector(
        x=float(rng.uniform(-100.0, 100.0)),
        y=float(rng.uniform(-100.0, 100.0)),
        alpha=float(rng.uniform(-math.pi, math.pi)),
        kappa=float(rng.uniform(-1.0, 1.0)),
        v=float(rng.uniform(-10.0, 10.0)),
    )


def fd_jacobian(s: StateVector, dt: float, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of predict_state, wrap-aware on the heading row."""
    jac = np.zeros((5, 5))
    for j in range(5):
        plus = s.as_array()
        minus = s.as_array()
        plus[j] += h
        minus[j] -= h
        fp = predict_state(StateVector.from_array(plus), dt).as_array()
        fm = predict_state(StateVector.from_array(minus), dt).as_array()
        col = (fp - fm) / (2.0 * h)
        col[2] = wrap_angle(fp[2] - fm[2]) / (2.0 * h)
        jac[:, j] = col
    return jac


def matched_cv_signal(
    lam: float, dt: float, sigma2: float, n: int, rng: np.random.Generator,
    v0: float = 0.7,
) -> np.ndarray:
    """Noisy observations of a constant-velocity process whose velocity is
    perturbed by white acceleration consistent with the tracking index lam.

    This is the regime in which the steady-state tracker is the optimal
    filter, so gamma-inflated squared residuals are unbiased for sigma2.
    Returns n + 1 measurements (the first seeds a tracker).
    """
    sigma_w = math.sqrt(sigma2) * lam / (dt * dt)
    pos, vel = 0.0, v0
    sigma = math.sqrt(sigma2)
    out = np.empty(n + 1)
    out[0] = pos + rng.normal(0.0, sigma)
    for i in range(1, n + 1):
        w = rng.normal(0.0, sigma_w)
        pos += vel * dt + 0.5 * dt * dt * w
        vel += dt * w
        out[i] = pos + rng.normal(0.0, sigma)
    return out


def matched_cv_measurements(
    lam: float, dt: float, sigma2: float, n: int, seed: int
) -> list[Measurement]:
    """Two independent matched-process axes packaged as a measurement series."""
    rng = np.random.default_rng(seed)
    xs = matched_cv_signal(lam, dt, sigma2, n, rng)
    ys = matched_cv_signal(lam, dt, sigma2, n, rng, v0=-0.4)
    return [
        Measurement(t=i * dt, x=float(xs[i]), y=float(ys[i])) for i in range(n + 1)
    ]
