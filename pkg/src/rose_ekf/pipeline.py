"""Composition of the motion model, EKF recursion and adaptive noise tracking.

A PoseFilter consumes timestamped position measurements and emits one
estimation record per measurement after a two-sample warm-up: the first two
measurements initialize the state (position, displacement speed and heading)
and produce no output.

In "rose" mode the per-axis measurement variance is re-estimated before
every filter step from the auxiliary trackers' residuals; in "static" mode a
fixed measurement covariance is used, either given explicitly or calibrated
from the residuals of the leading samples of the series, which keeps the two
modes identical except for the time-dependence of R.

Prediction is deferred until the next measurement arrives, so each step uses
the actual spacing between consecutive timestamps as its horizon; for an
evenly sampled series this reproduces the correct-then-predict recursion of
ekf.step exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import ekf
from .adaptive import AdaptiveConfig, AxisTracker, new_axis_tracker, track, update_r
from .errors import NumericalError, SequencingError
from .model import Measurement, StateVector, jacobian_c
from .scenario import GroundTruthSample  # noqa: F401  (re-exported for callers)


@dataclass(frozen=True)
class FilterOutput:
    """Per-sample estimation record (the corrected state, not the prediction)."""

    t: float
    state: StateVector
    p_diag: tuple[float, float, float, float, float]
    r_used: tuple[float, float]
    expected_xy: tuple[float, float] | None = None


@dataclass(frozen=True)
class FilterConfig:
    adaptive: AdaptiveConfig = AdaptiveConfig()
    q: np.ndarray = field(default_factory=ekf.default_q)
    p0: np.ndarray = field(default_factory=ekf.default_p0)
    mode: str = "rose"
    static_r: np.ndarray | None = None
    calib_len: int = 100

    def __post_init__(self) -> None:
        if self.mode not in ("rose", "static"):
            raise ValueError(f"mode must be 'rose' or 'static', got {self.mode!r}")
        if self.calib_len < 2:
            raise ValueError(f"calib_len must be >= 2, got {self.calib_len}")
        object.__setattr__(self, "q", ekf.validate_covariance(self.q, "Q", 5).copy())
        object.__setattr__(self, "p0", ekf.validate_covariance(self.p0, "P0", 5).copy())
        # static_r may be carried alongside rose mode (one config document can
        # serve both arms of a comparison); it is only consulted in static mode.
        if self.static_r is not None:
            r = ekf.validate_covariance(self.static_r, "static R", 2)
            if np.min(np.diag(r)) <= 0.0:
                raise ValueError("static R needs a strictly positive diagonal")
            object.__setattr__(self, "static_r", r.copy())


class PoseFilter:
    """Stateful filter over one measurement series.  Not thread-safe."""

    def __init__(self, config: FilterConfig):
        if config.mode == "static" and config.static_r is None:
            raise ValueError(
                "static mode needs static_r; use run() to calibrate it from the series"
            )
        self._cfg = config
        self._c = jacobian_c()
        self._first: Measurement | None = None
        self._prev_t: float | None = None
        self._tracker_x: AxisTracker | None = None
        self._tracker_y: AxisTracker | None = None
        self._r = (config.adaptive.r_init, config.adaptive.r_init)
        self._state: ekf.EkfState | None = None
        self._index = -1

    def process(self, m: Measurement) -> FilterOutput | None:
        """Consume one measurement; returns None for the two warm-up samples."""
        self._index += 1
        if self._prev_t is not None and m.t <= self._prev_t:
            raise SequencingError(
                f"sample {self._index}: timestamp {m.t} not greater than {self._prev_t}"
            )
        if self._first is None:
            self._first = m
            self._prev_t = m.t
            if self._cfg.mode == "rose":
                self._tracker_x = new_axis_tracker(m.x, self._cfg.adaptive.lam)
                self._tracker_y = new_axis_tracker(m.y, self._cfg.adaptive.lam)
            return None

        dt = m.t - self._prev_t
        self._prev_t = m.t
        expected: tuple[float, float] | None = None
        if self._cfg.mode == "rose":
            expected = self._update_noise(m, dt)

        if self._state is None:
            self._state = ekf.init_from_measurements(self._first, m, self._cfg.p0)
            return None

        if self._cfg.mode == "rose":
            r = np.diag(self._r)
            r_used = self._r
        else:
            r = self._cfg.static_r
            r_used = (float(r[0, 0]), float(r[1, 1]))

        try:
            predicted = ekf.predict(self._state, self._cfg.q, dt)
            k = ekf.gain(predicted.P, self._c, r)
            corrected = ekf.correct(predicted, np.array([m.x, m.y]), k, self._c, r)
        except NumericalError as err:
            raise NumericalError(f"sample {self._index} (t={m.t}): {err}") from err
        self._state = corrected
        return FilterOutput(
            t=m.t,
            state=corrected.x_hat,
            p_diag=tuple(float(p) for p in np.diag(corrected.P)),
            r_used=r_used,
            expected_xy=expected,
        )

    def _update_noise(self, m: Measurement, dt: float) -> tuple[float, float]:
        cfg = self._cfg.adaptive
        exp_x, self._tracker_x = track(self._tracker_x, m.x, dt)
        exp_y, self._tracker_y = track(self._tracker_y, m.y, dt)
        r_x = update_r(
            self._r[0], exp_x - m.x, cfg.gamma_for(self._tracker_x.k), cfg.alpha_r, cfg.r_floor
        )
        r_y = update_r(
            self._r[1], exp_y - m.y, cfg.gamma_for(self._tracker_y.k), cfg.alpha_r, cfg.r_floor
        )
        self._r = (r_x, r_y)
        return exp_x, exp_y


def calibrate_static_r(prefix: list[Measurement], adaptive: AdaptiveConfig) -> np.ndarray:
    """Fixed measurement covariance from tracker residuals over a series prefix.

    The first sample seeds the trackers and the first two residuals are
    discarded as warm-up, so at least four samples are required.  Each axis
    gets the mean of the inflated squared residuals, floored at r_floor.
    """
    if len(prefix) < 4:
        raise ValueError(
            f"calibration needs at least 4 samples (1 seed + 2 warm-up residuals), "
            f"got {len(prefix)}"
        )
    tracker_x = new_axis_tracker(prefix[0].x, adaptive.lam)
    tracker_y = new_axis_tracker(prefix[0].y, adaptive.lam)
    prev_t = prefix[0].t
    acc_x: list[float] = []
    acc_y: list[float] = []
    for i, m in enumerate(prefix[1:], start=1):
        if m.t <= prev_t:
            raise SequencingError(
                f"sample {i}: timestamp {m.t} not greater than {prev_t}"
            )
        dt = m.t - prev_t
        prev_t = m.t
        exp_x, tracker_x = track(tracker_x, m.x, dt)
        exp_y, tracker_y = track(tracker_y, m.y, dt)
        if i >= 3:
            acc_x.append(adaptive.gamma_for(tracker_x.k) * (exp_x - m.x) ** 2)
            acc_y.append(adaptive.gamma_for(tracker_y.k) * (exp_y - m.y) ** 2)
    return np.diag(
        [
            max(adaptive.r_floor, float(np.mean(acc_x))),
            max(adaptive.r_floor, float(np.mean(acc_y))),
        ]
    )


def run(config: FilterConfig, series: list[Measurement]) -> list[FilterOutput]:
    """Filter a whole measurement series; output length is input length - 2.

    In static mode without an explicit static_r, the covariance is first
    calibrated from the leading calib_len samples of the series.
    """
    if len(series) < 3:
        raise ValueError(f"need at least 3 measurements, got {len(series)}")
    if config.mode == "static" and config.static_r is None:
        prefix = series[: config.calib_len]
        config = replace(config, static_r=calibrate_static_r(prefix, config.adaptive))
    flt = PoseFilter(config)
    outputs = []
    for m in series:
        out = flt.process(m)
        if out is not None:
            outputs.append(out)
    return outputs
