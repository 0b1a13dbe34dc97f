"""Adaptive extended Kalman filter for planar pose estimation.

Estimates pose (x, y, heading), path curvature and speed from noisy 2D
position measurements, re-estimating the measurement-noise covariance
online from auxiliary constant-velocity trackers, and ships a benchmark
harness comparing the adaptive filter against a static-covariance baseline
on synthetic trajectories.
"""

__version__ = "0.1.0"

from .adaptive import (
    AdaptiveConfig,
    AxisTracker,
    auto_gamma,
    new_axis_tracker,
    riccati_gain_oracle,
    steady_state_gain,
    track,
    update_r,
)
from .ekf import (
    EkfState,
    StepResult,
    correct,
    default_p0,
    default_q,
    gain,
    init_from_measurements,
    predict,
    step,
)
from .errors import ConfigError, ConvergenceError, NumericalError, SequencingError
from .metrics import (
    ComparisonReport,
    RmsReport,
    compare,
    improvement,
    rms_orientation,
    rms_position,
    rms_scalar,
)
from .model import (
    Measurement,
    StateVector,
    jacobian_a,
    jacobian_c,
    measure,
    predict_state,
    wrap_angle,
)
from .pipeline import (
    FilterConfig,
    FilterOutput,
    PoseFilter,
    calibrate_static_r,
    run,
)
from .scenario import (
    GroundTruthSample,
    NoiseBreakpoint,
    Scenario,
    Segment,
    exact_arc_step,
    generate,
    reference_scenario,
)

__all__ = [
    "__version__",
    "AdaptiveConfig",
    "AxisTracker",
    "ComparisonReport",
    "ConfigError",
    "ConvergenceError",
    "EkfState",
    "FilterConfig",
    "FilterOutput",
    "GroundTruthSample",
    "Measurement",
    "NoiseBreakpoint",
    "NumericalError",
    "PoseFilter",
    "RmsReport",
    "Scenario",
    "Segment",
    "SequencingError",
    "StateVector",
    "StepResult",
    "auto_gamma",
    "calibrate_static_r",
    "compare",
    "correct",
    "default_p0",
    "default_q",
    "exact_arc_step",
    "gain",
    "generate",
    "improvement",
    "init_from_measurements",
    "jacobian_a",
    "jacobian_c",
    "measure",
    "new_axis_tracker",
    "predict",
    "predict_state",
    "reference_scenario",
    "riccati_gain_oracle",
    "rms_orientation",
    "rms_position",
    "rms_scalar",
    "run",
    "steady_state_gain",
    "step",
    "track",
    "update_r",
    "wrap_angle",
]
