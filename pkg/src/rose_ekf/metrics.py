"""Root-mean-square error metrics and the adaptive-vs-static comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pipeline import FilterOutput
from .scenario import GroundTruthSample

_ALIGN_ATOL = 1e-9

QUANTITIES = ("position", "orientation", "curvature", "velocity")


@dataclass(frozen=True)
class RmsReport:
    """RMS errors of one filter run against ground truth."""

    position: float
    orientation: float
    curvature: float
    velocity: float
    n: int

    def as_dict(self) -> dict:
        return {
            "position": self.position,
            "orientation": self.orientation,
            "curvature": self.curvature,
            "velocity": self.velocity,
            "n": self.n,
        }


@dataclass(frozen=True)
class ComparisonReport:
    """Static-R baseline vs adaptive filter, with per-quantity improvements."""

    ekf: RmsReport
    rose: RmsReport
    improvement_pct: tuple[float, float, float, float]
    improvement_avg: float

    def as_dict(self) -> dict:
        return {
            "ekf": self.ekf.as_dict(),
            "rose": self.rose.as_dict(),
            "improvement_pct": list(self.improvement_pct),
            "improvement_avg": self.improvement_avg,
            "quantities": list(QUANTITIES),
        }


def _as_aligned_arrays(est, truth) -> tuple[np.ndarray, np.ndarray]:
    est = np.asarray(est, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if est.shape != truth.shape:
        raise ValueError(f"series length mismatch: {est.shape} vs {truth.shape}")
    if est.size == 0:
        raise ValueError("series must contain at least one sample")
    return est, truth


def rms_scalar(est, truth) -> float:
    """sqrt(mean((est - truth)^2)) over time-aligned series."""
    est, truth = _as_aligned_arrays(est, truth)
    return float(np.sqrt(np.mean((est - truth) ** 2)))


def rms_position(est_xy, truth_xy) -> float:
    """RMS of the per-sample Euclidean position distances."""
    est, truth = _as_aligned_arrays(est_xy, truth_xy)
    if est.ndim != 2 or est.shape[1] != 2:
        raise ValueError(f"expected (n, 2) position series, got shape {est.shape}")
    return float(np.sqrt(np.mean(np.sum((est - truth) ** 2, axis=1))))


def _wrap_array(d: np.ndarray) -> np.ndarray:
    return np.pi - np.mod(np.pi - d, 2.0 * np.pi)


def rms_orientation(est, truth) -> float:
    """RMS of heading errors with wrap-aware differencing."""
    est, truth = _as_aligned_arrays(est, truth)
    return float(np.sqrt(np.mean(_wrap_array(est - truth) ** 2)))


def improvement(ekf_rms: float, rose_rms: float) -> float:
    """Relative improvement of the adaptive filter over the baseline, percent.

    (ekf - rose) / rose * 100: positive when the adaptive filter's RMS error
    is the smaller one.
    """
    if not rose_rms > 0.0:
        raise ValueError(f"rose RMS must be > 0, got {rose_rms}")
    return (ekf_rms - rose_rms) / rose_rms * 100.0


def _rms_report(truth: list[GroundTruthSample], out: list[FilterOutput]) -> RmsReport:
    est_xy = np.array([(o.state.x, o.state.y) for o in out])
    tru_xy = np.array([(s.x, s.y) for s in truth])
    est_a = np.array([o.state.alpha for o in out])
    tru_a = np.array([s.alpha for s in truth])
    est_k = np.array([o.state.kappa for o in out])
    tru_k = np.array([s.kappa for s in truth])
    est_v = np.array([o.state.v for o in out])
    tru_v = np.array([s.v for s in truth])
    return RmsReport(
        position=rms_position(est_xy, tru_xy),
        orientation=rms_orientation(est_a, tru_a),
        curvature=rms_scalar(est_k, tru_k),
        velocity=rms_scalar(est_v, tru_v),
        n=len(out),
    )


def _align_truth(
    truth: list[GroundTruthSample], out: list[FilterOutput]
) -> list[GroundTruthSample]:
    by_time = [(s.t, s) for s in truth]
    times = np.array([t for t, _ in by_time])
    aligned = []
    missing = []
    for o in out:
        idx = int(np.searchsorted(times, o.t))
        hit = None
        for j in (idx - 1, idx, idx + 1):
            if 0 <= j < len(by_time) and math.isclose(
                by_time[j][0], o.t, rel_tol=0.0, abs_tol=_ALIGN_ATOL
            ):
                hit = by_time[j][1]
                break
        if hit is None:
            missing.append(o.t)
        else:
            aligned.append(hit)
    if missing:
        shown = ", ".join(f"{t!r}" for t in missing[:5])
        raise ValueError(
            f"{len(missing)} output timestamps have no ground-truth sample: {shown}"
        )
    return aligned


def compare(
    truth: list[GroundTruthSample],
    ekf_out: list[FilterOutput],
    rose_out: list[FilterOutput],
) -> ComparisonReport:
    """Build both RMS reports and the per-quantity improvement percentages.

    Both filter outputs must cover the same timestamps; ground truth may be a
    superset (warm-up samples are simply never referenced).
    """
    if len(ekf_out) != len(rose_out) or any(
        not math.isclose(a.t, b.t, rel_tol=0.0, abs_tol=_ALIGN_ATOL)
        for a, b in zip(ekf_out, rose_out)
    ):
        raise ValueError("filter outputs are not aligned with each other")
    truth_e = _align_truth(truth, ekf_out)
    report_e = _rms_report(truth_e, ekf_out)
    report_r = _rms_report(truth_e, rose_out)
    imps = tuple(
        improvement(getattr(report_e, q), getattr(report_r, q)) for q in QUANTITIES
    )
    return ComparisonReport(
        ekf=report_e,
        rose=report_r,
        improvement_pct=imps,
        improvement_avg=float(np.mean(imps)),
    )
