"""Figure rendering for comparison reports.

Renders the track and the three estimated-quantity panels to PNG files next
to the plot-data CSVs.  Uses the Agg backend so it works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .model import Measurement  # noqa: E402
from .pipeline import FilterOutput  # noqa: E402
from .scenario import GroundTruthSample  # noqa: E402

_QUANTITY_LABELS = {
    "alpha": ("orientation", "rad"),
    "kappa": ("curvature", "1/m"),
    "v": ("velocity", "m/s"),
}


def render_track_figure(
    path,
    truth: list[GroundTruthSample],
    meas: list[Measurement],
    ekf_out: list[FilterOutput],
    rose_out: list[FilterOutput],
) -> Path:
    fig, ax = plt.subplots(figsize=(7, 7))
    ax.plot([m.x for m in meas], [m.y for m in meas], ".", color="olive",
            markersize=2.5, label="measurement")
    ax.plot([s.x for s in truth], [s.y for s in truth], "-", color="black",
            linewidth=1.0, label="truth")
    ax.plot([o.state.x for o in ekf_out], [o.state.y for o in ekf_out], "-",
            color="tab:blue", linewidth=1.0, label="static EKF")
    ax.plot([o.state.x for o in rose_out], [o.state.y for o in rose_out], "-",
            color="tab:red", linewidth=1.0, label="ROSE")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_quantity_figure(
    path,
    quantity: str,
    truth: list[GroundTruthSample],
    ekf_out: list[FilterOutput],
    rose_out: list[FilterOutput],
) -> Path:
    label, unit = _QUANTITY_LABELS[quantity]
    truth_by_t = {s.t: s for s in truth}
    t = [o.t for o in ekf_out]
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.plot(t, [getattr(truth_by_t[tt], quantity) for tt in t], "-", color="black",
            linewidth=0.9, label="truth")
    ax.plot(t, [getattr(o.state, quantity) for o in ekf_out], "-", color="tab:blue",
            linewidth=0.9, label="static EKF")
    ax.plot(t, [getattr(o.state, quantity) for o in rose_out], "-", color="tab:red",
            linewidth=0.9, label="ROSE")
    ax.set_xlabel("time [s]")
    ax.set_ylabel(f"{label} [{unit}]")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_report_figures(
    plot_dir,
    truth: list[GroundTruthSample],
    meas: list[Measurement],
    ekf_out: list[FilterOutput],
    rose_out: list[FilterOutput],
) -> dict[str, Path]:
    """All four figures (track + orientation/curvature/velocity panels)."""
    plot_dir = Path(plot_dir)
    plot_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "track": render_track_figure(
            plot_dir / "track.png", truth, meas, ekf_out, rose_out
        )
    }
    for quantity, name in (("alpha", "alpha"), ("kappa", "kappa"), ("v", "v")):
        paths[name] = render_quantity_figure(
            plot_dir / f"{name}.png", quantity, truth, ekf_out, rose_out
        )
    return paths
