"""CSV and JSON interchange: measurement/truth/estimate files, configuration
documents, run manifests and the plot-data bundle.

CSV files are comma separated with a mandatory header row, '.' decimal
separator, LF line endings and floats printed in their shortest round-trip
form, so a write/read cycle reproduces values exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .adaptive import AdaptiveConfig
from .errors import ConfigError, SequencingError
from .metrics import ComparisonReport
from .model import Measurement
from .pipeline import FilterConfig, FilterOutput
from .scenario import GroundTruthSample, NoiseBreakpoint, Scenario, Segment

TRUTH_HEADER = ["t", "x", "y", "alpha", "kappa", "v"]
MEAS_HEADER = ["t", "x", "y"]
ESTIMATE_HEADER = [
    "t", "x", "y", "alpha", "kappa", "v",
    "p_x", "p_y", "p_alpha", "p_kappa", "p_v",
    "r_x", "r_y",
]


def format_float(v: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(v))


def _write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(format_float(v) for v in row) + "\n")


def _read_csv(path, expected_header: list[str]) -> list[list[float]]:
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines:
        raise ConfigError(f"{path}: empty file")
    header = lines[0].split(",")
    if header != expected_header:
        raise ConfigError(
            f"{path}: expected header {','.join(expected_header)!r}, got {lines[0]!r}"
        )
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != len(expected_header):
            raise ConfigError(
                f"{path}: line {lineno}: expected {len(expected_header)} fields, "
                f"got {len(fields)}"
            )
        try:
            rows.append([float(v) for v in fields])
        except ValueError as err:
            raise ConfigError(f"{path}: line {lineno}: {err}") from err
    return rows


def write_truth_csv(path, samples: list[GroundTruthSample]) -> None:
    _write_csv(path, TRUTH_HEADER, ((s.t, s.x, s.y, s.alpha, s.kappa, s.v) for s in samples))


def read_truth_csv(path) -> list[GroundTruthSample]:
    return [
        GroundTruthSample(t=r[0], x=r[1], y=r[2], alpha=r[3], kappa=r[4], v=r[5])
        for r in _read_csv(path, TRUTH_HEADER)
    ]


def write_measurements_csv(path, meas: list[Measurement]) -> None:
    _write_csv(path, MEAS_HEADER, ((m.t, m.x, m.y) for m in meas))


def read_measurements_csv(path) -> list[Measurement]:
    rows = _read_csv(path, MEAS_HEADER)
    out = []
    prev_t = None
    for i, r in enumerate(rows):
        if prev_t is not None and r[0] <= prev_t:
            raise SequencingError(
                f"{path}: row {i + 2}: timestamp {r[0]} not greater than {prev_t}"
            )
        prev_t = r[0]
        out.append(Measurement(t=r[0], x=r[1], y=r[2]))
    return out


def write_estimates_csv(path, outputs: list[FilterOutput]) -> None:
    _write_csv(
        path,
        ESTIMATE_HEADER,
        (
            (o.t, o.state.x, o.state.y, o.state.alpha, o.state.kappa, o.state.v)
            + o.p_diag
            + o.r_used
            for o in outputs
        ),
    )


def read_estimates_csv(path) -> list[list[float]]:
    return _read_csv(path, ESTIMATE_HEADER)


# --- configuration -----------------------------------------------------------

_SEGMENT_KEYS = {"duration", "kappa", "speed_start", "speed_end"}
_NOISE_KEYS = {"t_from", "sigma_x", "sigma_y"}
_SCENARIO_KEYS = {"segments", "noise", "sample_dt", "init"}
_INIT_KEYS = {"x0", "y0", "alpha0"}
_FILTER_KEYS = {
    "lambda", "alpha_r", "gamma", "r_init", "r_floor",
    "q_diag", "p0_diag", "mode", "static_r", "calib_len",
}


def _check_keys(section: dict, allowed: set, where: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def _scenario_from_dict(doc: dict) -> Scenario:
    _check_keys(doc, _SCENARIO_KEYS, "scenario")
    init = doc.get("init", {})
    _check_keys(init, _INIT_KEYS, "scenario.init")
    segments = []
    for i, seg in enumerate(doc.get("segments", [])):
        _check_keys(seg, _SEGMENT_KEYS, f"scenario.segments[{i}]")
        segments.append(Segment(**seg))
    noise = []
    for i, bp in enumerate(doc.get("noise", [])):
        _check_keys(bp, _NOISE_KEYS, f"scenario.noise[{i}]")
        noise.append(NoiseBreakpoint(**bp))
    return Scenario(
        segments=tuple(segments),
        noise=tuple(noise),
        sample_dt=doc.get("sample_dt", 0.1),
        x0=init.get("x0", 0.0),
        y0=init.get("y0", 0.0),
        alpha0=init.get("alpha0", 0.0),
    )


def _diag_from(doc: dict, key: str, size: int, default: np.ndarray) -> np.ndarray:
    if key not in doc:
        return default
    values = doc[key]
    if not isinstance(values, list) or len(values) != size:
        raise ConfigError(f"filter.{key} must be a list of {size} numbers")
    return np.diag([float(v) for v in values])


def _filter_from_dict(doc: dict) -> FilterConfig:
    _check_keys(doc, _FILTER_KEYS, "filter")
    defaults = FilterConfig()
    adaptive = AdaptiveConfig(
        lam=doc.get("lambda", defaults.adaptive.lam),
        alpha_r=doc.get("alpha_r", defaults.adaptive.alpha_r),
        gamma=doc.get("gamma", defaults.adaptive.gamma),
        r_init=doc.get("r_init", defaults.adaptive.r_init),
        r_floor=doc.get("r_floor", defaults.adaptive.r_floor),
    )
    static_r = doc.get("static_r")
    if static_r is not None:
        if not isinstance(static_r, list) or len(static_r) != 2:
            raise ConfigError("filter.static_r must be a list of 2 numbers")
        static_r = np.diag([float(v) for v in static_r])
    return FilterConfig(
        adaptive=adaptive,
        q=_diag_from(doc, "q_diag", 5, defaults.q),
        p0=_diag_from(doc, "p0_diag", 5, defaults.p0),
        mode=doc.get("mode", defaults.mode),
        static_r=static_r,
        calib_len=doc.get("calib_len", defaults.calib_len),
    )


def parse_config(path) -> tuple[Scenario | None, FilterConfig]:
    """Parse a configuration document; unknown keys are rejected.

    Returns the scenario (None when the document has no scenario section,
    meaning the built-in reference scenario applies) and the filter
    configuration, with defaults filled in.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    _check_keys(doc, {"scenario", "filter"}, "config")
    try:
        scenario = _scenario_from_dict(doc["scenario"]) if "scenario" in doc else None
        filter_cfg = _filter_from_dict(doc.get("filter", {}))
    except (TypeError, ValueError) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(f"{path}: {err}") from err
    return scenario, filter_cfg


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "segments": [
            {
                "duration": s.duration,
                "kappa": s.kappa,
                "speed_start": s.speed_start,
                "speed_end": s.speed_end,
            }
            for s in sc.segments
        ],
        "noise": [
            {"t_from": b.t_from, "sigma_x": b.sigma_x, "sigma_y": b.sigma_y}
            for b in sc.noise
        ],
        "sample_dt": sc.sample_dt,
        "init": {"x0": sc.x0, "y0": sc.y0, "alpha0": sc.alpha0},
    }


def filter_to_dict(cfg: FilterConfig) -> dict:
    return {
        "lambda": cfg.adaptive.lam,
        "alpha_r": cfg.adaptive.alpha_r,
        "gamma": cfg.adaptive.gamma,
        "r_init": cfg.adaptive.r_init,
        "r_floor": cfg.adaptive.r_floor,
        "q_diag": list(np.diag(cfg.q)),
        "p0_diag": list(np.diag(cfg.p0)),
        "mode": cfg.mode,
        "static_r": None if cfg.static_r is None else list(np.diag(cfg.static_r)),
        "calib_len": cfg.calib_len,
    }


# --- reports, manifests and plot data ----------------------------------------

def write_json_report(path, report: ComparisonReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        json.dump(report.as_dict(), f, indent=2)
        f.write("\n")


def manifest_path(primary_output) -> Path:
    return Path(str(primary_output) + ".manifest.json")


def write_manifest(
    primary_output, command: str, config: dict, seed: int | None,
    inputs: dict, outputs: dict,
) -> Path:
    """Record everything needed to reproduce a command's outputs."""
    path = manifest_path(primary_output)
    doc = {
        "command": command,
        "tool_version": __version__,
        "seed": seed,
        "config": config,
        "inputs": inputs,
        "outputs": outputs,
    }
    with open(path, "w", encoding="utf-8", newline="") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    return path


def write_plot_csvs(
    plot_dir,
    truth: list[GroundTruthSample],
    meas: list[Measurement],
    ekf_out: list[FilterOutput],
    rose_out: list[FilterOutput],
) -> dict[str, Path]:
    """Per-quantity comparison CSVs plus the x/y track, aligned on output times."""
    plot_dir = Path(plot_dir)
    plot_dir.mkdir(parents=True, exist_ok=True)
    truth_by_t = {s.t: s for s in truth}
    meas_by_t = {m.t: m for m in meas}
    paths = {}

    track_rows = []
    for e, r in zip(ekf_out, rose_out):
        s = truth_by_t[e.t]
        m = meas_by_t[e.t]
        track_rows.append(
            (e.t, s.x, s.y, m.x, m.y, e.state.x, e.state.y, r.state.x, r.state.y)
        )
    paths["track"] = plot_dir / "track.csv"
    _write_csv(
        paths["track"],
        ["t", "truth_x", "truth_y", "meas_x", "meas_y", "ekf_x", "ekf_y", "rose_x", "rose_y"],
        track_rows,
    )

    for name, attr in (("alpha", "alpha"), ("kappa", "kappa"), ("v", "v")):
        rows = []
        for e, r in zip(ekf_out, rose_out):
            s = truth_by_t[e.t]
            rows.append(
                (e.t, getattr(s, attr), getattr(e.state, attr), getattr(r.state, attr))
            )
        paths[name] = plot_dir / f"{name}.csv"
        _write_csv(paths[name], ["t", "truth", "ekf", "rose"], rows)
    return paths
