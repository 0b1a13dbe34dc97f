"""Command-line front end.

Subcommands:
    simulate    generate ground-truth and measurement CSVs for a scenario
    run         filter a measurement CSV in adaptive or static mode
    compare     run both modes, write a JSON comparison report and
                optionally plot data (CSV) plus rendered figures (PNG)
    gain-check  validate the closed-form tracker gain against the
                Riccati-iteration oracle

Exit codes: 0 success, 1 runtime/numerical failure, 2 usage or config error.
The ROSE_EKF_LOG environment variable (error, info, debug) controls
diagnostics on standard error; data outputs never go to standard error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

from . import __version__, dataio
from .adaptive import riccati_gain_oracle, steady_state_gain
from .errors import NumericalError
from .metrics import compare
from .pipeline import FilterConfig, run
from .plots import render_report_figures
from .scenario import generate, reference_scenario

log = logging.getLogger("rose_ekf")

_ORACLE_TOL = 1e-12


def _setup_logging() -> None:
    level_name = os.environ.get("ROSE_EKF_LOG", "error").lower()
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        level_name, logging.ERROR
    )
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")


def _load_config(path):
    if path is None:
        return None, FilterConfig()
    return dataio.parse_config(path)


def _cmd_simulate(args) -> int:
    scenario, _ = _load_config(args.config)
    if scenario is None:
        scenario = reference_scenario()
    truth, meas = generate(scenario, args.seed)
    dataio.write_truth_csv(args.out_truth, truth)
    dataio.write_measurements_csv(args.out_meas, meas)
    manifest = dataio.write_manifest(
        args.out_meas,
        command="simulate",
        config={"scenario": dataio.scenario_to_dict(scenario)},
        seed=args.seed,
        inputs={"config": args.config},
        outputs={"truth": str(args.out_truth), "measurements": str(args.out_meas)},
    )
    log.info("simulate: %d samples -> %s, %s (manifest %s)",
             len(meas), args.out_truth, args.out_meas, manifest)
    return 0


def _cmd_run(args) -> int:
    _, cfg = _load_config(args.config)
    if args.mode is not None:
        static_r = cfg.static_r if args.mode == "static" else None
        cfg = replace(cfg, mode=args.mode, static_r=static_r)
    meas = dataio.read_measurements_csv(args.meas)
    outputs = run(cfg, meas)
    dataio.write_estimates_csv(args.out, outputs)
    manifest = dataio.write_manifest(
        args.out,
        command="run",
        config={"filter": dataio.filter_to_dict(cfg)},
        seed=None,
        inputs={"config": args.config, "measurements": str(args.meas)},
        outputs={"estimates": str(args.out)},
    )
    log.info("run: mode=%s, %d measurements -> %d estimates (manifest %s)",
             cfg.mode, len(meas), len(outputs), manifest)
    return 0


def _cmd_compare(args) -> int:
    _, cfg = _load_config(args.config)
    truth = dataio.read_truth_csv(args.truth)
    meas = dataio.read_measurements_csv(args.meas)
    static_cfg = replace(cfg, mode="static", static_r=cfg.static_r)
    rose_cfg = replace(cfg, mode="rose", static_r=None)
    ekf_out = run(static_cfg, meas)
    rose_out = run(rose_cfg, meas)
    report = compare(truth, ekf_out, rose_out)
    dataio.write_json_report(args.report, report)
    outputs = {"report": str(args.report)}
    if args.plot_dir is not None:
        csv_paths = dataio.write_plot_csvs(args.plot_dir, truth, meas, ekf_out, rose_out)
        fig_paths = render_report_figures(args.plot_dir, truth, meas, ekf_out, rose_out)
        outputs["plot_csvs"] = {k: str(v) for k, v in csv_paths.items()}
        outputs["figures"] = {k: str(v) for k, v in fig_paths.items()}
    dataio.write_manifest(
        args.report,
        command="compare",
        config={"filter": dataio.filter_to_dict(cfg)},
        seed=None,
        inputs={"config": args.config, "truth": str(args.truth), "measurements": str(args.meas)},
        outputs=outputs,
    )
    log.info("compare: improvement_avg=%.2f%%", report.improvement_avg)
    return 0


def _cmd_gain_check(args) -> int:
    closed = steady_state_gain(args.lam, args.dt)
    q = (args.lam / args.dt) ** 2  # with unit measurement variance
    oracle = riccati_gain_oracle(q, 1.0, args.dt, _ORACLE_TOL)
    diff = max(abs(closed[0] - oracle[0]), abs(closed[1] - oracle[1]))
    print(f"closed-form gain:   ({dataio.format_float(closed[0])}, {dataio.format_float(closed[1])})")
    print(f"riccati gain:       ({dataio.format_float(oracle[0])}, {dataio.format_float(oracle[1])})")
    print(f"max abs difference: {dataio.format_float(diff)}")
    return 0 if diff < args.tol else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rose-ekf",
        description="Adaptive extended Kalman filter for 2D pose estimation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate truth and measurement CSVs")
    p.add_argument("--config", default=None, help="JSON config (built-in scenario if omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-truth", required=True)
    p.add_argument("--out-meas", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("run", help="filter a measurement CSV")
    p.add_argument("--meas", required=True)
    p.add_argument("--mode", choices=["rose", "static"], default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("compare", help="run both modes and report improvements")
    p.add_argument("--truth", required=True)
    p.add_argument("--meas", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--plot-dir", default=None)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("gain-check", help="closed-form gain vs Riccati oracle")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=_cmd_gain_check)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as err:
        log.error("%s", err)
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        # Covers config, sequencing and argument-validation failures.
        print(f"error: {err}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
