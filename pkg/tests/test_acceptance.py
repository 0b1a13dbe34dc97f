"""Release acceptance suite.

One test per acceptance criterion, each enforced at its stated tolerance and
runtime budget.  Every test prints a single `[acceptance] criterion N` line
with its verdict (visible with `pytest -v -s` or in captured output on
failure).
"""

import math
import time

import numpy as np
import pytest

from rose_ekf import (
    AdaptiveConfig,
    EkfState,
    FilterConfig,
    Measurement,
    NoiseBreakpoint,
    Scenario,
    Segment,
    StateVector,
    compare,
    default_p0,
    default_q,
    exact_arc_step,
    generate,
    improvement,
    jacobian_a,
    new_axis_tracker,
    predict_state,
    reference_scenario,
    riccati_gain_oracle,
    run,
    steady_state_gain,
    step,
    track,
    update_r,
)
from rose_ekf.cli import main as cli_main
from rose_ekf.dataio import read_measurements_csv, write_measurements_csv

from conftest import fd_jacobian, matched_cv_signal, random_state


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[acceptance] criterion {num} ({name}): {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def test_criterion_1_jacobian_matches_finite_differences():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        s = random_state(rng)
        dt = float(rng.uniform(0.01, 1.0))
        analytic = jacobian_a(s, dt)
        numeric = fd_jacobian(s, dt)
        scale = np.maximum(np.abs(analytic), 1.0)
        worst = max(worst, float(np.max(np.abs(numeric - analytic) / scale)))
    elapsed = time.perf_counter() - start
    _verdict(
        1,
        "jacobian vs central finite differences",
        worst < 1e-6 and elapsed < 1.0,
        f"worst rel err {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_gain_closed_form_vs_riccati_oracle():
    start = time.perf_counter()
    worst = 0.0
    for lam in (0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        for dt in (0.01, 0.1, 1.0):
            closed = steady_state_gain(lam, dt)
            r = 1.0
            oracle = riccati_gain_oracle(r * (lam / dt) ** 2, r, dt, tol=1e-12)
            worst = max(
                worst, abs(closed[0] - oracle[0]), abs(closed[1] - oracle[1])
            )
    elapsed = time.perf_counter() - start
    _verdict(
        2,
        "steady-state gain vs Riccati iteration",
        worst < 1e-6 and elapsed < 5.0,
        f"worst diff {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_3_adaptive_r_converges_on_stationary_noise():
    # Stationary sigma^2 = 0.25 m^2 observation noise around a
    # constant-velocity process carrying the tracker's own process noise
    # (the regime in which the gamma-inflated residual is unbiased for R).
    cfg = AdaptiveConfig()  # alpha_r = 0.02, gamma = auto
    dt, sigma2, n = 0.1, 0.25, 1000
    start = time.perf_counter()
    inside = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        ys = matched_cv_signal(cfg.lam, dt, sigma2, n, rng)
        tracker = new_axis_tracker(float(ys[0]), cfg.lam)
        r = cfg.r_init
        for y in ys[1:]:
            expected, tracker = track(tracker, float(y), dt)
            r = update_r(
                r, expected - y, cfg.gamma_for(tracker.k), cfg.alpha_r, cfg.r_floor
            )
        if 0.75 * sigma2 <= r <= 1.25 * sigma2:
            inside += 1
    elapsed = time.perf_counter() - start
    _verdict(
        3,
        "adaptive R within +-25% after 1000 samples",
        inside >= 90 and elapsed < 10.0,
        f"{inside}/100 seeds inside, {elapsed:.2f}s",
    )


def test_criterion_4_adaptive_filter_beats_static_baseline():
    start = time.perf_counter()
    scenario = reference_scenario()
    improvements = []
    for seed in range(20):
        truth, meas = generate(scenario, seed)
        static_out = run(FilterConfig(mode="static"), meas)
        rose_out = run(FilterConfig(), meas)
        report = compare(truth, static_out, rose_out)
        improvements.append(report.improvement_pct)
    means = np.mean(improvements, axis=0)
    avg = float(np.mean(means))
    elapsed = time.perf_counter() - start
    _verdict(
        4,
        "adaptive beats static baseline on reference scenario",
        avg >= 10.0 and float(np.min(means)) >= 0.0 and elapsed < 60.0,
        f"mean improvements (pos, ori, kap, v) = "
        f"({means[0]:.1f}, {means[1]:.1f}, {means[2]:.1f}, {means[3]:.1f})%, "
        f"avg {avg:.1f}%, {elapsed:.1f}s "
        f"(reference value from the original recorded-data study: 27.7%)",
    )


def test_criterion_5_published_improvement_arithmetic():
    pairs = [(0.215, 0.182), (0.236, 0.183), (0.142, 0.123), (0.332, 0.223)]
    printed = [18.2, 28.6, 15.4, 48.5]
    printed_avg = 27.7
    improvement(1.0, 1.0)  # warm the code path before timing
    start = time.perf_counter()
    computed = [improvement(e, r) for e, r in pairs]
    avg = sum(computed) / 4.0
    elapsed = time.perf_counter() - start
    expected = [18.131868131868135, 28.961748633879775, 15.447154471544708,
                48.87892376681615]
    ok = (
        all(c == pytest.approx(x, rel=1e-12) for c, x in zip(computed, expected))
        # The printed row was computed from unrounded source values; the
        # velocity entry carries the largest rounding artifact but still
        # lands inside half a percentage point.
        and all(abs(c - p) <= 0.5 for c, p in zip(computed, printed))
        and abs(avg - printed_avg) <= 0.5
        and elapsed < 1e-3
    )
    _verdict(
        5,
        "published-table improvement reproduction",
        ok,
        f"computed ({computed[0]:.1f}, {computed[1]:.1f}, {computed[2]:.1f}, "
        f"{computed[3]:.1f})%, avg {avg:.2f}% vs printed avg {printed_avg}%, "
        f"{elapsed * 1e6:.0f}us",
    )


def test_criterion_6_joseph_form_stability_over_10k_steps():
    rng = np.random.default_rng(106)
    q = default_q()
    e = EkfState(StateVector(0.0, 0.0, 0.2, 0.01, 1.5), default_p0())
    start = time.perf_counter()
    t = 0.0
    ok = True
    worst_asym = 0.0
    for _ in range(10_000):
        dt = float(rng.uniform(0.01, 1.0))
        t += dt
        m = Measurement(
            t=t,
            x=e.x_hat.x + float(rng.normal(scale=2.0)),
            y=e.x_hat.y + float(rng.normal(scale=2.0)),
        )
        r = np.diag(rng.uniform(0.001, 1.0, size=2))
        e = step(e, m, r, q, dt).predicted
        scale = max(1.0, float(np.max(np.abs(e.P))))
        asym = float(np.max(np.abs(e.P - e.P.T))) / scale
        worst_asym = max(worst_asym, asym)
        if asym > 1e-9 or float(np.min(np.diag(e.P))) < 0.0 or not np.all(
            np.isfinite(e.P)
        ):
            ok = False
            break
    elapsed = time.perf_counter() - start
    _verdict(
        6,
        "covariance symmetric and non-negative through 10^4 steps",
        ok and elapsed < 5.0,
        f"worst asymmetry {worst_asym:.1e}, {elapsed:.1f}s",
    )


def test_criterion_7_zero_noise_straight_line_consistency():
    scenario = Scenario(
        segments=(Segment(duration=10.0, kappa=0.0, speed_start=1.0, speed_end=1.0),),
        noise=(NoiseBreakpoint(t_from=0.0, sigma_x=0.0, sigma_y=0.0),),
        sample_dt=0.1,
    )
    truth, meas = generate(scenario, 0)
    outputs = run(FilterConfig(), meas)
    truth_by_t = {s.t: s for s in truth}
    worst_pos = 0.0
    worst_v = 0.0
    for o in outputs[50:]:
        s = truth_by_t[o.t]
        worst_pos = max(worst_pos, math.hypot(o.state.x - s.x, o.state.y - s.y))
        worst_v = max(worst_v, abs(o.state.v - s.v))
    _verdict(
        7,
        "zero-noise straight-line consistency",
        worst_pos < 1e-3 and worst_v < 1e-2,
        f"pos err {worst_pos:.1e} m, speed err {worst_v:.1e} m/s",
    )


def test_criterion_8_small_angle_model_mismatch_bound():
    # The transition's heading state is the chord-midpoint direction of the
    # step, while the exact arc starts from the tangent angle phi; the same
    # physical arc therefore corresponds to a model heading of phi + u/2 with
    # u = v*dt*kappa.  The position gap is then purely the chord-vs-arc
    # length defect, bounded by 1.5 * (v*dt) * u^2 / 8.
    checked = 0
    ok = True
    worst_ratio = 0.0
    count = 0
    for v in np.linspace(0.5, 4.0, 10):
        for kappa in np.linspace(-0.2, 0.2, 10):
            for dt in np.linspace(0.01, 1.0, 10):
                u = v * dt * kappa
                if abs(u) > 0.1:
                    continue
                count += 1
                phi = -3.0 + 0.61 * (count % 11)
                ex, ey, _ = exact_arc_step(0.0, 0.0, phi, float(v), float(kappa), float(dt))
                model = predict_state(
                    StateVector(0.0, 0.0, phi + u / 2.0, float(kappa), float(v)),
                    float(dt),
                )
                gap = math.hypot(model.x - ex, model.y - ey)
                bound = 1.5 * (v * dt) * u * u / 8.0
                checked += 1
                if gap > bound + 1e-15:
                    ok = False
                if bound > 0:
                    worst_ratio = max(worst_ratio, gap / bound)
    _verdict(
        8,
        "small-angle model mismatch bound",
        ok and checked >= 300,
        f"{checked} grid points, worst gap/bound {worst_ratio:.2f}",
    )


def test_criterion_9_reproducibility_and_round_trip(tmp_path):
    blobs = []
    for tag in ("first", "second"):
        truth = tmp_path / f"truth_{tag}.csv"
        meas = tmp_path / f"meas_{tag}.csv"
        rc = cli_main(
            ["simulate", "--seed", "7", "--out-truth", str(truth), "--out-meas", str(meas)]
        )
        assert rc == 0
        blobs.append((truth.read_bytes(), meas.read_bytes()))
    byte_identical = blobs[0] == blobs[1]

    meas_objs = read_measurements_csv(tmp_path / "meas_first.csv")
    rewritten = tmp_path / "meas_rewritten.csv"
    write_measurements_csv(rewritten, meas_objs)
    round_trip_exact = (
        rewritten.read_bytes() == blobs[0][1]
        and read_measurements_csv(rewritten) == meas_objs
    )
    _verdict(
        9,
        "seeded simulation reproducibility and CSV round trip",
        byte_identical and round_trip_exact,
        f"byte-identical={byte_identical}, round-trip-exact={round_trip_exact}",
    )
