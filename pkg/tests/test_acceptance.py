"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line."""

import math
import time
from pathlib import Path

import numpy as np

from conftest import ACCEPTANCE_LINES
from stragglesim import berrut, spline
from stragglesim.config import load_config
from stragglesim.experiments import SweepSpec, compare_prob_vs_fixed, fit_rate, run_sweep, to_csv
from stragglesim.functions import make_fixed_mlp, make_polynomial, make_xsinx
from stragglesim.pipeline import SchemeConfig, run_trial
from stragglesim.points import chebyshev_second, local_mesh_ratio, mesh_stats, subset_mesh_stats
from stragglesim.stragglers import (
    exact_run_cdf,
    exact_run_mean,
    exact_run_tail,
    gordon_moments,
    longest_run_length,
    sample_bernoulli_pattern,
    stream,
    tail_threshold,
)
from stragglesim.validation import brute_force_run_cdf

ROOT = Path(__file__).resolve().parents[1]


def report(number, title, passed, detail, elapsed, limit=None):
    within = limit is None or elapsed < limit
    ok = passed and within
    budget = f" (limit {limit:.0f} s)" if limit else ""
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}; {elapsed:.1f} s{budget}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_longest_run_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for p in (0.1, 0.3, 0.5):
        for n in range(1, 17):
            ref = brute_force_run_cdf(n, p)
            got = np.array([exact_run_cdf(n, p, r) for r in range(n + 1)])
            worst = max(worst, float(np.max(np.abs(got - ref))))
    mean3 = exact_run_mean(3, 0.5)
    report(1, "longest-run DP vs 2^n enumeration", worst <= 1e-12 and mean3 == 1.375,
           f"max |diff| {worst:.1e} (<= 1e-12), E[R](3, 0.5) = {mean3}", time.perf_counter() - t0, 10)


def test_02_asymptotic_moments():
    t0 = time.perf_counter()
    ok, parts = True, []
    for p in (0.1, 0.5):
        g = gordon_moments(10**5, p)
        ok &= math.isclose(g.theta, math.pi**2 / math.log(1 / p), rel_tol=1e-14)
        gap = abs(exact_run_mean(10**5, p) - g.mean_center)
        ok &= gap <= g.mean_halfwidth + 0.05
        parts.append(f"p={p}: |mean - centre| {gap:.4f} <= {g.mean_halfwidth + 0.05:.4f}")
    report(2, "mean longest run inside asymptotic band", ok, "; ".join(parts), time.perf_counter() - t0, 30)


def test_03_tail_threshold():
    t0 = time.perf_counter()
    ok, parts = True, []
    for delta in (0.05, 0.1, 0.2):
        thr = tail_threshold(10**4, 0.1, delta)
        tail = exact_run_tail(10**4, 0.1, math.ceil(thr) - 1)
        ok &= tail <= delta
        parts.append(f"delta={delta}: tail {tail:.2e}")
    report(3, "exact tail beyond threshold <= delta", ok, "; ".join(parts), time.perf_counter() - t0, 30)


def test_04_codec_exactness():
    t0 = time.perf_counter()
    rng = stream(2024, 4)
    worst = dict(node=0.0, const=0.0, interp=0.0, affine=0.0, boundary=0.0)
    for _ in range(200):
        n = int(rng.integers(3, 40))
        x = np.sort(rng.uniform(-1, 1, n))
        if np.min(np.diff(x)) < 1e-5:
            continue
        y = rng.normal(size=(n, 2))
        z = np.linspace(x[0], x[-1], 1000)
        worst["node"] = max(worst["node"], float(np.max(np.abs(berrut.fit(x, y)(x) - y))))
        c = float(rng.uniform(-5, 5))
        worst["const"] = max(worst["const"], float(np.max(np.abs(berrut.fit(x, np.full(n, c))(z) - c))))
        s0 = spline.fit_smoothing_spline(x, y, 0.0)
        worst["interp"] = max(worst["interp"], float(np.max(np.abs(s0(x) - y))))
        lam = float(rng.choice([0.0, 1e-4, 1.0, 1e3]))
        line = spline.fit_smoothing_spline(x, 2 * x + 1, lam)
        zz = np.concatenate([x, z])
        worst["affine"] = max(worst["affine"], float(np.max(np.abs(line(zz).ravel() - (2 * zz + 1)))))
        sl = spline.fit_smoothing_spline(x, y, lam)
        worst["boundary"] = max(worst["boundary"], float(np.max(np.abs(sl.second_derivs[[0, -1]]))))
    limits = dict(node=1e-10, const=1e-12, interp=1e-8, affine=1e-10, boundary=1e-12)
    ok = all(worst[k] <= limits[k] for k in limits)
    detail = ", ".join(f"{k} {worst[k]:.1e}<={limits[k]:.0e}" for k in limits)
    report(4, "codec exactness", ok, detail, time.perf_counter() - t0, 10)


def test_05_convergence_exponents():
    t0 = time.perf_counter()
    spec = SweepSpec(N=(50, 100, 200, 400, 800), K=16, values=(0.1,), trials=100, seed=7)
    res = run_sweep(spec, workers=1)
    s_letcc = fit_rate(res.select("LeTCC")).slope
    s_bacc = fit_rate(res.select("BACC")).slope
    ok = s_letcc <= -2.4 and s_bacc <= -1.4 and s_letcc <= s_bacc - 0.4
    report(5, "log-log convergence slopes", ok,
           f"LeTCC {s_letcc:.3f} (<= -2.4), BACC {s_bacc:.3f} (<= -1.4), gap {s_bacc - s_letcc:.3f} (>= 0.4)",
           time.perf_counter() - t0, 300)


def test_06_probabilistic_vs_fixed():
    t0 = time.perf_counter()
    spec = SweepSpec(N=(50, 100, 200, 400, 800), K=16, trials=100, seed=7)
    cmp = compare_prob_vs_fixed(spec, "LeTCC", 0.1, 2, workers=1)
    ok = cmp.prob.slope >= cmp.fixed.slope - 0.05
    report(6, "Bernoulli(0.1) slope no steeper than fixed S=2", ok,
           f"prob {cmp.prob.slope:.3f} >= fixed {cmp.fixed.slope:.3f} - 0.05", time.perf_counter() - t0, 300)


def test_07_decomposition_every_trial():
    t0 = time.perf_counter()
    functions = [make_xsinx(), make_polynomial([0.2, -1.0, 0.5, 2.0]), make_fixed_mlp((6, 8, 3), seed=1)]
    total = bad = 0
    for f in functions:
        for scheme in ("BACC", "LeTCC"):
            for n, p, lam in ((12, 0.3, 0.0), (30, 0.1, 1e-4), (60, 0.2, 1e-2)):
                cfg = SchemeConfig(scheme, 6, n, lambda_enc=lam, lambda_dec=lam)
                for i in range(560):
                    data = f.sample_inputs(6, stream(i, 0, n))
                    t = run_trial(cfg, f, data, stream(i, 1, n), p=p)
                    total += 1
                    bad += not (t.total_loss <= t.l_dec + t.l_enc + 1e-9)
    report(7, "loss <= decoder term + encoder term per trial", bad == 0 and total >= 10**4,
           f"{total - bad}/{total} trials", time.perf_counter() - t0)


def test_08_sobolev_diagnostic():
    t0 = time.perf_counter()
    rng = stream(88)
    worst, pairs = 0.0, 0
    while pairs < 100:
        freq, phase, curv = rng.uniform(0.5, 6.0), rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1)

        def target(z, freq=freq, phase=phase, curv=curv):
            return np.sin(freq * z + phase) + curv * z**2

        knots = np.sort(rng.uniform(-1, 1, int(rng.integers(4, 60))))
        if np.min(np.diff(knots)) < 1e-6:
            continue
        lam = float(rng.choice([0.0, 1e-6, 1e-3, 1e-1]))
        dec = spline.fit_smoothing_spline(knots, target(knots), lam)
        worst = max(worst, spline.residual_diagnostics(dec, target, 2048).sobolev_gap())
        pairs += 1
    report(8, "sup^2 <= 2 |h| |h'| with 5% slack", worst <= 1.05,
           f"worst ratio {worst:.3f} over {pairs} pairs", time.perf_counter() - t0)


def test_09_gap_inequalities():
    t0 = time.perf_counter()
    rng = stream(99)
    total = bad = 0
    per_n = {32: 3334, 128: 3333, 512: 3333}
    for n, count in per_n.items():
        pts = chebyshev_second(n)
        base = mesh_stats(pts)
        for _ in range(count):
            pat = sample_bernoulli_pattern(n, float(rng.choice([0.05, 0.1, 0.2, 0.4])), rng)
            if pat.surviving.size < 3:
                continue
            total += 1
            r = longest_run_length(pat.flags)
            sub = subset_mesh_stats(pts, pat.surviving)
            mu = local_mesh_ratio(pts, pat.surviving)
            bad += not (
                sub.delta_max <= (r + 1) * base.delta_max * (1 + 1e-12)
                and sub.delta_min >= base.delta_min * (1 - 1e-12)
                and mu <= (r + 1) * (r + 3) * math.pi**2 / 4
            )
    report(9, "survivor gap bounds and Chebyshev local-ratio bound", bad == 0 and total >= 9900,
           f"{total - bad}/{total} patterns", time.perf_counter() - t0)


def test_10_determinism():
    t0 = time.perf_counter()
    cfg = load_config(ROOT / "configs" / "golden_sweep.json")
    golden = (ROOT / "tests" / "golden" / "golden_sweep.csv").read_text()
    outputs = [to_csv(run_sweep(cfg.sweep, workers=w)) for w in (1, 1, 8, 8)]
    ok = all(o == golden for o in outputs)
    report(10, "golden sweep byte-identical", ok,
           f"{len(outputs)} runs at parallelism 1 and 8 match the golden file ({len(golden)} bytes)",
           time.perf_counter() - t0)
