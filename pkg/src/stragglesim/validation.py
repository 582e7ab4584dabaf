"""Quick invariant checks behind ``stragglesim validate``.

Each check is small enough to run in a few seconds and returns a
:class:`Check`; the full-size versions live in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import berrut, spline
from .experiments import SweepSpec, run_sweep, to_csv
from .points import (
    chebyshev_delta_max,
    chebyshev_second,
    local_mesh_ratio,
    mesh_stats,
    subset_mesh_stats,
    uniform_points,
)
from .stragglers import (
    exact_run_cdf,
    exact_run_mean,
    exact_run_tail,
    gordon_moments,
    longest_run_length,
    sample_bernoulli_pattern,
    stream,
    tail_threshold,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def brute_force_run_cdf(n: int, p: float) -> np.ndarray:
    """Pr(R <= r) for r = 0..n by enumerating all 2^n straggler patterns."""
    if n == 0:
        return np.ones(1)
    bits = ((np.arange(2**n)[:, None] >> np.arange(n)) & 1).astype(np.int8)
    ones = bits.sum(axis=1)
    prob = p**ones * (1.0 - p) ** (n - ones)
    runs = np.zeros(bits.shape[0], dtype=np.int64)
    cur = np.zeros_like(runs)
    for col in bits.T:
        cur = (cur + 1) * col
        np.maximum(runs, cur, out=runs)
    pmf = np.bincount(runs, weights=prob, minlength=n + 1)
    return np.cumsum(pmf)


def check_run_oracle(max_n: int = 16) -> Check:
    worst = 0.0
    for p in (0.1, 0.3, 0.5):
        for n in range(1, max_n + 1):
            ref = brute_force_run_cdf(n, p)
            got = np.array([exact_run_cdf(n, p, r) for r in range(n + 1)])
            worst = max(worst, float(np.max(np.abs(ref - got))))
    ok = worst <= 1e-12 and exact_run_mean(3, 0.5) == 1.375
    return Check("longest-run DP vs enumeration", ok, f"max |diff| = {worst:.2e}")


def check_asymptotic_band(n: int = 10**5) -> Check:
    gaps = []
    for p in (0.1, 0.5):
        g = gordon_moments(n, p)
        gaps.append(abs(exact_run_mean(n, p) - g.mean_center) - g.mean_halfwidth)
    return Check("mean longest run within asymptotic band + 0.05", max(gaps) <= 0.05,
                 "excess = " + ", ".join(f"{x:.4f}" for x in gaps))


def check_tail(n: int = 10**4, p: float = 0.1) -> Check:
    tails = []
    for delta in (0.05, 0.1, 0.2):
        thr = tail_threshold(n, p, delta)
        tails.append((delta, exact_run_tail(n, p, math.ceil(thr) - 1)))
    ok = all(t <= d for d, t in tails)
    return Check("exact tail beyond Chebyshev threshold <= delta", ok,
                 ", ".join(f"delta={d}: {t:.3g}" for d, t in tails))


def check_codecs(seed: int = 0) -> Check:
    rng = stream(seed, 11)
    worst = dict(node=0.0, const=0.0, interp=0.0, affine=0.0, boundary=0.0)
    for _ in range(20):
        x = np.sort(rng.uniform(-1, 1, 12))
        if np.min(np.diff(x)) < 1e-6:
            continue
        y = rng.normal(size=(12, 2))
        b = berrut.fit(x, y)
        worst["node"] = max(worst["node"], float(np.max(np.abs(b(x) - y))))
        c = berrut.fit(x, np.full((12, 1), 3.7))
        z = np.linspace(x[0], x[-1], 257)
        worst["const"] = max(worst["const"], float(np.max(np.abs(c(z) - 3.7))))
        s0 = spline.fit_smoothing_spline(x, y, 0.0)
        worst["interp"] = max(worst["interp"], float(np.max(np.abs(s0(x) - y))))
        lam = float(rng.choice([0.0, 1e-4, 1.0, 1e3]))
        sa = spline.fit_smoothing_spline(x, 2 * x - 0.5, lam)
        worst["affine"] = max(worst["affine"], float(np.max(np.abs(sa(z).ravel() - (2 * z - 0.5)))))
        sl = spline.fit_smoothing_spline(x, y, lam)
        worst["boundary"] = max(worst["boundary"], float(np.max(np.abs(sl.second_derivs[[0, -1]]))))
    limits = dict(node=1e-10, const=1e-12, interp=1e-8, affine=1e-10, boundary=1e-12)
    ok = all(worst[k] <= limits[k] for k in limits)
    return Check("codec exactness", ok, ", ".join(f"{k}={v:.1e}" for k, v in worst.items()))


def check_decomposition(seed: int = 0) -> Check:
    spec = SweepSpec(N=(20, 40), K=8, values=(0.1, 0.3), trials=20, seed=seed)
    result = run_sweep(spec, workers=1)
    ok = all(r.decomposition_ok and not r.failed for r in result.rows)
    return Check("loss <= decoder term + encoder term on every trial", ok,
                 f"{len(result.rows)} cells x {spec.trials} trials")


def check_sobolev(seed: int = 0, pairs: int = 30) -> Check:
    rng = stream(seed, 12)
    worst = 0.0
    for _ in range(pairs):
        freq, phase = rng.uniform(0.5, 6.0), rng.uniform(0, 2 * np.pi)

        def target(z, freq=freq, phase=phase):
            return np.sin(freq * z + phase) + 0.3 * z**2

        knots = np.sort(rng.uniform(-1, 1, int(rng.integers(4, 40))))
        if np.min(np.diff(knots)) < 1e-6:
            continue
        lam = float(rng.choice([0.0, 1e-6, 1e-3, 1e-1]))
        dec = spline.fit_smoothing_spline(knots, target(knots), lam)
        worst = max(worst, spline.residual_diagnostics(dec, target, 2048).sobolev_gap())
    return Check("sup^2 <= 2 |h| |h'| (5% quadrature slack)", worst <= 1.05, f"worst ratio = {worst:.3f}")


def check_gap_inequalities(seed: int = 0, patterns: int = 500) -> Check:
    rng = stream(seed, 13)
    bad = 0
    total = 0
    for n in (32, 128):
        pts = chebyshev_second(n)
        base = mesh_stats(pts)
        for _ in range(patterns):
            pat = sample_bernoulli_pattern(n, float(rng.choice([0.05, 0.1, 0.3])), rng)
            if pat.surviving.size < 3:
                continue
            total += 1
            r = longest_run_length(pat.flags)
            sub = subset_mesh_stats(pts, pat.surviving)
            mu = local_mesh_ratio(pts, pat.surviving)
            if sub.delta_max > (r + 1) * base.delta_max * (1 + 1e-12):
                bad += 1
            elif sub.delta_min < base.delta_min * (1 - 1e-12):
                bad += 1
            elif mu > (r + 1) * (r + 3) * math.pi**2 / 4:
                bad += 1
    return Check("survivor gap inequalities and Chebyshev local-ratio bound", bad == 0,
                 f"{bad} violations in {total} patterns")


def check_mesh() -> Check:
    worst = max(abs(mesh_stats(chebyshev_second(n)).delta_max - chebyshev_delta_max(n))
                for n in range(2, 300))
    ok = worst <= 1e-12 and abs(mesh_stats(uniform_points(9)).ratio - 1.0) <= 1e-12
    return Check("Chebyshev gap closed form, uniform ratio 1", ok, f"max |diff| = {worst:.1e}")


def check_local_ratio_bound(seed: int = 0) -> Check:
    rng = stream(seed, 14)
    pts = chebyshev_second(40)
    ok = True
    for _ in range(300):
        m = int(rng.integers(3, 41))
        idx = np.sort(rng.choice(40, m, replace=False))
        if local_mesh_ratio(pts, idx) > subset_mesh_stats(pts, idx).ratio * (1 + 1e-12):
            ok = False
    return Check("local ratio <= subset mesh ratio", ok, "300 random subsets")


def check_determinism(seed: int = 3) -> Check:
    spec = SweepSpec(N=(12, 24, 48), K=6, values=(0.2,), trials=5, seed=seed)
    a = to_csv(run_sweep(spec, workers=1))
    b = to_csv(run_sweep(spec, workers=2))
    c = to_csv(run_sweep(replace(spec), workers=1))
    return Check("sweep CSV identical across runs and worker counts", a == b == c, f"{len(a)} bytes")


CHECKS: tuple[Callable[[], Check], ...] = (
    check_run_oracle,
    check_asymptotic_band,
    check_tail,
    check_mesh,
    check_local_ratio_bound,
    check_gap_inequalities,
    check_codecs,
    check_sobolev,
    check_decomposition,
    check_determinism,
)


def run_all() -> list[Check]:
    out = []
    for fn in CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # report and continue
            out.append(Check(fn.__name__, False, f"raised {type(exc).__name__}: {exc}"))
    return out
