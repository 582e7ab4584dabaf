#!/usr/bin/env python3
"""Convergence sweep for both schemes and a log-log SVG with bound overlays.

Writes results/fig1_top.{csv,svg} (Bernoulli stragglers) and
results/fig1_bottom.{csv,svg} (p = 0.1 against exactly S = 2 stragglers).
"""

import argparse
from dataclasses import replace
from pathlib import Path

from stragglesim.experiments import SweepResult, SweepSpec, fit_rate, run_sweep, write_csv
from stragglesim.svgplot import render_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    base = SweepSpec(N=(50, 100, 200, 400, 800), K=16, trials=args.trials, seed=args.seed)
    top = run_sweep(replace(base, values=(0.05, 0.1, 0.2)), args.workers)
    prob = run_sweep(replace(base, values=(0.1,)), args.workers)
    fixed = run_sweep(replace(base, mode="s", values=(2,)), args.workers)
    bottom = SweepResult(prob.rows + fixed.rows)

    for name, res in (("fig1_top", top), ("fig1_bottom", bottom)):
        write_csv(res, args.out_dir / f"{name}.csv")
        (args.out_dir / f"{name}.svg").write_text(render_svg(res, overlay=True))

    print(f"{'scheme':<6} {'mode':<4} {'value':>5}  slope    r^2")
    for res in (top, fixed):
        keys = sorted({(r.scheme, r.mode, r.p_or_s) for r in res.rows})
        for scheme, mode, value in keys:
            rows = [r for r in res.rows if (r.scheme, r.mode, r.p_or_s) == (scheme, mode, value)]
            fit = fit_rate(rows)
            print(f"{scheme:<6} {mode:<4} {value:>5}  {fit.slope:6.3f}  {fit.r_squared:.3f}")


if __name__ == "__main__":
    main()
