"""Command-line front end.

Exit codes: 0 success, 1 internal failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import experiments, validation
from .config import ConfigError, load_config
from .errors import InsufficientData
from .stragglers import (
    exact_run_mean,
    exact_run_variance,
    gordon_moments,
    longest_run_length,
    stream,
)
from .svgplot import render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _err(msg: str) -> None:
    print(f"stragglesim: {msg}", file=sys.stderr)


def cmd_sweep(args) -> int:
    try:
        cfg = load_config(args.config)
    except FileNotFoundError:
        _err(f"config file not found: {args.config}")
        return EXIT_USAGE
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_USAGE
    result = experiments.run_sweep(cfg.sweep, workers=args.threads)
    text = experiments.to_csv(result)
    out = args.out or cfg.output
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        result = experiments.read_csv(args.csv)
        svg = render_svg(result, overlay=args.overlay, delta=args.delta)
    except FileNotFoundError:
        _err(f"CSV file not found: {args.csv}")
        return EXIT_USAGE
    except InsufficientData as exc:
        _err(f"cannot plot: {exc}")
        return EXIT_USAGE
    except ValueError as exc:
        _err(f"malformed CSV: {exc}")
        return EXIT_USAGE
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_longest_run(args) -> int:
    n, p, trials = args.n, args.p, args.trials
    if n < 1 or trials < 1 or not 0.0 <= p < 1.0:
        _err("need --n >= 1, --trials >= 1 and 0 <= --p < 1")
        return EXIT_USAGE
    rng = stream(args.seed, 2)
    runs = np.array([longest_run_length(rng.random(n) < p) for _ in range(trials)], dtype=float)
    emp_mean = math.fsum(runs) / trials
    emp_var = math.fsum((runs - emp_mean) ** 2) / (trials - 1) if trials > 1 else 0.0
    if 0.0 < p and (1.0 - p) * n >= 1.0:
        g = gordon_moments(n, p)
        asym = [(g.mean_center, g.mean_halfwidth), (g.var_center, g.var_halfwidth)]
    else:
        asym = [(math.nan, math.nan)] * 2
    print("statistic,n,p,trials,seed,exact,empirical,asym_center,asym_halfwidth")
    rows = [
        ("mean", exact_run_mean(n, p), emp_mean, *asym[0]),
        ("variance", exact_run_variance(n, p), emp_var, *asym[1]),
    ]
    for name, exact, emp, centre, half in rows:
        print(",".join([name, str(n), _fmt(p), str(trials), str(args.seed),
                        _fmt(exact), _fmt(emp), _fmt(centre), _fmt(half)]))
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = validation.run_all()
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stragglesim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default: config 'output' or stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $STRAGGLESIM_THREADS or 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="render a sweep CSV as a log-log SVG")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--overlay", action="store_true", help="add dashed bound-shape curves")
    p.add_argument("--delta", type=float, default=0.05)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("longest-run", help="exact vs empirical vs asymptotic longest-run moments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_longest_run)

    p = sub.add_parser("validate", help="run the quick invariant suite")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001
        _err(f"internal error: {type(exc).__name__}: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
