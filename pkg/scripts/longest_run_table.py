#!/usr/bin/env python3
"""Exact longest-run mean against its asymptotic band, and the tail threshold check."""

import argparse
import math

from stragglesim.stragglers import exact_run_mean, exact_run_tail, gordon_moments, tail_threshold


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, nargs="+", default=[0.05, 0.1, 0.3, 0.5])
    ap.add_argument("--n", type=int, nargs="+", default=[10**2, 10**3, 10**4, 10**5])
    ap.add_argument("--delta", type=float, default=0.1)
    args = ap.parse_args()

    print(f"{'p':>5} {'N':>7} {'E[R]':>9} {'centre':>9} {'halfw':>8} {'excess':>8} {'thr':>7} {'tail':>9}")
    for p in args.p:
        for n in args.n:
            g = gordon_moments(n, p)
            mean = exact_run_mean(n, p)
            thr = tail_threshold(n, p, args.delta)
            tail = exact_run_tail(n, p, math.ceil(thr) - 1)
            excess = abs(mean - g.mean_center) - g.mean_halfwidth
            print(f"{p:5.2f} {n:7d} {mean:9.4f} {g.mean_center:9.4f} {g.mean_halfwidth:8.1e} "
                  f"{excess:8.4f} {thr:7.2f} {tail:9.2e}")


if __name__ == "__main__":
    main()
