"""Monte Carlo sweeps over the server count, rate fits and bound curves.

Trial ``i`` of a cell with ``N`` servers draws its data from
``stream(seed, 0, N, i)`` and its straggler pattern from ``stream(seed, 1, N, i)``.
Neither key involves the scheme or the straggler parameter, so every cell at
the same ``N`` sees common random numbers, and the result never depends on
how cells are spread over worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateConfiguration, InsufficientData
from .functions import ComputeFunction, get_function
from .pipeline import SCHEMES, SchemeConfig, TrialResult, run_trial
from .stragglers import stream

DEFAULT_N_GRID = (25, 50, 100, 200, 400, 800)
DATA_STREAM, PATTERN_STREAM = 0, 1

CSV_HEADER = (
    "scheme", "N", "K", "mode", "p_or_s", "trials", "seed", "mean_loss", "std_loss",
    "mean_l_dec", "mean_l_enc", "mean_longest_run", "resamples",
)
STAT_FIELDS = CSV_HEADER[7:]
FAILED = "failed"


@dataclass(frozen=True)
class SweepSpec:
    schemes: tuple = SCHEMES
    N: tuple = DEFAULT_N_GRID
    K: int = 16
    mode: str = "p"  # "p": Bernoulli stragglers, "s": exactly S stragglers
    values: tuple = (0.1,)
    trials: int = 100
    seed: int = 0
    function: str = "xsinx"
    function_params: dict = field(default_factory=dict)
    alpha_points: str = "chebyshev1"
    beta_points: str = "chebyshev2"
    lambda_enc: float = 0.0
    lambda_dec: float = 0.0
    enc_normalization: str = "K"
    fresh_data: bool = True

    def __post_init__(self):
        if self.mode not in ("p", "s"):
            raise ValueError(f"mode must be 'p' or 's', got {self.mode!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if any(n < 4 for n in self.N):
            raise ValueError("every N must be >= 4")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ValueError(f"unknown scheme {s!r}")

    def scheme_config(self, scheme: str, n: int) -> SchemeConfig:
        return SchemeConfig(
            scheme, self.K, n, self.alpha_points, self.beta_points,
            self.lambda_enc, self.lambda_dec, self.enc_normalization,
        )


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    N: int
    K: int
    mode: str
    p_or_s: float | int
    trials: int
    seed: int
    mean_loss: float = math.nan
    std_loss: float = math.nan
    mean_l_dec: float = math.nan
    mean_l_enc: float = math.nan
    mean_longest_run: float = math.nan
    resamples: int = 0
    failed: bool = False
    # every trial had total_loss <= l_dec + l_enc; not written to CSV
    decomposition_ok: bool = True


@dataclass
class SweepResult:
    rows: list

    def select(self, scheme: str | None = None, p_or_s=None) -> list:
        return [
            r for r in self.rows
            if (scheme is None or r.scheme == scheme) and (p_or_s is None or r.p_or_s == p_or_s)
        ]


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple


# -- trial loops ------------------------------------------------------------


@lru_cache(maxsize=8)
def _cached_function(name: str, params_json: str) -> ComputeFunction:
    return get_function(name, **json.loads(params_json))


def _function_for(spec: SweepSpec) -> ComputeFunction:
    return _cached_function(spec.function, json.dumps(spec.function_params, sort_keys=True))


def cell_trials(spec: SweepSpec, scheme: str, n: int, value) -> list[TrialResult]:
    f = _function_for(spec)
    cfg = spec.scheme_config(scheme, n)
    kw = {"p": float(value)} if spec.mode == "p" else {"s": int(value)}
    out = []
    for i in range(spec.trials):
        data_rng = stream(spec.seed, DATA_STREAM, n, i) if spec.fresh_data else stream(spec.seed, DATA_STREAM)
        data = f.sample_inputs(spec.K, data_rng)
        out.append(run_trial(cfg, f, data, stream(spec.seed, PATTERN_STREAM, n, i), **kw))
    return out


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def aggregate(spec: SweepSpec, scheme: str, n: int, value, trials: Sequence[TrialResult]) -> SweepRow:
    """Collapse a cell's trials; compensated sums make the result order-free."""
    losses = [t.total_loss for t in trials]
    mean = _mean(losses)
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in losses) / (len(losses) - 1)) if len(losses) > 1 else 0.0
    return SweepRow(
        scheme, n, spec.K, spec.mode, value, spec.trials, spec.seed,
        mean_loss=mean,
        std_loss=std,
        mean_l_dec=_mean([t.l_dec for t in trials]),
        mean_l_enc=_mean([t.l_enc for t in trials]),
        mean_longest_run=_mean([t.longest_run for t in trials]),
        resamples=sum(t.resamples for t in trials),
        decomposition_ok=all(t.total_loss <= t.l_dec + t.l_enc + 1e-9 for t in trials),
    )


def _run_cell(task) -> SweepRow:
    spec, scheme, n, value = task
    try:
        return aggregate(spec, scheme, n, value, cell_trials(spec, scheme, n, value))
    except DegenerateConfiguration:
        return SweepRow(scheme, n, spec.K, spec.mode, value, spec.trials, spec.seed, failed=True)


def default_workers() -> int:
    env = os.environ.get("STRAGGLESIM_THREADS")
    if env:
        return max(1, int(env))
    return 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Run every (scheme, N, value) cell; failed cells are flagged, not raised."""
    tasks = [(spec, s, n, v) for s in spec.schemes for n in spec.N for v in spec.values]
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or len(tasks) == 1:
        rows = [_run_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            rows = list(pool.map(_run_cell, tasks))
    return SweepResult(rows)


# -- rates and reference curves ---------------------------------------------


def fit_rate(rows: Iterable[SweepRow]) -> RateFit:
    """Least-squares slope of log(mean_loss) against log(N)."""
    usable = [r for r in rows if not r.failed and r.mean_loss > 0 and math.isfinite(r.mean_loss)]
    if len(usable) < 3:
        raise InsufficientData(f"need >= 3 rows with positive loss, got {len(usable)}")
    x = np.log([r.N for r in usable], dtype=float)
    y = np.log([r.mean_loss for r in usable])
    xc = x - x.mean()
    if np.ptp(y) == 0:
        slope = 0.0
    else:
        slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot))
    ns = [r.N for r in usable]
    return RateFit(slope, intercept, r2, (min(ns), max(ns)))


BOUND_EXPONENTS = {"LeTCC": (3, 3), "BACC": (4, 2)}


def theoretical_curve(scheme: str, n: float, p: float, delta: float = 0.05) -> float:
    """Shape of the high-probability loss bound, constant set to 1.

    (log_{1/p}(qN) + sqrt(1/delta))^a / N^b with (a, b) = (3, 3) for LeTCC
    and (4, 2) for BACC.
    """
    if scheme not in BOUND_EXPONENTS:
        raise ValueError(f"unknown scheme {scheme!r}")
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    n = float(n)  # integer N overflows in N**b for numpy ints
    q = 1.0 - p
    if q * n < 1:
        raise ValueError(f"need q*N >= 1, got q*N = {q * n}")
    a, b = BOUND_EXPONENTS[scheme]
    return (math.log(q * n) / math.log(1.0 / p) + math.sqrt(1.0 / delta)) ** a / n**b


@dataclass(frozen=True)
class Comparison:
    prob: RateFit
    fixed: RateFit
    prob_result: SweepResult
    fixed_result: SweepResult


def compare_prob_vs_fixed(
    spec: SweepSpec, scheme: str, p: float, s: int, workers: int | None = None
) -> Comparison:
    """Bernoulli(p) against exactly-s stragglers on shared data streams."""
    base = replace(spec, schemes=(scheme,))
    prob = run_sweep(replace(base, mode="p", values=(p,)), workers)
    fixed = run_sweep(replace(base, mode="s", values=(s,)), workers)
    return Comparison(fit_rate(prob.rows), fit_rate(fixed.rows), prob, fixed)


# -- CSV --------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        d = asdict(r)
        head = [_fmt(d[k]) for k in CSV_HEADER[:7]]
        tail = [FAILED] * len(STAT_FIELDS) if r.failed else [_fmt(d[k]) for k in STAT_FIELDS]
        w.writerow(head + tail)
    return buf.getvalue()


def write_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(to_csv(result))


def parse_csv(text: str) -> SweepResult:
    """Inverse of :func:`to_csv`; raises ValueError on malformed input."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(CSV_HEADER):
            raise ValueError(f"line {lineno}: expected {len(CSV_HEADER)} fields, got {len(rec)}")
        d = dict(zip(CSV_HEADER, rec))
        try:
            mode = d["mode"]
            value = float(d["p_or_s"]) if mode == "p" else int(d["p_or_s"])
            common = (d["scheme"], int(d["N"]), int(d["K"]), mode, value, int(d["trials"]), int(d["seed"]))
            if d["mean_loss"] == FAILED:
                rows.append(SweepRow(*common, failed=True))
            else:
                rows.append(SweepRow(
                    *common,
                    mean_loss=float(d["mean_loss"]),
                    std_loss=float(d["std_loss"]),
                    mean_l_dec=float(d["mean_l_dec"]),
                    mean_l_enc=float(d["mean_l_enc"]),
                    mean_longest_run=float(d["mean_longest_run"]),
                    resamples=int(d["resamples"]),
                ))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return SweepResult(rows)


def read_csv(path) -> SweepResult:
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read())
