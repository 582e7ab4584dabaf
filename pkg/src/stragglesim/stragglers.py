"""Straggler patterns, longest straggler runs, and exact/asymptotic run laws.

Randomness comes from counter-based streams: ``stream(seed, *counters)``
hashes the key through :class:`numpy.random.SeedSequence`, so a trial's
pattern depends only on its key and never on execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

EULER_GAMMA = 0.57721566490153286061


def stream(seed: int, *counters: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, counters)]))


def _check_p(p: float) -> None:
    if not 0.0 <= p < 1.0:
        raise ValueError(f"straggler probability must lie in [0, 1), got {p}")


@dataclass(frozen=True)
class StragglerPattern:
    """Per-server straggler flags (1 = straggler)."""

    flags: np.ndarray
    surviving: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        flags = np.asarray(self.flags, dtype=np.int8)
        if flags.ndim != 1 or flags.size == 0:
            raise ValueError("a pattern needs at least one server")
        if np.any((flags != 0) & (flags != 1)):
            raise ValueError("flags must be 0 or 1")
        flags.setflags(write=False)
        surviving = np.flatnonzero(flags == 0)
        surviving.setflags(write=False)
        object.__setattr__(self, "flags", flags)
        object.__setattr__(self, "surviving", surviving)

    @property
    def n_servers(self) -> int:
        return self.flags.size

    @property
    def n_stragglers(self) -> int:
        return int(self.flags.sum())


@dataclass(frozen=True)
class RunStatistics:
    longest_run: int
    n: int
    p: float | None = None


def sample_bernoulli_pattern(n: int, p: float, rng: np.random.Generator) -> StragglerPattern:
    """Each of ``n`` servers straggles independently with probability ``p``.

    Flags are ``u < p`` for one uniform per server, so patterns drawn from the
    same stream at two probabilities are nested.
    """
    _check_p(p)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return StragglerPattern((rng.random(n) < p).astype(np.int8))


def sample_fixed_count_pattern(n: int, s: int, rng: np.random.Generator) -> StragglerPattern:
    """Exactly ``s`` stragglers, uniformly among all C(n, s) subsets."""
    if not 0 <= s <= n:
        raise ValueError(f"straggler count must lie in [0, {n}], got {s}")
    flags = np.zeros(n, dtype=np.int8)
    flags[rng.choice(n, size=s, replace=False)] = 1
    return StragglerPattern(flags)


def longest_run_length(flags) -> int:
    flags = np.asarray(flags, dtype=np.int8)
    if flags.size == 0 or not flags.any():
        return 0
    padded = np.concatenate(([0], flags, [0]))
    edges = np.flatnonzero(np.diff(padded))
    return int(np.max(edges[1::2] - edges[::2]))


def longest_run(pattern: StragglerPattern, p: float | None = None) -> RunStatistics:
    return RunStatistics(longest_run_length(pattern.flags), pattern.n_servers, p)


# -- exact law of the longest run -------------------------------------------


def _run_law(n: int, p: float, r: int) -> tuple[float, float]:
    """(Pr(R <= r), Pr(R > r)) for n Bernoulli(p) servers.

    Dynamic programme over the trailing-run length 0..r plus one absorbing
    state that collects every sequence whose run has exceeded r. The n steps
    are composed by repeated squaring (O(r^3 log n)); keeping the overflow
    mass in its own state gives the tail without cancellation.
    """
    q = 1.0 - p
    t = np.zeros((r + 2, r + 2))
    t[0, : r + 1] = q
    t[np.arange(1, r + 2), np.arange(r + 1)] = p
    t[r + 1, r + 1] = 1.0
    state = np.zeros(r + 2)
    state[0] = 1.0
    state = np.linalg.matrix_power(t, n) @ state
    return float(min(1.0, state[: r + 1].sum())), float(state[r + 1])


def exact_run_cdf(n: int, p: float, r: int) -> float:
    """Pr(longest run of stragglers <= r) among ``n`` Bernoulli(p) servers."""
    _check_p(p)
    if r < 0:
        raise ValueError(f"run length must be >= 0, got {r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if r >= n or p == 0.0:
        return 1.0
    return _run_law(n, p, r)[0]


def exact_run_tail(n: int, p: float, r: int) -> float:
    """Pr(longest run > r), accurate even far below 1e-16."""
    _check_p(p)
    if r < 0:
        return 1.0 if n > 0 and p > 0 else 0.0
    if r >= n or p == 0.0:
        return 0.0
    return _run_law(n, p, r)[1]


def _tails(n: int, p: float, tol: float = 1e-17) -> list[float]:
    tails = []
    for r in range(n):
        t = exact_run_tail(n, p, r)
        tails.append(t)
        if t < tol:
            break
    return tails


def exact_run_mean(n: int, p: float) -> float:
    """E[R] through the tail-sum identity, truncated once the tail is < 1e-17."""
    _check_p(p)
    if p == 0.0 or n == 0:
        return 0.0
    return math.fsum(_tails(n, p))


def exact_run_variance(n: int, p: float) -> float:
    _check_p(p)
    if p == 0.0 or n == 0:
        return 0.0
    tails = _tails(n, p)
    mean = math.fsum(tails)
    second = math.fsum((2 * r + 1) * t for r, t in enumerate(tails))
    return second - mean * mean


def exact_run_pmf(n: int, p: float) -> np.ndarray:
    """Probability of each longest-run value 0..n."""
    cdf = np.array([exact_run_cdf(n, p, r) for r in range(n + 1)])
    return np.diff(cdf, prepend=0.0)


# -- asymptotic moments -----------------------------------------------------


@dataclass(frozen=True)
class GordonMoments:
    theta: float
    mean_center: float
    mean_halfwidth: float
    var_center: float
    var_halfwidth: float
    log_term: float

    @property
    def mu1(self) -> float:
        """Upper envelope of E[R] minus the leading log term."""
        return self.mean_halfwidth + self.mean_center - self.log_term

    @property
    def mu2(self) -> float:
        """Upper envelope of Var[R]."""
        return self.var_halfwidth + self.var_center


def gordon_moments(n: int, p: float) -> GordonMoments:
    """Asymptotic mean/variance bands for the longest run (o(1) terms dropped)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly in (0, 1), got {p}")
    q = 1.0 - p
    if n < 1 or q * n < 1.0:
        raise ValueError(f"need q*n >= 1, got n={n}, p={p}")
    ln_inv_p = math.log(1.0 / p)
    theta = math.pi**2 / ln_inv_p
    log_term = math.log(q * n) / ln_inv_p
    g1 = math.sqrt(theta) / (2 * math.pi * math.exp(theta) * (1 - math.exp(-theta)) ** 2)
    g2 = (
        2 * (1.1 + 0.7 * theta) * math.sqrt(theta)
        / (2 * math.pi * math.exp(theta) * (1 - math.exp(-theta)) ** 3)
    )
    return GordonMoments(
        theta=theta,
        mean_center=log_term + EULER_GAMMA / ln_inv_p - 0.5,
        mean_halfwidth=g1,
        var_center=math.pi**2 / (6 * ln_inv_p**2) + 1.0 / 12.0,
        var_halfwidth=g2,
        log_term=log_term,
    )


@dataclass(frozen=True)
class TailReport:
    threshold: float
    empirical_tail: float
    exact_tail: float
    bound: float
    trials: int
    passed: bool


def tail_threshold(n: int, p: float, delta: float) -> float:
    """log_{1/p}(qn) + mu1 + sqrt(1/delta - 1) * sqrt(mu2)."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    g = gordon_moments(n, p)
    return g.log_term + g.mu1 + math.sqrt(1.0 / delta - 1.0) * math.sqrt(g.mu2)


def tail_bound_check(
    n: int, p: float, delta: float, trials: int, rng: np.random.Generator
) -> TailReport:
    """Compare Pr(R >= threshold) with delta, empirically and exactly.

    ``passed`` requires the empirical tail to stay within delta plus three
    binomial standard errors.
    """
    q = 1.0 - p
    if n < math.ceil(1.0 / q):
        raise ValueError(f"n must be >= ceil(1/q) = {math.ceil(1.0 / q)}")
    threshold = tail_threshold(n, p, delta)
    cut = math.ceil(threshold)
    hits = 0
    for _ in range(trials):
        if longest_run_length(rng.random(n) < p) >= cut:
            hits += 1
    empirical = hits / trials
    exact = exact_run_tail(n, p, cut - 1)
    slack = 3.0 * math.sqrt(delta * (1.0 - delta) / trials)
    return TailReport(threshold, empirical, exact, delta, trials, empirical <= delta + slack)
