"""One coded-computing round: encode, compute on survivors, decode, score."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import berrut, spline
from .errors import DegenerateConfiguration, InsufficientSurvivors
from .functions import ComputeFunction
from .points import MappingPoints, make_points
from .stragglers import (
    StragglerPattern,
    longest_run_length,
    sample_bernoulli_pattern,
    sample_fixed_count_pattern,
)

SCHEMES = ("BACC", "LeTCC")
MIN_SURVIVORS = {"BACC": 1, "LeTCC": 2}
MAX_RESAMPLES = 1000

Model = Union[berrut.BerrutInterpolant, spline.SplineModel]


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str
    K: int
    N: int
    alpha_points: str = "chebyshev1"
    beta_points: str = "chebyshev2"
    lambda_enc: float = 0.0
    lambda_dec: float = 0.0
    # "K" divides the encoder's data term by K, "F" by the survivor count
    enc_normalization: str = "K"
    alpha: MappingPoints = field(init=False, repr=False, compare=False)
    beta: MappingPoints = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")
        if self.lambda_enc < 0 or self.lambda_dec < 0:
            raise ValueError("smoothing weights must be >= 0")
        if self.enc_normalization not in ("K", "F"):
            raise ValueError(f"enc_normalization must be 'K' or 'F', got {self.enc_normalization!r}")
        object.__setattr__(self, "alpha", make_points(self.alpha_points, self.K))
        object.__setattr__(self, "beta", make_points(self.beta_points, self.N))

    @property
    def min_survivors(self) -> int:
        return MIN_SURVIVORS[self.scheme]


@dataclass(frozen=True)
class Encoded:
    model: Model
    coded: np.ndarray  # (N, d): x~_n = u_enc(beta_n)


@dataclass(frozen=True)
class SurvivorResults:
    indices: np.ndarray
    nodes: np.ndarray
    values: np.ndarray  # (|F|, m)


@dataclass(frozen=True)
class TrialResult:
    total_loss: float
    l_dec: float
    l_enc: float
    survivor_count: int
    longest_run: int
    resamples: int = 0

    @property
    def resampled(self) -> bool:
        return self.resamples > 0


def encode(cfg: SchemeConfig, data, survivor_count: int | None = None) -> Encoded:
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if data.shape[0] != cfg.K:
        raise ValueError(f"expected {cfg.K} data points, got {data.shape[0]}")
    if cfg.scheme == "BACC":
        model = berrut.fit(cfg.alpha.values, data)
        return Encoded(model, berrut.evaluate(model, cfg.beta.values))
    if cfg.enc_normalization == "F":
        if survivor_count is None:
            raise ValueError("enc_normalization='F' needs the survivor count")
        norm = survivor_count
    else:
        norm = cfg.K
    if cfg.K < 2:
        # a single point cannot carry a curvature penalty; encode as a constant
        return Encoded(_constant_model(data), np.repeat(data, cfg.N, axis=0))
    model = spline.fit_smoothing_spline(cfg.alpha.values, data, cfg.lambda_enc, norm)
    return Encoded(model, spline.evaluate(model, cfg.beta.values))


def _constant_model(data: np.ndarray) -> berrut.BerrutInterpolant:
    return berrut.fit([0.0], data)


def _evaluate(model: Model, z) -> np.ndarray:
    if isinstance(model, spline.SplineModel):
        return spline.evaluate(model, z)
    return berrut.evaluate(model, z)


def compute_with_stragglers(
    cfg: SchemeConfig, coded: np.ndarray, f: ComputeFunction, pattern: StragglerPattern
) -> SurvivorResults:
    if pattern.n_servers != cfg.N:
        raise ValueError(f"pattern has {pattern.n_servers} servers, expected {cfg.N}")
    idx = pattern.surviving
    if idx.size < cfg.min_survivors:
        raise InsufficientSurvivors(
            f"{cfg.scheme} needs {cfg.min_survivors} survivors, got {idx.size}"
        )
    return SurvivorResults(idx, cfg.beta.values[idx], f(coded[idx]))


def fit_decoder(cfg: SchemeConfig, results: SurvivorResults) -> Model:
    if cfg.scheme == "BACC":
        return berrut.fit(results.nodes, results.values)
    return spline.fit_smoothing_spline(
        results.nodes, results.values, cfg.lambda_dec, results.nodes.size
    )


def decode_and_score(
    cfg: SchemeConfig,
    results: SurvivorResults,
    encoded: Encoded,
    data,
    f: ComputeFunction,
    longest_run: int = 0,
    resamples: int = 0,
) -> TrialResult:
    """Fit the decoder on survivors and measure the loss and its two bound terms.

    total_loss = mean_k |u_dec(a_k) - f(x_k)|^2
    l_dec      = 2 mean_k |u_dec(a_k) - f(u_enc(a_k))|^2
    l_enc      = 2 mean_k |f(u_enc(a_k)) - f(x_k)|^2
    """
    decoder = fit_decoder(cfg, results)
    alpha = cfg.alpha.values
    estimate = _evaluate(decoder, alpha)
    truth = f(data)
    through_encoder = f(_evaluate(encoded.model, alpha))
    total = np.mean(np.sum((estimate - truth) ** 2, axis=1))
    l_dec = 2.0 * np.mean(np.sum((estimate - through_encoder) ** 2, axis=1))
    l_enc = 2.0 * np.mean(np.sum((through_encoder - truth) ** 2, axis=1))
    return TrialResult(
        float(total), float(l_dec), float(l_enc), int(results.indices.size), longest_run, resamples
    )


def run_trial(
    cfg: SchemeConfig,
    f: ComputeFunction,
    data,
    rng: np.random.Generator,
    p: float | None = None,
    s: int | None = None,
) -> TrialResult:
    """Draw a decodable straggler pattern (Bernoulli ``p`` or exactly ``s``) and score it.

    Undecodable patterns are redrawn from the same stream; the number of
    redraws is kept on the result.
    """
    if (p is None) == (s is None):
        raise ValueError("give exactly one of p (Bernoulli) or s (fixed count)")
    for resamples in range(MAX_RESAMPLES + 1):
        if p is not None:
            pattern = sample_bernoulli_pattern(cfg.N, p, rng)
        else:
            pattern = sample_fixed_count_pattern(cfg.N, s, rng)
        if pattern.surviving.size >= cfg.min_survivors:
            break
    else:
        raise DegenerateConfiguration(
            f"no decodable pattern after {MAX_RESAMPLES} redraws (N={cfg.N}, p={p}, s={s})"
        )
    survivors = pattern.surviving.size
    encoded = encode(cfg, data, survivors)
    results = compute_with_stragglers(cfg, encoded.coded, f, pattern)
    return decode_and_score(
        cfg, results, encoded, data, f, longest_run_length(pattern.flags), resamples
    )
