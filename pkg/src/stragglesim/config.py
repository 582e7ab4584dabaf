"""JSON experiment configs for ``stragglesim sweep``.

Example::

    {
      "schemes": ["BACC", "LeTCC"],
      "N": [50, 100, 200],
      "K": 16,
      "mode": "p",
      "p": [0.1],
      "trials": 100,
      "seed": 7,
      "function": "xsinx"
    }

``mode: "s"`` takes an ``"S"`` list of straggler counts instead of ``"p"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .experiments import SweepSpec
from .functions import REGISTRY
from .pipeline import SCHEMES
from .points import KINDS


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


KNOWN_KEYS = {
    "schemes", "N", "K", "mode", "p", "S", "trials", "seed", "function", "function_params",
    "alpha_points", "beta_points", "lambda_enc", "lambda_dec", "enc_normalization",
    "fresh_data", "delta", "output",
}


@dataclass(frozen=True)
class ExperimentConfig:
    sweep: SweepSpec
    delta: float = 0.05
    output: str | None = None


def _int(key, v, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(key, f"must be >= {lo}, got {v}")
    return v


def _num(key, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"expected a number, got {v!r}")
    return float(v)


def _list(key, v):
    if not isinstance(v, list) or not v:
        raise ConfigError(key, f"expected a non-empty list, got {v!r}")
    return v


def _choice(key, v, options):
    if v not in options:
        raise ConfigError(key, f"expected one of {sorted(options)}, got {v!r}")
    return v


def parse_config(raw: dict) -> ExperimentConfig:
    """Validate a decoded JSON object; every problem names its key."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "expected a JSON object")
    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")

    schemes = tuple(_choice("schemes", s, SCHEMES) for s in _list("schemes", raw.get("schemes", list(SCHEMES))))
    if "N" not in raw:
        raise ConfigError("N", "required")
    ns = tuple(_int("N", n, lo=4) for n in _list("N", raw["N"]))
    k = _int("K", raw.get("K", 16), lo=1)
    mode = _choice("mode", raw.get("mode", "p"), {"p", "s"})
    if mode == "p":
        if "S" in raw:
            raise ConfigError("S", "only valid with mode 's'")
        values = tuple(_num("p", p) for p in _list("p", raw.get("p", [0.1])))
        for p in values:
            if not 0.0 <= p < 1.0:
                raise ConfigError("p", f"probabilities must lie in [0, 1), got {p}")
    else:
        if "p" in raw:
            raise ConfigError("p", "only valid with mode 'p'")
        values = tuple(_int("S", s, lo=0) for s in _list("S", raw.get("S", [2])))
        if max(values) > min(ns):
            raise ConfigError("S", f"straggler count {max(values)} exceeds the smallest N")
    trials = _int("trials", raw.get("trials", 100), lo=1)
    seed = _int("seed", raw.get("seed", 0), lo=0)
    function = _choice("function", raw.get("function", "xsinx"), set(REGISTRY))
    params = raw.get("function_params", {})
    if not isinstance(params, dict):
        raise ConfigError("function_params", "expected an object")
    for key in ("alpha_points", "beta_points"):
        if key in raw:
            _choice(key, raw[key], set(KINDS))
    lam_enc = _num("lambda_enc", raw.get("lambda_enc", 0.0))
    lam_dec = _num("lambda_dec", raw.get("lambda_dec", 0.0))
    for key, lam in (("lambda_enc", lam_enc), ("lambda_dec", lam_dec)):
        if lam < 0:
            raise ConfigError(key, f"must be >= 0, got {lam}")
    norm = _choice("enc_normalization", raw.get("enc_normalization", "K"), {"K", "F"})
    fresh = raw.get("fresh_data", True)
    if not isinstance(fresh, bool):
        raise ConfigError("fresh_data", "expected true or false")
    delta = _num("delta", raw.get("delta", 0.05))
    if not 0.0 < delta < 1.0:
        raise ConfigError("delta", f"must lie in (0, 1), got {delta}")
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "expected a path string")

    try:
        REGISTRY[function](**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError("function_params", str(exc)) from None
    if raw.get("alpha_points") == "chebyshev2" and k < 2:
        raise ConfigError("K", "chebyshev2 encoder points need K >= 2")

    spec = SweepSpec(
        schemes=schemes, N=ns, K=k, mode=mode, values=values, trials=trials, seed=seed,
        function=function, function_params=params,
        alpha_points=raw.get("alpha_points", "chebyshev1"),
        beta_points=raw.get("beta_points", "chebyshev2"),
        lambda_enc=lam_enc, lambda_dec=lam_dec, enc_normalization=norm, fresh_data=fresh,
    )
    return ExperimentConfig(spec, delta, output)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    return parse_config(raw)
