"""Computing functions handed to the simulated servers.

Every function acts on a batch: a ``(k, in_dim)`` array maps to ``(k, out_dim)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .stragglers import stream

DEFAULT_MLP_DIMS = (1024, 64, 10)


@dataclass(frozen=True)
class ComputeFunction:
    name: str
    in_dim: int
    out_dim: int
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, self.in_dim)
        return self.fn(x).reshape(x.shape[0], self.out_dim)

    def sample_inputs(self, k: int, rng: np.random.Generator) -> np.ndarray:
        """k inputs drawn uniformly from [-1, 1]^in_dim."""
        return rng.uniform(-1.0, 1.0, size=(k, self.in_dim))


def make_xsinx() -> ComputeFunction:
    return ComputeFunction("xsinx", 1, 1, lambda x: x * np.sin(x))


def make_polynomial(coeffs: Sequence[float]) -> ComputeFunction:
    """Polynomial with ``coeffs`` in increasing degree, evaluated by Horner."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise ValueError("a polynomial needs at least one coefficient")

    def horner(x):
        out = np.full_like(x, coeffs[-1])
        for c in reversed(coeffs[:-1]):
            out = out * x + c
        return out

    return ComputeFunction("poly", 1, 1, horner)


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def make_fixed_mlp(
    layer_dims: Sequence[int] = DEFAULT_MLP_DIMS, seed: int = 0, zero_weights: bool = False
) -> ComputeFunction:
    """Fixed random-weight tanh network with a softmax output layer.

    Weights have variance 1/fan_in and biases standard deviation 0.1, drawn once from the
    seeded stream. ``zero_weights`` gives the all-zero network (uniform output).
    """
    dims = [int(d) for d in layer_dims]
    if len(dims) < 2 or min(dims) < 1:
        raise ValueError(f"need at least two positive layer sizes, got {layer_dims}")
    rng = stream(seed, 0x6D6C70)
    layers = []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        if zero_weights:
            w, b = np.zeros((fan_in, fan_out)), np.zeros(fan_out)
        else:
            w = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out))
            b = rng.normal(0.0, 0.1, size=fan_out)
        w.setflags(write=False)
        b.setflags(write=False)
        layers.append((w, b))

    def forward(x):
        for w, b in layers[:-1]:
            x = np.tanh(x @ w + b)
        w, b = layers[-1]
        return _softmax(x @ w + b)

    return ComputeFunction("mlp", dims[0], dims[-1], forward)


def make_constant(value: float = 1.0, in_dim: int = 1) -> ComputeFunction:
    return ComputeFunction("constant", in_dim, 1, lambda x: np.full((x.shape[0], 1), float(value)))


REGISTRY = {
    "xsinx": make_xsinx,
    "mlp": make_fixed_mlp,
    "poly": make_polynomial,
    "constant": make_constant,
}


def get_function(name: str, **params) -> ComputeFunction:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown function {name!r}; expected one of {sorted(REGISTRY)}") from None
    return factory(**params)
