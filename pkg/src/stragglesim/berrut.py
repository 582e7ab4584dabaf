"""Berrut barycentric rational interpolation (encoder and decoder of BACC)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalPole

NODE_TOL = 1e-13
POLE_TOL = 1e-300


@dataclass(frozen=True)
class BerrutInterpolant:
    """Rational interpolant sum_j w_j(z) y_j / sum_j w_j(z), w_j = s_j / (z - x_j).

    ``signs`` alternate by sorted position among the given nodes, not by any
    original server index, so the denominator stays pole-free when nodes
    have been dropped.
    """

    nodes: np.ndarray
    values: np.ndarray  # shape (n, m)
    signs: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def denominator(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return (self.signs / (z[:, None] - self.nodes)).sum(axis=1)

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)


def fit(nodes, values) -> BerrutInterpolant:
    nodes = np.asarray(nodes, dtype=float).ravel()
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if nodes.size == 0:
        raise ValueError("at least one node is required")
    if values.shape[0] != nodes.size:
        raise ValueError(f"{nodes.size} nodes but {values.shape[0]} values")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("nodes must be strictly increasing (no duplicates)")
    signs = np.where(np.arange(nodes.size) % 2 == 0, 1.0, -1.0)
    for a in (nodes, values, signs):
        a.setflags(write=False)
    return BerrutInterpolant(nodes, values, signs)


def evaluate(interp: BerrutInterpolant, z) -> np.ndarray:
    """Evaluate at a scalar (returns shape (m,)) or a 1-D array (shape (len, m)).

    Points within ``1e-13 * span`` of a node return that node's value exactly.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    nodes = interp.nodes
    diff = z[:, None] - nodes
    span = nodes[-1] - nodes[0]
    hit = np.abs(diff) <= NODE_TOL * span
    on_node = hit.any(axis=1)
    out = np.empty((z.size, interp.dim))
    if on_node.any():
        out[on_node] = interp.values[np.argmax(hit[on_node], axis=1)]
    off = ~on_node
    if off.any():
        w = interp.signs / diff[off]
        den = w.sum(axis=1)
        if np.any(np.abs(den) < POLE_TOL):
            raise NumericalPole("Berrut denominator vanished away from the nodes")
        # shifting by the first value makes constants come back exactly
        ref = interp.values[0]
        out[off] = ref + (w @ (interp.values - ref)) / den[:, None]
    return out[0] if scalar else out
