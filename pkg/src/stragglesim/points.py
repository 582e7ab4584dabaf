"""Encoder/decoder mapping points on (-1, 1) and their mesh statistics.

All point families are returned sorted ascending. Index sets passed to the
subset functions are 0-based positions into ``points.values``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

KINDS = ("uniform", "chebyshev1", "chebyshev2")


@dataclass(frozen=True)
class MappingPoints:
    values: np.ndarray
    kind: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("mapping points must be a non-empty 1-D sequence")
        if np.any(np.diff(v) <= 0):
            raise ValueError("mapping points must be strictly increasing")
        if v[0] < -1.0 or v[-1] > 1.0:
            raise ValueError("mapping points must lie in [-1, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class MeshStats:
    delta_max: float
    delta_min: float

    @property
    def ratio(self) -> float:
        return self.delta_max / self.delta_min


def uniform_points(n: int) -> MappingPoints:
    """Equispaced interior points -1 + 2j/(n+1), j = 1..n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    j = np.arange(1, n + 1)
    return MappingPoints(-1.0 + 2.0 * j / (n + 1), "uniform")


def chebyshev_first(n: int) -> MappingPoints:
    """Chebyshev points of the first kind, cos((2k-1)pi/2n), ascending.

    Evaluated through the sine form so the set is exactly symmetric and 0 is
    hit exactly for odd n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    j = np.arange(n)
    return MappingPoints(np.sin(np.pi * (2 * j - n + 1) / (2 * n)), "chebyshev1")


def chebyshev_second(n: int) -> MappingPoints:
    """Chebyshev extrema cos((j-1)pi/(n-1)), ascending, endpoints exactly +-1."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    j = np.arange(n)
    return MappingPoints(np.sin(np.pi * (2 * j - n + 1) / (2 * (n - 1))), "chebyshev2")


def make_points(kind: str, n: int) -> MappingPoints:
    if kind == "uniform":
        return uniform_points(n)
    if kind == "chebyshev1":
        return chebyshev_first(n)
    if kind == "chebyshev2":
        return chebyshev_second(n)
    raise ValueError(f"unknown point family {kind!r}; expected one of {KINDS}")


def _stats(values: np.ndarray) -> MeshStats:
    # boundary gaps to -1 and +1 count for delta_max only
    augmented = np.concatenate(([-1.0], values, [1.0]))
    delta_max = float(np.max(np.diff(augmented)))
    if values.size < 2:
        return MeshStats(delta_max, math.nan)
    return MeshStats(delta_max, float(np.min(np.diff(values))))


def _uniform_stats(n: int, idx: np.ndarray) -> MeshStats:
    # gaps counted in grid steps, so equal gaps compare equal exactly
    step = 2.0 / (n + 1)
    steps = np.diff(np.concatenate(([-1], idx, [n])))
    delta_min = float(np.min(steps[1:-1]) * step) if idx.size > 1 else math.nan
    return MeshStats(float(np.max(steps) * step), delta_min)


def mesh_stats(points: MappingPoints) -> MeshStats:
    if len(points) < 2:
        raise ValueError("mesh statistics need at least 2 points")
    if points.kind == "uniform":
        return _uniform_stats(len(points), np.arange(len(points)))
    return _stats(points.values)


def _indices(points: MappingPoints, surviving: Iterable[int]) -> np.ndarray:
    idx = np.unique(np.asarray(list(surviving), dtype=int))
    if idx.size == 0:
        raise ValueError("surviving set is empty")
    if idx[0] < 0 or idx[-1] >= len(points):
        raise ValueError("surviving index out of range")
    return idx


def _subset(points: MappingPoints, surviving: Iterable[int]) -> np.ndarray:
    return points.values[_indices(points, surviving)]


def subset_mesh_stats(points: MappingPoints, surviving: Iterable[int]) -> MeshStats:
    """Mesh statistics of the surviving subsequence.

    A single survivor has no interior gap, so ``delta_min`` (and the ratio)
    is NaN in that case.
    """
    if points.kind == "uniform":
        return _uniform_stats(len(points), _indices(points, surviving))
    return _stats(_subset(points, surviving))


def local_mesh_ratio(points: MappingPoints, surviving: Iterable[int]) -> float:
    """Max-of-min local gap ratio over the surviving nodes.

    For survivors b_1 < ... < b_m and i = 1..m-2 the term is
    min{(b_{i+1}-b_i)/(b_i-b_{i-1}), (b_{i+1}-b_i)/(b_{i+2}-b_{i+1})}.
    At i = 1 the left ratio refers to a node that does not exist and is
    dropped, leaving only the right ratio.
    """
    b = _subset(points, surviving)
    if b.size < 3:
        raise ValueError("local mesh ratio needs at least 3 survivors")
    gaps = np.diff(b)
    # gaps[i-1] is b_{i+1} - b_i in 1-based notation, for i = 1..m-2
    centre = gaps[:-1]
    right = centre / gaps[1:]
    left = np.full_like(centre, np.inf)
    left[1:] = centre[1:] / gaps[:-2]
    return float(np.max(np.minimum(left, right)))


def chebyshev_delta_max(n: int) -> float:
    """Closed-form largest gap of the n Chebyshev extrema."""
    s = math.sin(math.pi / (2 * (n - 1)))
    if n % 2:
        return 2.0 * math.sin(math.pi * (n - 2) / (2 * (n - 1))) * s
    return 2.0 * s


def chebyshev_delta_min(n: int) -> float:
    return 1.0 - math.cos(math.pi / (n - 1))
