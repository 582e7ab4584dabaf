"""Natural cubic smoothing splines (encoder and decoder of LeTCC).

The fit minimises, independently per output coordinate,

    (1 / normalization) * sum_i (g(t_i) - y_i)^2 + lam * integral g''(t)^2 dt

over all functions with square-integrable second derivative. The minimiser
is a natural cubic spline with knots at the data abscissae; it is found with
the Reinsch scheme, solving the pentadiagonal system

    (R + a Q^T Q) gamma = Q^T y,    g = y - a Q gamma,    a = lam * normalization,

where gamma holds g'' at the interior knots, Q is the n x (n-2) second
divided-difference matrix and R the (n-2) x (n-2) tridiagonal Gram matrix of
the hat functions (Green & Silverman, ch. 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded


@dataclass(frozen=True)
class SplineModel:
    knots: np.ndarray
    fitted_values: np.ndarray  # (n, m)
    second_derivs: np.ndarray  # (n, m), zero at both ends
    lam: float

    @property
    def dim(self) -> int:
        return self.fitted_values.shape[1]

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)


def _qt_apply(h: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Q^T y: second divided differences at interior knots, shape (n-2, m)."""
    d = np.diff(y, axis=0) / h[:, None]
    return d[1:] - d[:-1]


def _q_apply(h: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Q gamma, shape (n, m)."""
    n = h.size + 1
    out = np.zeros((n, gamma.shape[1]))
    inv = (1.0 / h)[:, None]
    out[:-2] += gamma * inv[:-1]
    out[1:-1] -= gamma * (inv[:-1] + inv[1:])
    out[2:] += gamma * inv[1:]
    return out


def _banded_system(h: np.ndarray, a: float) -> np.ndarray:
    """Upper banded storage (3 x (n-2)) of R + a Q^T Q."""
    k = h.size - 1  # interior knot count
    inv = 1.0 / h
    ab = np.zeros((3, k))
    # R: diag (h_{i-1}+h_i)/3, off-diag h_i/6
    ab[2] = (h[:-1] + h[1:]) / 3.0
    ab[1, 1:] = h[1:-1] / 6.0
    # Q^T Q: column j of Q has entries inv[j], -(inv[j]+inv[j+1]), inv[j+1]
    ab[2] += a * (inv[:-1] ** 2 + (inv[:-1] + inv[1:]) ** 2 + inv[1:] ** 2)
    if k > 1:
        ab[1, 1:] += a * (-(inv[:-2] + inv[1:-1]) * inv[1:-1] - inv[1:-1] * (inv[1:-1] + inv[2:]))
    if k > 2:
        ab[0, 2:] += a * inv[1:-2] * inv[2:-1]
    return ab


def fit_smoothing_spline(knots, data, lam: float = 0.0, normalization: int | None = None) -> SplineModel:
    """Fit a natural cubic smoothing spline through ``(knots, data)``.

    ``normalization`` divides the data-fit term and defaults to the knot
    count. With ``lam == 0`` the result interpolates the data exactly.
    """
    t = np.asarray(knots, dtype=float).ravel()
    y = np.asarray(data, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if t.size < 2:
        raise ValueError("a smoothing spline needs at least 2 knots")
    if y.shape[0] != t.size:
        raise ValueError(f"{t.size} knots but {y.shape[0]} data rows")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    h = np.diff(t)
    if np.any(h <= 0):
        raise ValueError("knots must be strictly increasing (no duplicates)")
    if normalization is None:
        normalization = t.size
    a = float(lam) * normalization

    gamma = np.zeros_like(y)
    g = y.copy()
    if t.size > 2:
        cb = cholesky_banded(_banded_system(h, a), lower=False)
        interior = cho_solve_banded((cb, False), _qt_apply(h, y))
        gamma[1:-1] = interior
        if a > 0:
            g = y - a * _q_apply(h, interior)
    for arr in (t, g, gamma):
        arr.setflags(write=False)
    return SplineModel(t, g, gamma, float(lam))


def evaluate(model: SplineModel, z) -> np.ndarray:
    """Piecewise-cubic evaluation; linear extrapolation outside the knots."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    t, g, c = model.knots, model.fitted_values, model.second_derivs
    out = np.empty((z.size, g.shape[1]))

    i = np.clip(np.searchsorted(t, z, side="right") - 1, 0, t.size - 2)
    h = t[i + 1] - t[i]
    left = z < t[0]
    right = z > t[-1]
    inside = ~(left | right)

    zi = z[inside][:, None]
    ii = i[inside]
    hi = h[inside][:, None]
    a = zi - t[ii][:, None]
    b = t[ii + 1][:, None] - zi
    out[inside] = (a * g[ii + 1] + b * g[ii]) / hi - a * b / 6.0 * (
        (1.0 + a / hi) * c[ii + 1] + (1.0 + b / hi) * c[ii]
    )
    if left.any():
        h0 = t[1] - t[0]
        slope = (g[1] - g[0]) / h0 - h0 * c[1] / 6.0
        out[left] = g[0] + (z[left] - t[0])[:, None] * slope
    if right.any():
        hn = t[-1] - t[-2]
        slope = (g[-1] - g[-2]) / hn + hn * c[-2] / 6.0
        out[right] = g[-1] + (z[right] - t[-1])[:, None] * slope

    # knots return their stored values exactly
    k = np.searchsorted(t, z)
    exact = (k < t.size) & (t[np.minimum(k, t.size - 1)] == z)
    out[exact] = g[k[exact]]
    return out[0] if scalar else out


def derivative(model: SplineModel, z) -> np.ndarray:
    """First derivative of the spline (constant slope outside the knots)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    t, g, c = model.knots, model.fitted_values, model.second_derivs
    zc = np.clip(z, t[0], t[-1])
    i = np.clip(np.searchsorted(t, zc, side="right") - 1, 0, t.size - 2)
    h = (t[i + 1] - t[i])[:, None]
    a = zc[:, None] - t[i][:, None]
    b = t[i + 1][:, None] - zc[:, None]
    return (g[i + 1] - g[i]) / h + (
        (3 * a**2 - h**2) * c[i + 1] - (3 * b**2 - h**2) * c[i]
    ) / (6.0 * h)


def second_derivative_energy(model: SplineModel) -> float:
    """Sum over coordinates of the exact integral of g''(t)^2 over the knot span.

    g'' is piecewise linear, so each interval contributes h (c0^2 + c0 c1 + c1^2) / 3.
    """
    h = np.diff(model.knots)[:, None]
    c0 = model.second_derivs[:-1]
    c1 = model.second_derivs[1:]
    return float(np.sum(h * (c0 * c0 + c0 * c1 + c1 * c1)) / 3.0)


def objective(model: SplineModel, data, normalization: int | None = None) -> float:
    y = np.asarray(data, dtype=float).reshape(model.fitted_values.shape)
    n = model.knots.size if normalization is None else normalization
    fit_term = np.sum((model.fitted_values - y) ** 2) / n
    return float(fit_term + model.lam * second_derivative_energy(model))


@dataclass(frozen=True)
class ResidualReport:
    sup_norm: float
    l2_norm: float
    deriv_l2_norm: float

    def sobolev_gap(self) -> float:
        """sup^2 / (2 ||h|| ||h'||); at most 1 whenever the residual has a root."""
        rhs = 2.0 * self.l2_norm * self.deriv_l2_norm
        if rhs == 0.0:
            return 0.0 if self.sup_norm == 0.0 else np.inf
        return self.sup_norm**2 / rhs


def residual_diagnostics(
    decoder: SplineModel, target: Callable[[np.ndarray], np.ndarray], grid_size: int = 1024
) -> ResidualReport:
    """Norms of h = decoder - target on a uniform grid over [-1, 1].

    L2 norms use the composite trapezoid rule; h' comes from central
    differences (one-sided at the ends).
    """
    if grid_size < 64:
        raise ValueError(f"grid_size must be >= 64, got {grid_size}")
    z = np.linspace(-1.0, 1.0, grid_size)
    ref = np.asarray(target(z), dtype=float).reshape(grid_size, -1)
    h = evaluate(decoder, z) - ref
    dh = np.gradient(h, z, axis=0)
    l2 = np.sqrt(np.trapezoid(np.sum(h**2, axis=1), z))
    dl2 = np.sqrt(np.trapezoid(np.sum(dh**2, axis=1), z))
    sup = float(np.max(np.linalg.norm(h, axis=1)))
    return ResidualReport(sup, float(l2), float(dl2))
