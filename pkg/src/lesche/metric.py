"""The d_alpha family of distances on R^N.

For ``alpha >= 1`` the map

    d_alpha(p, p') = (sum_i |p_i - p'_i|^alpha)^(1/alpha)

is the usual l^alpha norm distance. For ``0 < alpha < 1`` it is only a
quasi-distance: symmetric and point-separating, but the triangle inequality
holds up to the factor ``2^(1/alpha - 1)``.

All functions accept plain sequences, numpy arrays, or distribution objects
(anything with a ``.p`` attribute). Batched input of shape ``(m, N)`` is
reduced along the last axis and returns an array of length ``m``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError, ShapeError

# below this magnitude |x|**alpha is evaluated as exp(alpha*log|x|)
TINY = 1e-300


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0:
        raise ParameterError(f"alpha must be a finite positive real, got {alpha!r}")
    return alpha


def _vector(x) -> np.ndarray:
    return np.asarray(getattr(x, "p", x), dtype=np.float64)


def _pair(p, p2) -> tuple[np.ndarray, np.ndarray]:
    a, b = _vector(p), _vector(p2)
    if a.shape != b.shape:
        raise ShapeError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.ndim == 0 or a.shape[-1] < 1:
        raise ShapeError("vectors must have at least one coordinate")
    return a, b


def abs_pow(x: np.ndarray, alpha: float) -> np.ndarray:
    """Elementwise ``|x|**alpha`` with ``0**alpha == 0`` and a log-space path for tiny values."""
    ax = np.abs(np.asarray(x, dtype=np.float64))
    if alpha == 1.0:
        return ax
    out = np.power(ax, alpha)
    tiny = (ax > 0) & (ax < TINY)
    if np.any(tiny):
        out[tiny] = np.exp(alpha * np.log(ax[tiny]))
    return out


def _reduce(values: np.ndarray, weights: np.ndarray | None):
    if weights is not None:
        values = values * weights
    total = np.sum(values, axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def power_sum(p, p2, alpha: float, *, weights=None):
    """Return ``sum_i |p_i - p2_i|**alpha``, i.e. ``alpha_distance(p, p2, alpha)**alpha``.

    ``weights`` gives optional per-coordinate multiplicities, for vectors stored
    as blocks of repeated values.
    """
    alpha = check_alpha(alpha)
    a, b = _pair(p, p2)
    w = None if weights is None else np.asarray(weights, dtype=np.float64)
    return _reduce(abs_pow(a - b, alpha), w)


def alpha_distance(p, p2, alpha: float, *, weights=None):
    """Return ``(sum_i |p_i - p2_i|**alpha)**(1/alpha)``.

    Zero exactly when ``p == p2``.

    >>> alpha_distance((1, 0), (0, 1), 0.5)
    4.0
    """
    alpha = check_alpha(alpha)
    s = power_sum(p, p2, alpha, weights=weights)
    return s ** (1.0 / alpha) if isinstance(s, float) else np.power(s, 1.0 / alpha)


def quasi_triangle_factor(alpha: float) -> float:
    """Constant K with ``d(p, p'') <= K (d(p, p') + d(p', p''))``: ``2**(1/alpha - 1)`` below 1, else 1."""
    alpha = check_alpha(alpha)
    if alpha >= 1:
        return 1.0
    return 2.0 ** (1.0 / alpha - 1.0)


def triangle_slack(p, p1, p2, alpha: float) -> float:
    """``K*(d(p,p1) + d(p1,p2)) - d(p,p2)``; nonnegative whenever the (quasi-)triangle inequality holds."""
    k = quasi_triangle_factor(alpha)
    return k * (alpha_distance(p, p1, alpha) + alpha_distance(p1, p2, alpha)) - alpha_distance(p, p2, alpha)
