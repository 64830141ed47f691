"""Complete and incomplete probability distributions.

A *complete* distribution is a vector ``p`` in ``[0, 1]^N`` with ``sum p_i = 1``.
An *incomplete* distribution carries a deformation parameter ``q`` (``q > 0``,
``q != 1``) and satisfies ``sum p_i**q = 1`` instead.

Both kinds share a "chart": complete distributions are their own chart, while an
incomplete ``p`` maps to the complete vector ``w = p**q``. Perturbations are
convex moves inside the chart, so constraint sets are preserved by
construction, followed by a step search on the distance budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError, ShapeError
from .metric import alpha_distance, check_alpha

VALID_TOL = 1e-9
SELF_TOL = 1e-12

COMPLETE = "complete"
INCOMPLETE = "incomplete"

_MAX_SEED = 2**64


def check_q(q: float) -> float:
    q = float(q)
    if not math.isfinite(q) or q <= 0 or q == 1:
        raise ParameterError(f"q must lie in (0, inf) minus {{1}}, got {q!r}")
    return q


def check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"dimension N must be a positive integer, got {n!r}")
    return int(n)


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < _MAX_SEED:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Generator for ``seed``; extra ``keys`` select an independent deterministic sub-stream."""
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(seq)


def as_weights(w: Sequence[float] | np.ndarray) -> np.ndarray:
    """Validate raw weights: 1-D, non-empty, finite. Returns a float64 copy."""
    arr = np.array(getattr(w, "p", w), dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeError(f"weights must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ShapeError("weights must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise DomainError("weights must be finite")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class CompleteDistribution:
    """Nonnegative vector with entries in [0, 1] summing to one."""

    p: np.ndarray

    kind = COMPLETE
    q = None

    def __post_init__(self):
        arr = as_weights(self.p)
        if np.any(arr < 0) or np.any(arr > 1):
            raise DomainError("entries of a complete distribution must lie in [0, 1]")
        total = float(np.sum(arr))
        if abs(total - 1.0) > VALID_TOL:
            raise DomainError(f"entries must sum to 1 (got {total!r})")
        object.__setattr__(self, "p", _freeze(arr))

    @property
    def n(self) -> int:
        return self.p.size

    def __len__(self):
        return self.p.size

    def __eq__(self, other):
        return isinstance(other, CompleteDistribution) and np.array_equal(self.p, other.p)

    def __hash__(self):
        return hash((COMPLETE, self.p.tobytes()))

    def chart(self) -> np.ndarray:
        return self.p


@dataclass(frozen=True, eq=False)
class IncompleteDistribution:
    """Nonnegative vector with entries in [0, 1] and ``sum p_i**q == 1``."""

    p: np.ndarray
    q: float

    kind = INCOMPLETE

    def __post_init__(self):
        q = check_q(self.q)
        arr = as_weights(self.p)
        if np.any(arr < 0) or np.any(arr > 1):
            raise DomainError("entries of an incomplete distribution must lie in [0, 1]")
        total = float(np.sum(np.power(arr, q)))
        if abs(total - 1.0) > VALID_TOL:
            raise DomainError(f"entries must satisfy sum p**q = 1 (got {total!r})")
        object.__setattr__(self, "p", _freeze(arr))
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.p.size

    def __len__(self):
        return self.p.size

    def __eq__(self, other):
        return (
            isinstance(other, IncompleteDistribution)
            and self.q == other.q
            and np.array_equal(self.p, other.p)
        )

    def __hash__(self):
        return hash((INCOMPLETE, self.q, self.p.tobytes()))

    def chart(self) -> np.ndarray:
        return np.power(self.p, self.q)


Distribution = CompleteDistribution | IncompleteDistribution


def make_distribution(p, kind: str, q: float | None = None) -> Distribution:
    if kind == COMPLETE:
        return CompleteDistribution(p)
    if kind == INCOMPLETE:
        if q is None:
            raise ParameterError("incomplete distributions need q")
        return IncompleteDistribution(p, q)
    raise ParameterError(f"unknown distribution kind {kind!r}")


def normalize_complete(w) -> CompleteDistribution:
    """Scale nonnegative weights to sum to one.

    >>> normalize_complete([1, 3]).p.tolist()
    [0.25, 0.75]
    """
    arr = as_weights(w)
    if np.any(arr < 0):
        raise DomainError("weights must be nonnegative")
    total = np.sum(arr)
    if total <= 0:
        raise DomainError("weights must not all be zero")
    return CompleteDistribution(np.minimum(arr / total, 1.0))


def normalize_incomplete(w, q: float) -> IncompleteDistribution:
    """Scale nonnegative weights so that ``sum p_i**q == 1``: ``p = w / (sum w**q)**(1/q)``."""
    q = check_q(q)
    arr = as_weights(w)
    if np.any(arr < 0):
        raise DomainError("weights must be nonnegative")
    total = np.sum(np.power(arr, q))
    if total <= 0:
        raise DomainError("weights must not all be zero")
    return IncompleteDistribution(np.minimum(arr / total ** (1.0 / q), 1.0), q)


def uniform_complete(n: int) -> CompleteDistribution:
    n = check_n(n)
    return CompleteDistribution(np.full(n, 1.0 / n))


def uniform_incomplete(n: int, q: float) -> IncompleteDistribution:
    """All entries equal to ``(1/N)**(1/q)``."""
    n, q = check_n(n), check_q(q)
    return IncompleteDistribution(np.full(n, (1.0 / n) ** (1.0 / q)), q)


def degenerate(n: int, kind: str = COMPLETE, q: float | None = None, index: int = 0) -> Distribution:
    """The vertex ``e_index``; a member of both constraint sets for every q."""
    n = check_n(n)
    if not 0 <= index < n:
        raise ParameterError(f"index {index} out of range for N={n}")
    p = np.zeros(n)
    p[index] = 1.0
    return make_distribution(p, kind, q)


def sample_chart(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``m`` uniform samples from the probability simplex (normalized exponential spacings)."""
    g = rng.standard_exponential((m, n))
    return g / np.sum(g, axis=-1, keepdims=True)


def sample_distribution(kind: str, n: int, q: float | None = None, seed: int = 0) -> Distribution:
    """Uniform sample from the simplex; for the incomplete kind ``p = w**(1/q)``."""
    n = check_n(n)
    if kind == INCOMPLETE:
        q = check_q(q) if q is not None else None
        if q is None:
            raise ParameterError("incomplete sampling needs q")
    elif kind != COMPLETE:
        raise ParameterError(f"unknown distribution kind {kind!r}")
    w = sample_chart(1, n, make_rng(seed))[0]
    if kind == COMPLETE:
        return CompleteDistribution(w)
    return IncompleteDistribution(np.power(w, 1.0 / q), q)


# --- rays in the chart -------------------------------------------------------


def to_chart(P: np.ndarray, kind: str, q: float | None) -> np.ndarray:
    return P if kind == COMPLETE else np.power(P, q)


def _ray(P: np.ndarray, W: np.ndarray, U: np.ndarray, kind: str, q: float | None):
    """Return ``t -> ray point`` with the per-row direction precomputed."""
    if kind == COMPLETE:
        D = U - P
        return lambda t: P + t * D
    inv_q = 1.0 / q
    pos = W > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(pos, (U - W) / np.where(pos, W, 1.0), 0.0)
    Uq = np.power(U, inv_q)

    def point(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            grow = P * np.expm1(np.log1p(t * r) * inv_q)
        out = P + np.where(pos, grow, np.power(t, inv_q) * Uq)
        return np.clip(out, 0.0, 1.0, out=out)

    return point


def ray_points(P: np.ndarray, W: np.ndarray, U: np.ndarray, t, kind: str, q: float | None) -> np.ndarray:
    """Points at step ``t`` along chart rays from ``W`` (chart of ``P``) toward ``U``.

    Complete: ``P + t (U - P)``. Incomplete: ``((1 - t) W + t U)**(1/q)``, written
    as an increment on ``P`` so that small steps keep full relative precision and
    ``t = 0`` returns ``P`` bit for bit.
    """
    t = np.asarray(t, dtype=np.float64)
    if t.ndim == P.ndim - 1:
        t = t[..., None]
    return _ray(P, W, U, kind, q)(t)


def fit_steps(P, W, U, kind, q, alpha, targets, *, iterations: int = 60) -> np.ndarray:
    """Largest step (to relative precision ~1e-4 in distance) with ``d_alpha(P, ray(t)) <= target`` per row.

    Each coordinate moves monotonically along a chart ray, so the distance is
    nondecreasing in ``t``; a bracketed secant search in log-log coordinates
    finds the step. The returned steps are always feasible; a row that cannot
    move at all gets ``t = 0``.
    """
    m = P.shape[0]
    targets = np.broadcast_to(np.asarray(targets, dtype=np.float64), (m,))
    t = np.zeros(m)

    def dist(rows, steps):
        point = _ray(P[rows], W[rows], U[rows], kind, q)
        return alpha_distance(P[rows], point(steps[:, None]), alpha)

    rows = np.flatnonzero(targets > 0)
    if rows.size == 0:
        return t
    d1 = dist(rows, np.ones(rows.size))
    done = d1 <= targets[rows]
    t[rows[done]] = 1.0
    rows, d1 = rows[~done], d1[~done]
    if rows.size == 0:
        return t

    # first-order guess; exact for complete rays, where d_alpha is homogeneous of degree one
    log_t = np.log(targets[rows])
    s0 = log_t - np.log(d1)
    with np.errstate(divide="ignore"):
        g0 = np.log(dist(rows, np.exp(s0))) - log_t
    ok = g0 <= 0
    lo = np.where(ok, s0, _LOG_FLOOR)
    hi = np.where(ok, 0.0, s0)
    gap = np.where(ok, g0, -np.inf)  # true log shortfall at lo
    glo = gap.copy()
    ghi = np.where(ok, np.log(d1) - log_t, g0)
    if not np.all(ok):
        # overshoot (rounding for complete rays): retry further in
        b = np.flatnonzero(~ok)
        s1 = np.maximum(s0[b] - 2.0 * g0[b] * max(1.0, q or 1.0) - 1e-10, _LOG_FLOOR)
        with np.errstate(divide="ignore"):
            g1 = np.log(dist(rows[b], np.exp(s1))) - log_t[b]
        ok1 = g1 <= 0
        lo[b] = np.where(ok1, s1, lo[b])
        gap[b] = np.where(ok1, g1, gap[b])
        glo[b] = gap[b]
        hi[b] = np.where(ok1, hi[b], s1)
        ghi[b] = np.where(ok1, ghi[b], g1)
    # Illinois regula falsi on g(s) = log d(e^s) - log target; lo always stays feasible
    for _it in range(iterations):
        active = (gap < -_FIT_RTOL) & (hi - lo > 1e-13)
        if not np.any(active):
            break
        a = np.flatnonzero(active)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (lo[a] * ghi[a] - hi[a] * glo[a]) / (ghi[a] - glo[a])
        s = np.where(np.isfinite(s) & (s > lo[a]) & (s < hi[a]), s, 0.5 * (lo[a] + hi[a]))
        with np.errstate(divide="ignore"):
            g = np.log(dist(rows[a], np.exp(s))) - log_t[a]
        ok = g <= 0
        lo_a, glo_a, hi_a, ghi_a = lo[a], glo[a], hi[a], ghi[a]
        lo[a] = np.where(ok, s, lo_a)
        gap[a] = np.where(ok, g, gap[a])
        # the endpoint that survives gets its value halved so it cannot stall the secant
        glo[a] = np.where(ok, g, 0.5 * glo_a)
        hi[a] = np.where(ok, hi_a, s)
        ghi[a] = np.where(ok, 0.5 * ghi_a, g)
    hit = np.isfinite(gap)
    t[rows[hit]] = np.exp(lo[hit])
    return t


# relative distance shortfall accepted as converged
_FIT_RTOL = 1e-4

_LOG_FLOOR = math.log(1e-40)


def chart_targets_from_uniforms(R: np.ndarray, n: int) -> np.ndarray:
    """Ray targets on the simplex built from raw uniforms ``R`` of shape ``(m, 2n + 3)``.

    Mixture: 50% dense uniform samples, 20% vertices, 30% sparse supports.
    """
    m = R.shape[0]
    U = -np.log1p(-R[:, :n])
    keep_u, choice_u, frac_u, idx_u = R[:, n : 2 * n], R[:, 2 * n], R[:, 2 * n + 1], R[:, 2 * n + 2]
    idx = np.minimum((idx_u * n).astype(np.int64), n - 1)
    rows = np.arange(m)
    choice = np.minimum((choice_u * 10).astype(np.int64), 9)
    vertex = choice < 2
    sparse = (choice >= 2) & (choice < 5)
    keep = keep_u < frac_u[:, None]
    keep[rows, idx] = True
    U = np.where(sparse[:, None] & ~keep, 0.0, U)
    U[vertex] = 0.0
    U[rows[vertex], idx[vertex]] = 1.0
    return U / np.sum(U, axis=-1, keepdims=True)


def random_chart_targets(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``m`` random ray targets (see :func:`chart_targets_from_uniforms`)."""
    return chart_targets_from_uniforms(rng.random((m, 2 * n + 3)), n)


def perturb_rows(P: np.ndarray, kind: str, q: float | None, delta: float, alpha: float,
                 rng: np.random.Generator) -> np.ndarray:
    """Batched :func:`perturb_within` for an ``(m, N)`` array of valid distributions."""
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2:
        raise ShapeError("expected an (m, N) array")
    m, n = P.shape
    U = random_chart_targets(m, n, rng)
    # bias the target distance toward the edge of the ball
    targets = delta * rng.random(m) ** 0.25
    W = to_chart(P, kind, q)
    t = fit_steps(P, W, U, kind, q, alpha, targets)
    return ray_points(P, W, U, t, kind, q)


def perturb_within(p: Distribution, delta: float, alpha: float, seed: int = 0) -> Distribution:
    """Random member of ``p``'s constraint set with ``d_alpha(p, p') <= delta``.

    A random chart direction is chosen, the point is moved along it, and the
    step is bisected until the distance constraint holds.
    """
    delta = float(delta)
    alpha = check_alpha(alpha)
    if not math.isfinite(delta) or delta < 0:
        raise ParameterError(f"delta must be a finite nonnegative real, got {delta!r}")
    if delta == 0:
        return p
    out = perturb_rows(p.p[None, :], p.kind, p.q, delta, alpha, make_rng(seed))[0]
    return make_distribution(out, p.kind, p.q)
