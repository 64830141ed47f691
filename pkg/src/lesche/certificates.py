"""Constructive stability certificates.

A certificate ``(alpha, epsilon, delta)`` for a functional C asserts: for every
N >= n_min and every pair p, p' in C's domain,

    d_alpha(p, p') < delta  implies  |C(p) - C(p')| / C_max(N) < epsilon.

The deltas below come from explicit bounds: powers-of-differences
inequalities (``lemma10_bounds``) combined with suprema of the normalizing
factors over N >= 2 (``bound_constant``).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Any

import numpy as np

from .errors import ParameterError, UnsupportedRegimeError
from .functionals import (
    INCOMPLETE_ENTROPY,
    INCOMPLETE_EXPECTATION,
    KAPPA,
    QUANTUM_GROUP,
    RENYI,
    TSALLIS,
    Functional,
    canonical_variant,
)
from .metric import _pair, abs_pow, check_alpha
from .simplex import check_q

TSALLIS_LOW = "tsallis_low"
TSALLIS_HIGH = "tsallis_high"
BOUND_FAMILIES = (INCOMPLETE_ENTROPY, TSALLIS_LOW, TSALLIS_HIGH)

BOUND_GRID_MAX = 10_000


@dataclass(frozen=True)
class BoundConstant:
    value: float
    family: str
    q: float


def bound_ratio(family: str, q: float, x):
    """The N-dependent factor the certificate has to dominate, evaluated at ``x >= 2``.

    * ``tsallis_low`` (0 < q < 1): ``x**(1-q) / (x**(1-q) - 1)``
    * ``tsallis_high`` (q > 1): ``1 / (1 - x**(1-q))``
    * ``incomplete``: ``1 / |1 - x**(1 - 1/q)|``
    """
    q = _check_bound_q(family, q)
    x = np.asarray(x, dtype=np.float64)
    if family == TSALLIS_LOW:
        y = np.power(x, 1.0 - q)
        return y / (y - 1.0)
    if family == TSALLIS_HIGH:
        return 1.0 / (1.0 - np.power(x, 1.0 - q))
    return 1.0 / np.abs(1.0 - np.power(x, 1.0 - 1.0 / q))


def _check_bound_q(family: str, q: float) -> float:
    q = check_q(q)
    if family == TSALLIS_LOW and not q < 1:
        raise ParameterError(f"tsallis_low needs 0 < q < 1, got {q}")
    if family == TSALLIS_HIGH and not q > 1:
        raise ParameterError(f"tsallis_high needs q > 1, got {q}")
    if family not in BOUND_FAMILIES:
        raise ParameterError(f"unknown bound family {family!r}")
    return q


def bound_constant(family: str, q: float) -> BoundConstant:
    """Supremum of :func:`bound_ratio` over ``x >= 2``.

    Every ratio is decreasing in x, so the supremum is its value at x = 2:
    ``2**(1-q)/(2**(1-q) - 1)``, ``1/(1 - 2**(1-q))`` and ``1/|1 - 2**(1-1/q)|``.
    The closed form is cross-checked against the integer grid 2..10**4.
    """
    q = _check_bound_q(family, q)
    value = float(bound_ratio(family, q, 2.0))
    grid = bound_ratio(family, q, np.arange(2, BOUND_GRID_MAX + 1, dtype=np.float64))
    if np.max(grid) > value * (1 + 1e-12):
        raise AssertionError(f"{family} ratio not maximal at x=2 for q={q}")  # pragma: no cover
    return BoundConstant(value, family, q)


@dataclass(frozen=True)
class StabilityCertificate:
    family: str
    alpha: float
    epsilon: float
    delta: float
    n_min: int
    provenance: str
    param: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "StabilityCertificate":
        return cls(**{k: data[k] for k in ("family", "alpha", "epsilon", "delta", "n_min", "provenance")},
                   param=data.get("param"))


def _check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise ParameterError(f"epsilon must be a finite positive real, got {epsilon!r}")
    return epsilon


def _clamp(delta: float) -> float:
    return min(delta, 1.0)


def delta_for(family: str, q: float, alpha: float, epsilon: float) -> StabilityCertificate:
    """Certificate for one of the directly bounded families.

    ==========================  ==============  ===================================
    family                      regime          delta
    ==========================  ==============  ===================================
    incomplete                  alpha <= 1      ``(eps / M)**(1/alpha)``
    tsallis, q < 1              alpha <= 1      ``(eps / M1)**(1/(alpha q))``
    tsallis, q > 1              alpha <= 1      ``(eps / (q M2))**(1/alpha)``
    incomplete_expectation      q > 1, a <= 1   ``(eps / q)**(1/alpha)``
    incomplete_expectation      q < 1, a <= q   ``eps**(1/alpha)``
    renyi                       q < 1, a <= q   ``((1-q) ln(3) eps)**(1/alpha)``, N >= 3
    ==========================  ==============  ===================================

    ``M``, ``M1``, ``M2`` are the :func:`bound_constant` values. Deltas are clamped
    to at most 1 so that downgrading stays valid.
    """
    family = canonical_variant(family)
    q = check_q(q)
    alpha = check_alpha(alpha)
    epsilon = _check_epsilon(epsilon)
    n_min = 2

    if family == INCOMPLETE_ENTROPY:
        _require(alpha <= 1, family, f"incomplete entropy is certified only for alpha <= 1 (alpha={alpha})")
        m = bound_constant(INCOMPLETE_ENTROPY, q).value
        delta = (epsilon / m) ** (1.0 / alpha)
        provenance = f"incomplete-entropy: delta=(eps/M)^(1/alpha), M={m!r}"
    elif family == TSALLIS:
        _require(alpha <= 1, family, f"Tsallis entropy is certified only for alpha <= 1 (alpha={alpha})")
        if q < 1:
            m1 = bound_constant(TSALLIS_LOW, q).value
            delta = (epsilon / m1) ** (1.0 / (alpha * q))
            provenance = f"tsallis q<1: delta=(eps/M1)^(1/(alpha*q)), M1={m1!r}"
        else:
            m2 = bound_constant(TSALLIS_HIGH, q).value
            delta = (epsilon / (q * m2)) ** (1.0 / alpha)
            provenance = f"tsallis q>1: delta=(eps/(q*M2))^(1/alpha), M2={m2!r}"
    elif family == INCOMPLETE_EXPECTATION:
        if q > 1:
            _require(alpha <= 1, family, f"q-expectation with q>1 is certified only for alpha <= 1 (alpha={alpha})")
            delta = (epsilon / q) ** (1.0 / alpha)
            provenance = "q-expectation q>1: delta=(eps/q)^(1/alpha)"
        else:
            _require(alpha <= q, family,
                     f"q-expectation with q<1 is certified only for alpha <= q (alpha={alpha}, q={q}); "
                     "it is unstable at alpha=1")
            delta = epsilon ** (1.0 / alpha)
            provenance = "q-expectation q<1: delta=eps^(1/alpha)"
    elif family == RENYI:
        _require(q < 1, family, f"Renyi entropy with q>1 is not covered (q={q}); it is known to be Lesche-unstable")
        _require(alpha <= q, family, f"Renyi entropy is certified only for alpha <= q (alpha={alpha}, q={q})")
        # |R(p) - R(p')| / ln N <= d_alpha**alpha / ((1 - q) ln N) and ln N >= ln 3
        n_min = 3
        delta = ((1.0 - q) * math.log(n_min) * epsilon) ** (1.0 / alpha)
        provenance = "renyi q<1: delta=((1-q)*ln(3)*eps)^(1/alpha), N>=3"
    else:
        raise ParameterError(f"{family} has no direct certificate; use certificate_for")
    return StabilityCertificate(family, alpha, epsilon, _clamp(delta), n_min, provenance, q)


def _require(cond: bool, family: str, message: str):
    if not cond:
        raise UnsupportedRegimeError(message, family=family)


def downgrade_certificate(cert: StabilityCertificate, beta: float) -> StabilityCertificate:
    """Turn an alpha-certificate into a beta-certificate for ``beta <= alpha``.

    Since ``d_alpha**alpha <= d_beta**beta`` on differences bounded by one,
    ``d_beta < delta**(alpha/beta)`` forces ``d_alpha < delta``.
    """
    beta = check_alpha(beta)
    if beta > cert.alpha:
        raise ParameterError(f"can only lower alpha (beta={beta} > alpha={cert.alpha})")
    if cert.delta > 1:
        raise ParameterError("downgrading needs delta <= 1")
    return replace(
        cert,
        alpha=beta,
        delta=cert.delta ** (cert.alpha / beta),
        provenance=f"downgraded alpha={cert.alpha!r}->{beta!r} from [{cert.provenance}]",
    )


def combine_certificates(c1: StabilityCertificate, c2: StabilityCertificate, lam: float, mu: float,
                         epsilon: float, *, family: str | None = None) -> StabilityCertificate:
    """Certificate for ``lam*C1 + mu*C2`` (both nonnegative) from certificates at ``epsilon/2``."""
    epsilon = _check_epsilon(epsilon)
    if lam < 0 or mu < 0 or not (math.isfinite(lam) and math.isfinite(mu)):
        raise ParameterError("combination weights must be finite and nonnegative")
    if c1.alpha != c2.alpha:
        raise ParameterError(f"alpha mismatch: {c1.alpha} vs {c2.alpha}")
    for c in (c1, c2):
        if not math.isclose(c.epsilon, epsilon / 2, rel_tol=1e-12):
            raise ParameterError(f"components must be issued at epsilon/2={epsilon / 2!r}, got {c.epsilon!r}")
    return StabilityCertificate(
        family or f"{c1.family}+{c2.family}",
        c1.alpha,
        epsilon,
        min(c1.delta, c2.delta),
        max(c1.n_min, c2.n_min),
        f"combination {lam!r}*[{c1.provenance}] + {mu!r}*[{c2.provenance}]: delta=min(delta1, delta2)",
    )


def certificate_for(f: Functional, alpha: float, epsilon: float) -> StabilityCertificate:
    """Certificate for any supported functional.

    The kappa entropy is ``(S_{1+k} + S_{1-k}) / 2`` and the quantum-group
    entropy is ``q/(q+1) S_q + 1/(q+1) S_{1/q}``; both are certified by
    combining Tsallis certificates at half the tolerance.
    """
    epsilon = _check_epsilon(epsilon)
    if f.variant == KAPPA:
        k = f.kappa
        parts = [delta_for(TSALLIS, 1.0 + k, alpha, epsilon / 2), delta_for(TSALLIS, 1.0 - k, alpha, epsilon / 2)]
        cert = combine_certificates(*parts, 0.5, 0.5, epsilon, family=KAPPA)
        return replace(cert, param=k)
    if f.variant == QUANTUM_GROUP:
        q = f.q
        parts = [delta_for(TSALLIS, q, alpha, epsilon / 2), delta_for(TSALLIS, 1.0 / q, alpha, epsilon / 2)]
        cert = combine_certificates(*parts, q / (q + 1), 1 / (q + 1), epsilon, family=QUANTUM_GROUP)
        return replace(cert, param=q)
    return delta_for(f.variant, f.q, alpha, epsilon)


# --- power-difference inequalities -------------------------------------------

LEMMA_VARIANTS = ("a", "b", "c", "d")


def lemma10_sides(P, P2, alpha: float, variant: str):
    """Both sides of ``sum |p_i**a - p2_i**a| <= bound`` along the last axis.

    ====  ==========  =====================================
    a     alpha < 1   ``d_alpha(p, p2)**alpha``
    b     alpha < 1   ``N**(1-alpha) d_1(p, p2)**alpha``
    c     alpha > 1   ``alpha d_1(p, p2)``
    d     alpha > 1   ``alpha N**(1-1/alpha) d_alpha(p, p2)``
    ====  ==========  =====================================
    """
    alpha = check_alpha(alpha)
    if variant not in LEMMA_VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}")
    if variant in "ab" and not alpha < 1:
        raise ParameterError(f"variant {variant} needs alpha < 1")
    if variant in "cd" and not alpha > 1:
        raise ParameterError(f"variant {variant} needs alpha > 1")
    a, b = _pair(P, P2)
    if np.any((a < 0) | (a > 1) | (b < 0) | (b > 1)):
        raise ParameterError("entries must lie in [0, 1]")
    n = a.shape[-1]
    diff = np.abs(a - b)
    lhs = np.sum(np.abs(np.power(a, alpha) - np.power(b, alpha)), axis=-1)
    if variant == "a":
        rhs = np.sum(abs_pow(diff, alpha), axis=-1)
    elif variant == "b":
        rhs = n ** (1.0 - alpha) * np.power(np.sum(diff, axis=-1), alpha)
    elif variant == "c":
        rhs = alpha * np.sum(diff, axis=-1)
    else:
        rhs = alpha * n ** (1.0 - 1.0 / alpha) * np.power(np.sum(abs_pow(diff, alpha), axis=-1), 1.0 / alpha)
    return lhs, rhs


def lemma10_bounds(p, p2, alpha: float, variant: str) -> tuple[float, float]:
    """``(lhs, rhs)`` for a single pair; see :func:`lemma10_sides`."""
    lhs, rhs = lemma10_sides(p, p2, alpha, variant)
    return float(lhs), float(rhs)


def cube_pairs(m: int, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random pairs in ``[0, 1]^n`` with exact zeros, ties, ones and tiny entries mixed in."""
    A = rng.random((m, n))
    B = rng.random((m, n))
    for X in (A, B):
        X[rng.random((m, n)) < 0.1] = 0.0
        X[rng.random((m, n)) < 0.05] = 1.0
        tiny = rng.random((m, n)) < 0.1
        X[tiny] = 10.0 ** (-30.0 * rng.random(int(tiny.sum())))
    tie = rng.random((m, n)) < 0.1
    B[tie] = A[tie]
    near = rng.random((m, n)) < 0.1
    B[near] = np.clip(A[near] + 1e-9 * rng.standard_normal(int(near.sum())), 0.0, 1.0)
    return A, B


LEMMA_DIMENSIONS = (1, 2, 3, 5, 10, 50)


def lemma10_check(variant: str, alpha: float, trials: int, seed: int = 0) -> tuple[int, float]:
    """Run ``trials`` random checks of one inequality; return ``(checks, max(lhs - rhs))``."""
    from .simplex import make_rng

    rng = make_rng(seed, ord(variant), int(round(alpha * 1000)))
    worst = -np.inf
    done = 0
    per_dim = -(-trials // len(LEMMA_DIMENSIONS))
    for n in LEMMA_DIMENSIONS:
        todo = min(per_dim, trials - done)
        while todo > 0:
            m = min(todo, max(1, 200_000 // n))
            A, B = cube_pairs(m, n, rng)
            lhs, rhs = lemma10_sides(A, B, alpha, variant)
            worst = max(worst, float(np.max(lhs - rhs)))
            done += m
            todo -= m
    return done, worst


def bound_grid_excess(family: str, q: float) -> float:
    """``max_x ratio(x) - bound_constant`` over the integer grid 2..10**4 (<= 0 when the bound holds)."""
    grid = bound_ratio(family, q, np.arange(2, BOUND_GRID_MAX + 1, dtype=np.float64))
    return float(np.max(grid) - bound_constant(family, q).value)
