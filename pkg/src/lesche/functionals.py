"""Generalized entropy functionals and their per-dimension maxima.

Six functionals are supported:

==========================  ============  ==========================================
variant                     domain        value
==========================  ============  ==========================================
``tsallis``                 complete      ``(1 - sum p**q) / (q - 1)``
``incomplete``              incomplete    ``(1 - sum p) / (1 - q)``
``renyi``                   complete      ``ln(sum p**q) / (1 - q)``
``kappa``                   complete      ``-sum p (p**k - p**-k) / (2k)``
``quantum_group``           complete      ``-sum (p**q - p**(1/q)) / (q - 1/q)``
``incomplete_expectation``  incomplete    ``sum p**q C``
==========================  ============  ==========================================

``0**x`` is taken as 0 for every positive exponent, so exact zeros are allowed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DomainError, ParameterError, ShapeError
from .simplex import (
    COMPLETE,
    INCOMPLETE,
    CompleteDistribution,
    IncompleteDistribution,
    check_n,
    check_q,
    make_rng,
    uniform_complete,
    uniform_incomplete,
)

TSALLIS = "tsallis"
INCOMPLETE_ENTROPY = "incomplete"
RENYI = "renyi"
KAPPA = "kappa"
QUANTUM_GROUP = "quantum_group"
INCOMPLETE_EXPECTATION = "incomplete_expectation"

VARIANTS = (TSALLIS, INCOMPLETE_ENTROPY, RENYI, KAPPA, QUANTUM_GROUP, INCOMPLETE_EXPECTATION)

ALIASES = {
    "iqe": INCOMPLETE_EXPECTATION,
    "qexp": INCOMPLETE_EXPECTATION,
    "qg": QUANTUM_GROUP,
    "quantum-group": QUANTUM_GROUP,
    "incomplete-expectation": INCOMPLETE_EXPECTATION,
    "incomplete_entropy": INCOMPLETE_ENTROPY,
}

_DOMAIN = {
    TSALLIS: COMPLETE,
    INCOMPLETE_ENTROPY: INCOMPLETE,
    RENYI: COMPLETE,
    KAPPA: COMPLETE,
    QUANTUM_GROUP: COMPLETE,
    INCOMPLETE_EXPECTATION: INCOMPLETE,
}


def check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa == 0 or abs(kappa) >= 1:
        raise ParameterError(f"kappa must lie in (-1, 1) minus {{0}}, got {kappa!r}")
    return kappa


def canonical_variant(name: str) -> str:
    name = name.strip().lower()
    name = ALIASES.get(name, name)
    if name not in VARIANTS:
        raise ParameterError(f"unknown functional {name!r}; expected one of {', '.join(VARIANTS)}")
    return name


@dataclass(frozen=True)
class Functional:
    """Tagged descriptor of one functional and its parameters."""

    variant: str
    q: float | None = None
    kappa: float | None = None
    observable: tuple[float, ...] | None = None

    def __post_init__(self):
        variant = canonical_variant(self.variant)
        object.__setattr__(self, "variant", variant)
        if variant == KAPPA:
            object.__setattr__(self, "kappa", check_kappa(self.kappa if self.kappa is not None else float("nan")))
            if self.q is not None:
                raise ParameterError("the kappa entropy takes kappa, not q")
        else:
            if self.q is None:
                raise ParameterError(f"{variant} needs a deformation parameter q")
            object.__setattr__(self, "q", check_q(self.q))
            if self.kappa is not None:
                raise ParameterError(f"{variant} does not take kappa")
        if variant == INCOMPLETE_EXPECTATION:
            if self.observable is None:
                raise ParameterError("the incomplete q-expectation needs an observable C")
            c = tuple(float(x) for x in self.observable)
            if not c or not all(math.isfinite(x) for x in c):
                raise ParameterError("observable must be a non-empty vector of finite reals")
            if not any(c):
                raise ParameterError("observable must have at least one nonzero entry")
            object.__setattr__(self, "observable", c)
        elif self.observable is not None:
            raise ParameterError(f"{variant} does not take an observable")

    # constructors
    @classmethod
    def tsallis(cls, q):
        return cls(TSALLIS, q=q)

    @classmethod
    def incomplete(cls, q):
        return cls(INCOMPLETE_ENTROPY, q=q)

    @classmethod
    def renyi(cls, q):
        return cls(RENYI, q=q)

    @classmethod
    def kappa_entropy(cls, kappa):
        return cls(KAPPA, kappa=kappa)

    @classmethod
    def quantum_group(cls, q):
        return cls(QUANTUM_GROUP, q=q)

    @classmethod
    def incomplete_expectation(cls, q, observable):
        return cls(INCOMPLETE_EXPECTATION, q=q, observable=tuple(np.ravel(observable)))

    @property
    def domain(self) -> str:
        """``"complete"`` or ``"incomplete"``."""
        return _DOMAIN[self.variant]

    @property
    def param(self) -> float:
        return self.kappa if self.variant == KAPPA else self.q

    def observable_array(self) -> np.ndarray | None:
        return None if self.observable is None else np.asarray(self.observable, dtype=np.float64)

    def with_observable(self, observable) -> "Functional":
        return Functional.incomplete_expectation(self.q, observable)

    def for_dimension(self, n: int, seed: int = 0) -> "Functional":
        """Same functional, usable at dimension ``n``.

        Only the incomplete q-expectation depends on ``n`` (through C); when its
        observable has the wrong length it is replaced by a seeded random one.
        """
        if self.variant != INCOMPLETE_EXPECTATION or len(self.observable) == n:
            return self
        return self.with_observable(random_observable(n, seed))

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "q": self.q,
            "kappa": self.kappa,
            "observable": None if self.observable is None else list(self.observable),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Functional":
        obs = data.get("observable")
        return cls(
            data["variant"],
            q=data.get("q"),
            kappa=data.get("kappa"),
            observable=None if obs is None else tuple(obs),
        )

    @classmethod
    def from_json(cls, text: str) -> "Functional":
        return cls.from_dict(json.loads(text))

    def label(self) -> str:
        if self.variant == KAPPA:
            return f"kappa(kappa={self.kappa:g})"
        return f"{self.variant}(q={self.q:g})"


def random_observable(n: int, seed: int = 0) -> np.ndarray:
    """Seeded observable with standard normal entries (never all zero)."""
    c = make_rng(seed, 0xC0B5, check_n(n)).standard_normal(n)
    if not np.any(c):
        c[0] = 1.0
    return c


# --- evaluation on raw rows --------------------------------------------------
# P has shape (..., N); the reduction runs along the last axis. ``weights`` are
# optional multiplicities for vectors stored as repeated blocks.


def _sum(values: np.ndarray, weights) -> np.ndarray:
    if weights is not None:
        values = values * weights
    return np.sum(values, axis=-1)


def _pow(P: np.ndarray, e: float) -> np.ndarray:
    return np.power(P, e)


def evaluate_rows(f: Functional, P: np.ndarray, weights=None, observable=None):
    """Evaluate ``f`` on each row of ``P`` without domain validation."""
    P = np.asarray(P, dtype=np.float64)
    v = f.variant
    if v == TSALLIS:
        q = f.q
        out = (1.0 - _sum(_pow(P, q), weights)) / (q - 1.0)
    elif v == INCOMPLETE_ENTROPY:
        out = (1.0 - _sum(P, weights)) / (1.0 - f.q)
    elif v == RENYI:
        q = f.q
        with np.errstate(divide="ignore"):
            out = np.log(_sum(_pow(P, q), weights)) / (1.0 - q)
    elif v == KAPPA:
        k = f.kappa
        # p (p^k - p^-k) rewritten as p^(1+k) - p^(1-k): finite at p = 0
        out = _sum(_pow(P, 1.0 - k) - _pow(P, 1.0 + k), weights) / (2.0 * k)
    elif v == QUANTUM_GROUP:
        q = f.q
        out = -_sum(_pow(P, q) - _pow(P, 1.0 / q), weights) / (q - 1.0 / q)
    else:
        c = f.observable_array() if observable is None else np.asarray(observable, dtype=np.float64)
        if c.shape[-1] != P.shape[-1]:
            raise ShapeError(f"observable has {c.shape[-1]} entries, distribution has {P.shape[-1]}")
        out = _sum(_pow(P, f.q) * c, weights)
    return float(out) if np.ndim(out) == 0 else out


def evaluate(f: Functional, p) -> float:
    """Evaluate ``f`` on a distribution, validating that it lies in ``f``'s domain."""
    dist = _coerce(p, f.domain, f.q)
    if f.variant == INCOMPLETE_EXPECTATION and len(f.observable) != dist.n:
        raise ShapeError(f"observable has {len(f.observable)} entries, distribution has {dist.n}")
    if f.variant == RENYI and not np.any(dist.p > 0):
        raise DomainError("Renyi entropy needs sum p**q > 0")
    return evaluate_rows(f, dist.p)


def _coerce(p, kind: str, q: float | None):
    if kind == COMPLETE:
        if isinstance(p, IncompleteDistribution):
            raise DomainError("expected a complete distribution")
        return p if isinstance(p, CompleteDistribution) else CompleteDistribution(p)
    if isinstance(p, IncompleteDistribution):
        if p.q != q:
            raise ParameterError(f"distribution carries q={p.q}, functional uses q={q}")
        return p
    if isinstance(p, CompleteDistribution):
        raise DomainError("expected an incomplete distribution")
    return IncompleteDistribution(p, q)


def tsallis_entropy(p, q: float) -> float:
    """``S_q(p) = (1 - sum p_i**q) / (q - 1)`` on complete distributions."""
    return evaluate(Functional.tsallis(q), p)


def incomplete_entropy(p, q: float) -> float:
    """``(1 - sum p_i) / (1 - q)`` on distributions with ``sum p_i**q = 1``."""
    return evaluate(Functional.incomplete(q), p)


def renyi_entropy(p, q: float) -> float:
    return evaluate(Functional.renyi(q), p)


def kappa_entropy(p, kappa: float) -> float:
    return evaluate(Functional.kappa_entropy(kappa), p)


def quantum_group_entropy(p, q: float) -> float:
    return evaluate(Functional.quantum_group(q), p)


def incomplete_q_expectation(p, q: float, observable) -> float:
    """``sum p_i**q C_i``; a convex combination of the ``C_i`` since the weights sum to one."""
    return evaluate(Functional.incomplete_expectation(q, observable), p)


def shannon_entropy(p) -> float:
    """``-sum p ln p``; only used as the q -> 1 reference value."""
    arr = np.asarray(getattr(p, "p", p), dtype=np.float64)
    nz = arr[arr > 0]
    return float(-np.sum(nz * np.log(nz)))


# --- maxima ------------------------------------------------------------------


ANALYTIC = "analytic"
ORACLE = "oracle"


@dataclass(frozen=True, eq=False)
class MaxValue:
    """``sup |f|`` over the domain at fixed N, and a point attaining it."""

    value: float
    achieved_at: CompleteDistribution | IncompleteDistribution
    provenance: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "achieved_at": self.achieved_at.p.tolist(),
            "provenance": self.provenance,
        }


def functional_max(f: Functional, n: int) -> MaxValue:
    """Maximum of ``|f|`` over distributions of dimension ``n``.

    Tsallis, Renyi and incomplete entropy peak at the (incomplete) uniform
    distribution, with closed forms ``|1 - N**(1-q)| / |1 - q|``, ``ln N`` and
    ``|1 - N**(1 - 1/q)| / |1 - q|``. The kappa and quantum-group entropies
    are evaluated at the uniform distribution; that this is the maximizer is
    checked numerically rather than derived. For the incomplete
    q-expectation the weights ``p**q`` range over the whole simplex, so the
    supremum is exactly ``max_i |C_i|``, attained at a vertex.
    """
    n = check_n(n)
    v = f.variant
    if v == TSALLIS:
        q = f.q
        return MaxValue(abs(1.0 - n ** (1.0 - q)) / abs(1.0 - q), uniform_complete(n), ANALYTIC)
    if v == RENYI:
        if n == 1:
            raise DomainError("the Renyi maximum is 0 at N=1; normalized ratios are undefined")
        return MaxValue(math.log(n), uniform_complete(n), ANALYTIC)
    if v == INCOMPLETE_ENTROPY:
        q = f.q
        return MaxValue(abs(1.0 - n ** (1.0 - 1.0 / q)) / abs(1.0 - q), uniform_incomplete(n, q), ANALYTIC)
    if v in (KAPPA, QUANTUM_GROUP):
        u = uniform_complete(n)
        return MaxValue(abs(evaluate_rows(f, u.p)), u, ORACLE)
    c = f.observable_array()
    if c.size != n:
        raise ShapeError(f"observable has {c.size} entries, N={n}")
    j = int(np.argmax(np.abs(c)))
    vertex = np.zeros(n)
    vertex[j] = 1.0
    return MaxValue(float(abs(c[j])), IncompleteDistribution(vertex, f.q), ANALYTIC)


def max_value(f: Functional, n: int, observable=None) -> float:
    """Normalizer for ratios; for the q-expectation it only looks at ``observable`` values."""
    if f.variant == INCOMPLETE_EXPECTATION:
        c = f.observable_array() if observable is None else np.asarray(observable, dtype=np.float64)
        return float(np.max(np.abs(c)))
    return functional_max(f, n).value
