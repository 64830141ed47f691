"""Instability witnesses and searches for large normalized deviations.

The quantity of interest for a functional C, budget delta and dimension N is

    sup { |C(p) - C(p')| / C_max(N) : d_alpha(p, p') < delta }.

Everything here produces *lower bounds* on that supremum: explicit pair
constructions, and seeded searches (:func:`probe`, :func:`sample_within`).

Searches move along rays in the chart of the constraint set (see
:mod:`lesche.simplex`). Probe steps come from a ladder that does not depend on
delta, and a candidate counts only when it is strictly inside the budget, so
the candidate set for a smaller budget is contained in the one for a larger
budget and the best ratio is monotone in delta.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .certificates import StabilityCertificate
from .errors import DomainError, ParameterError, ShapeError
from .functionals import (
    INCOMPLETE_EXPECTATION,
    RENYI,
    Functional,
    evaluate,
    evaluate_rows,
    max_value,
)
from .metric import alpha_distance, check_alpha
from .simplex import (
    COMPLETE,
    INCOMPLETE,
    check_n,
    check_q,
    check_seed,
    make_distribution,
    make_rng,
    perturb_rows,
    chart_targets_from_uniforms,
    ray_points,
    to_chart,
)

STRATEGIES = ("random", "greedy", "structured", "all")

# sub-stream keys for make_rng
_RANDOM_STREAM = 1
_GREEDY_STREAM = 2
_SAMPLE_STREAM = 3

# probe steps: phi * 2**-j for j = 0.._LADDER_DEPTH, phi drawn per trial in (1/2, 1]
_LADDER_DEPTH = 56
# structured steps: 2**(-j/8)
_FINE_LADDER = 2.0 ** (-np.arange(0, 8 * 60 + 1) / 8.0)

# rows * N per vectorized block
_BLOCK = 1 << 20


@dataclass(frozen=True, eq=False)
class WitnessPair:
    """A pair ``(p, p2)`` with its distance and normalized deviation.

    Vectors may be stored compressed: the dense vector is
    ``np.tile(np.repeat(p, repeats), tile)``. ``repeats=None, tile=1`` means
    ``p`` is stored as is. The observable of a q-expectation lives in
    ``functional`` and uses the same layout.
    """

    functional: Functional
    alpha: float
    p: np.ndarray
    p2: np.ndarray
    achieved_distance: float
    ratio: float
    repeats: np.ndarray | None = None
    tile: int = 1
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.functional.domain

    @property
    def observable(self) -> np.ndarray | None:
        return self.functional.observable_array()

    @property
    def weights(self) -> np.ndarray | None:
        if self.repeats is None and self.tile == 1:
            return None
        reps = np.ones(self.p.size) if self.repeats is None else np.asarray(self.repeats, dtype=np.float64)
        return reps * self.tile

    @property
    def n(self) -> int:
        base = self.p.size if self.repeats is None else int(np.sum(self.repeats))
        return base * self.tile

    def _expand(self, v: np.ndarray) -> np.ndarray:
        if self.repeats is not None:
            v = np.repeat(v, self.repeats)
        return np.tile(v, self.tile) if self.tile != 1 else np.array(v)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        return self._expand(self.p), self._expand(self.p2)

    def dense_observable(self) -> np.ndarray | None:
        c = self.observable
        return None if c is None else self._expand(c)

    def distributions(self):
        """Both members as validated distribution objects (materializes dense vectors)."""
        a, b = self.dense()
        return make_distribution(a, self.kind, self.functional.q), make_distribution(b, self.kind, self.functional.q)

    def constraint_residuals(self) -> tuple[float, float]:
        """``|sum p - 1|`` (complete) or ``|sum p**q - 1|`` (incomplete) for both members."""
        w = self.weights
        out = []
        for v in (self.p, self.p2):
            terms = v if self.kind == COMPLETE else np.power(v, self.functional.q)
            if w is not None:
                terms = terms * w
            out.append(abs(float(np.sum(terms)) - 1.0))
        return out[0], out[1]

    def recompute(self) -> tuple[float, float]:
        """Distance and ratio evaluated afresh from the stored vectors."""
        w = self.weights
        d = alpha_distance(self.p, self.p2, self.alpha, weights=w)
        f = self.functional
        a = evaluate_rows(f, self.p, weights=w)
        b = evaluate_rows(f, self.p2, weights=w)
        return float(d), abs(a - b) / max_value(f, self.n)

    def summary(self) -> dict[str, Any]:
        return {
            "functional": self.functional.to_dict(),
            "q": self.functional.q,
            "kappa": self.functional.kappa,
            "alpha": self.alpha,
            "N": self.n,
            "distance": self.achieved_distance,
            "ratio": self.ratio,
            **self.meta,
        }


@dataclass(frozen=True, eq=False)
class ProbeResult:
    best: WitnessPair
    trials: int
    strategy: str
    seed: int
    delta: float
    candidates: int = 0

    @property
    def ratio(self) -> float:
        return self.best.ratio

    def summary(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy,
            "trials": self.trials,
            "seed": self.seed,
            "delta": self.delta,
            "candidates": self.candidates,
            **self.best.summary(),
        }


# --- explicit witnesses ------------------------------------------------------


def theorem12c_witness(q: float, delta: float, alpha: float = 1.0) -> WitnessPair:
    """Alternating-support pair showing the q-expectation is unstable for ``q < alpha <= 1``.

    With ``W`` the smallest integer such that ``2 W**(1 - alpha/q) < delta**alpha``
    (for alpha = 1: ``W = floor((2/delta)**(q/(1-q))) + 1``) and ``N = 2W``:
    ``p`` puts ``W**(-1/q)`` on odd positions (1-based), ``p2`` on even ones and
    the observable is 1 on odd positions, 0 on even ones. Then both members
    satisfy ``sum p**q = 1``, ``d_alpha(p, p2) = (2 W**(1-alpha/q))**(1/alpha) < delta``
    and the expectations are exactly 1 and 0. Normalized by the supremum
    ``max |C_i| = 1`` the deviation ratio is 1.

    ``meta["ratio_mass_normalized"]`` records ``W**(1/q - 1)``, the ratio obtained
    when dividing by the total mass ``sum p_i = W**(1 - 1/q)`` of ``p`` instead.
    The vectors are stored as one period, tiled ``W`` times.
    """
    q = check_q(q)
    if not q < 1:
        raise ParameterError(f"the construction needs 0 < q < 1, got q={q}")
    alpha = check_alpha(alpha)
    if not q < alpha <= 1:
        raise ParameterError(f"the construction needs q < alpha <= 1, got alpha={alpha}")
    delta = float(delta)
    if not math.isfinite(delta) or delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta!r}")

    budget = delta**alpha
    w = math.floor((2.0 / budget) ** (q / (alpha - q))) + 1
    while 2.0 * w ** (1.0 - alpha / q) >= budget:  # guard against rounding in the power
        w += 1
    a = float(w) ** (-1.0 / q)
    f = Functional.incomplete_expectation(q, (1.0, 0.0))
    p = np.array([a, 0.0])
    p2 = np.array([0.0, a])
    weights = np.array([w, w], dtype=np.float64)
    dist = alpha_distance(p, p2, alpha, weights=weights)
    ratio = abs(evaluate_rows(f, p, weights=weights) - evaluate_rows(f, p2, weights=weights)) / 1.0
    return WitnessPair(
        f, alpha, p, p2, float(dist), float(ratio), repeats=None, tile=w,
        meta={
            "construction": "alternating",
            "W": w,
            "delta": delta,
            "epsilon": 0.5,
            "distance_closed_form": (2.0 * w ** (1.0 - alpha / q)) ** (1.0 / alpha),
            "ratio_mass_normalized": w ** (1.0 / q - 1.0),
        },
    )


def renyi_instability_witness(q: float, delta: float, n: int) -> WitnessPair:
    """Pair at L1 distance ``delta`` with a large normalized Renyi deviation.

    * ``q < 1``: ``p = e_1``; ``p2`` moves mass ``delta/2`` from the first
      coordinate evenly onto the other ``N - 1``.
    * ``q > 1``: ``p`` uniform; ``p2`` moves mass ``delta/2`` evenly from the
      other coordinates onto the first.

    The ratio ``|R_q(p) - R_q(p2)| / ln N`` grows with N at fixed delta.
    Stored as two blocks of sizes 1 and N - 1.
    """
    q = check_q(q)
    n = check_n(n)
    if n < 3:
        raise ParameterError("needs N >= 3")
    delta = float(delta)
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta!r}")
    h = delta / 2.0
    if q < 1:
        p = np.array([1.0, 0.0])
        p2 = np.array([1.0 - h, h / (n - 1)])
    else:
        p = np.array([1.0 / n, 1.0 / n])
        p2 = np.array([1.0 / n + h, 1.0 / n - h / (n - 1)])
    repeats = np.array([1, n - 1])
    f = Functional.renyi(q)
    w = repeats.astype(np.float64)
    dist = alpha_distance(p, p2, 1.0, weights=w)
    ratio = abs(evaluate_rows(f, p, weights=w) - evaluate_rows(f, p2, weights=w)) / math.log(n)
    return WitnessPair(f, 1.0, p, p2, float(dist), float(ratio), repeats=repeats,
                       meta={"construction": "renyi-spread" if q < 1 else "renyi-concentrate", "delta": delta})


def stability_ratio(f: Functional, p, p2) -> float:
    """``|f(p) - f(p2)| / max |f|`` at the common dimension."""
    a, b = evaluate(f, p), evaluate(f, p2)
    n1, n2 = np.size(getattr(p, "p", p)), np.size(getattr(p2, "p", p2))
    if n1 != n2:
        raise ShapeError(f"dimension mismatch: {n1} vs {n2}")
    norm = max_value(f, n1)
    if norm == 0:
        raise DomainError(f"{f.label()} has maximum 0 at N={n1}")
    return abs(a - b) / norm


# --- base points -------------------------------------------------------------

BASE_UNIFORMS = 4  # extra scalars per row beyond 2N


def base_from_uniforms(R: np.ndarray, n: int, kind: str, q: float | None) -> np.ndarray:
    """Starting distributions from raw uniforms ``R`` of shape ``(m, 2n + 4)``.

    Mixture: 40% dense uniform samples, 20% sparse supports, 15% points near a
    vertex, 10% vertices, 15% the (incomplete) uniform distribution.
    """
    m = R.shape[0]
    W = -np.log1p(-R[:, :n])
    keep_u = R[:, n : 2 * n]
    choice = np.minimum((R[:, 2 * n] * 20).astype(np.int64), 19)
    frac = R[:, 2 * n + 1]
    idx = np.minimum((R[:, 2 * n + 2] * n).astype(np.int64), n - 1)
    spread = 10.0 ** (-8.0 + 7.0 * R[:, 2 * n + 3])
    rows = np.arange(m)
    sparse = (choice >= 8) & (choice < 12)
    keep = keep_u < frac[:, None]
    keep[rows, idx] = True
    W = np.where(sparse[:, None] & ~keep, 0.0, W)
    W /= np.sum(W, axis=-1, keepdims=True)
    corner = np.zeros((m, n))
    corner[rows, idx] = 1.0
    near = ((choice >= 12) & (choice < 15))[:, None]
    W = np.where(near, (1.0 - spread[:, None]) * corner + spread[:, None] * W, W)
    W = np.where(((choice >= 15) & (choice < 17))[:, None], corner, W)
    W = np.where((choice >= 17)[:, None], 1.0 / n, W)
    return _from_chart(W, kind, q)


def base_rows(m: int, n: int, kind: str, q: float | None, rng: np.random.Generator) -> np.ndarray:
    """``m`` starting distributions (see :func:`base_from_uniforms`)."""
    return base_from_uniforms(rng.random((m, 2 * n + BASE_UNIFORMS)), n, kind, q)


def _from_chart(W: np.ndarray, kind: str, q: float | None) -> np.ndarray:
    return W if kind == COMPLETE else np.minimum(np.power(W, 1.0 / q), 1.0)


def mass_transfer_targets(W: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Chart targets that move mass between one coordinate and many.

    ``R`` holds four uniforms per row selecting the move, the hub coordinate
    (usually the largest) and the number k of small coordinates involved:

    0. concentrate everything on the hub
    1. pull the k smallest coordinates onto the hub
    2. spread the hub evenly over all other coordinates
    3. spread the hub evenly over the k smallest coordinates
    4. flatten to uniform
    """
    m, n = W.shape
    if n == 1:
        return W.copy()
    rows = np.arange(m)
    move = np.minimum((R[:, 0] * 5).astype(np.int64), 4)
    largest = np.argmax(W, axis=1)
    hub = np.where(R[:, 1] < 0.7, largest, np.minimum((R[:, 2] * n).astype(np.int64), n - 1))
    k = 1 + np.minimum((R[:, 3] * (n - 1)).astype(np.int64), n - 2)
    masked = W.copy()
    masked[rows, hub] = np.inf
    rank = np.empty((m, n), dtype=np.int64)
    rank[rows[:, None], np.argsort(masked, axis=1, kind="stable")] = np.arange(n)
    small = rank < k[:, None]
    is_hub = np.zeros((m, n), dtype=bool)
    is_hub[rows, hub] = True
    hub_mass = W[rows, hub][:, None]

    U = np.where(is_hub, 1.0, 0.0)  # move 0
    pulled = np.where(small, 0.0, W) + np.where(is_hub, np.sum(np.where(small, W, 0.0), axis=1)[:, None], 0.0)
    spread_all = np.where(is_hub, 0.0, W + hub_mass / (n - 1))
    spread_small = np.where(is_hub, 0.0, W + np.where(small, hub_mass / k[:, None], 0.0))
    U = np.where((move == 1)[:, None], pulled, U)
    U = np.where((move == 2)[:, None], spread_all, U)
    U = np.where((move == 3)[:, None], spread_small, U)
    U = np.where((move == 4)[:, None], 1.0 / n, U)
    return U / np.sum(U, axis=1, keepdims=True)


# --- ray scanning ------------------------------------------------------------


@dataclass
class _Best:
    ratio: float = -1.0
    p: np.ndarray | None = None
    p2: np.ndarray | None = None
    distance: float = 0.0
    info: dict[str, Any] = field(default_factory=dict)
    candidates: int = 0

    def offer(self, ratio, p, p2, distance, info):
        if ratio > self.ratio:
            self.ratio, self.p, self.p2, self.distance, self.info = float(ratio), p, p2, float(distance), info


def _scan_rays(f: Functional, P, U, T, alpha, delta, norm, best: _Best, tag: str, index_offset: int = 0):
    """Evaluate rays from rows of ``P`` toward chart targets ``U`` at steps ``T[row, j]``.

    Candidates with distance >= delta are discarded. Ties resolve to the lower
    row, then the lower ladder position.
    """
    kind, q = f.domain, f.q
    m = P.shape[0]
    W = to_chart(P, kind, q)
    F0 = evaluate_rows(f, P)
    row_best = np.full(m, -1.0)
    row_col = np.zeros(m, dtype=np.int64)
    row_dist = np.zeros(m)
    for j in range(T.shape[1]):
        P2 = ray_points(P, W, U, T[:, j], kind, q)
        d = alpha_distance(P, P2, alpha)
        ok = np.flatnonzero(d < delta)
        if ok.size == 0:
            continue
        best.candidates += int(ok.size)
        r = np.abs(evaluate_rows(f, P2[ok]) - F0[ok]) / norm
        better = r > row_best[ok]
        rows = ok[better]
        row_best[rows] = r[better]
        row_col[rows] = j
        row_dist[rows] = d[rows]
    i = int(np.argmax(row_best))
    if row_best[i] < 0:
        return
    if row_best[i] > best.ratio:
        t = T[i, row_col[i]]
        p2 = ray_points(P[i : i + 1], W[i : i + 1], U[i : i + 1], np.array([t]), kind, q)[0]
        best.offer(row_best[i], P[i].copy(), p2, row_dist[i],
                   {"source": tag, "trial": index_offset + i, "step": float(t)})


def _trial_block(n: int) -> int:
    return max(1, _BLOCK // n)


def _random_rays(f: Functional, n: int, trials: int, seed: int, stream: int):
    """Yield blocks ``(offset, P, U, T)``; trial k draws all its randomness from ``(seed, stream, k)``."""
    kind, q = f.domain, f.q
    nb = 2 * n + BASE_UNIFORMS
    nt = 2 * n + 3 if stream == _RANDOM_STREAM else 4
    ladder = 2.0 ** -np.arange(_LADDER_DEPTH + 1, dtype=np.float64)
    block = _trial_block(n)
    for start in range(0, trials, block):
        stop = min(trials, start + block)
        R = np.stack([make_rng(seed, stream, k).random(nb + nt + 1) for k in range(start, stop)])
        P = base_from_uniforms(R[:, :nb], n, kind, q)
        if stream == _RANDOM_STREAM:
            U = chart_targets_from_uniforms(R[:, nb : nb + nt], n)
        else:
            U = mass_transfer_targets(to_chart(P, kind, q), R[:, nb : nb + nt])
        phi = 2.0 ** -R[:, -1]
        yield start, P, U, phi[:, None] * ladder[None, :]


def _structured(f: Functional, n: int, alpha: float, delta: float, norm: float, best: _Best):
    """Deterministic witness families on a fine step ladder."""
    kind, q = f.domain, f.q
    uniform_w = np.full(n, 1.0 / n)
    e1 = np.zeros(n)
    e1[0] = 1.0
    rays = [(e1, uniform_w)]  # start at a vertex, spread out
    if n > 1:
        rest = np.zeros(n)
        rest[1:] = 1.0 / (n - 1)
        e2 = np.zeros(n)
        e2[1] = 1.0
        half = np.zeros(n)
        half[: max(1, n // 2)] = 1.0 / max(1, n // 2)
        rays = [(e1, rest), (uniform_w, e1), (e1, e2), (uniform_w, half), (half, uniform_w)]
    if f.variant == INCOMPLETE_EXPECTATION:
        c = f.observable_array()
        rays.append((_vertex(n, int(np.argmax(c))), _vertex(n, int(np.argmin(c)))))
    P = np.array([_from_chart(b, kind, q) for b, _ in rays])
    U = np.array([u for _, u in rays])
    T = np.broadcast_to(_FINE_LADDER, (len(rays), _FINE_LADDER.size))
    _scan_rays(f, P, U, T, alpha, delta, norm, best, "structured")
    if f.variant == INCOMPLETE_EXPECTATION and n >= 2:
        _block_pairs(f, n, alpha, delta, norm, best)


def _vertex(n, j):
    v = np.zeros(n)
    v[j] = 1.0
    return v


def _block_sizes(half: int) -> np.ndarray:
    if half <= 2048:
        return np.arange(1, half + 1)
    sizes = np.unique(np.round(1.02 ** np.arange(0, int(math.log(half, 1.02)) + 1)).astype(np.int64))
    return sizes[(sizes >= 1) & (sizes <= half)]


def _block_pairs(f: Functional, n: int, alpha: float, delta: float, norm: float, best: _Best):
    """``p`` uniform on the w largest observable entries, ``p2`` on the w smallest (disjoint)."""
    q = f.q
    c = f.observable_array()
    order = np.argsort(-c, kind="stable")
    for w in _block_sizes(n // 2):
        a = float(w) ** (-1.0 / q)
        dist = (2.0 * w * a**alpha) ** (1.0 / alpha)
        if not dist < delta:
            continue
        best.candidates += 1
        ratio = abs(float(np.mean(c[order[:w]])) - float(np.mean(c[order[n - w:]]))) / norm
        if ratio > best.ratio:
            p = np.zeros(n)
            p[order[:w]] = a
            p2 = np.zeros(n)
            p2[order[n - w:]] = a
            d = alpha_distance(p, p2, alpha)
            r = abs(evaluate_rows(f, p) - evaluate_rows(f, p2)) / norm
            if d < delta:
                best.offer(r, p, p2, d, {"source": "structured", "block": int(w)})


def probe(f: Functional, alpha: float, delta: float, n: int, strategy: str = "all", trials: int = 1000,
          seed: int = 0) -> ProbeResult:
    """Search for a pair with ``d_alpha < delta`` and large normalized deviation at dimension ``n``.

    Strategies:

    ``random``
        random base points moved along random chart rays (dense, vertex and
        sparse targets), like :func:`lesche.simplex.perturb_within`.
    ``greedy``
        mass-transfer rays: concentrate many coordinates onto one, or spread
        one coordinate over many.
    ``structured``
        deterministic witness families (vertex-to-spread, uniform-to-vertex,
        and for the q-expectation disjoint blocks sorted by the observable).
    ``all``
        all of the above, in that order.

    Each trial draws its randomness from ``(seed, trial index)``, so the result
    does not depend on batching and the best ratio can only grow with
    ``trials``. The returned ratio is a lower bound on the true supremum.
    """
    alpha = check_alpha(alpha)
    n = check_n(n)
    seed = check_seed(seed)
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise ParameterError(f"trials must be a positive integer, got {trials!r}")
    trials = int(trials)
    delta = float(delta)
    if not math.isfinite(delta) or delta < 0:
        raise ParameterError(f"delta must be a finite nonnegative real, got {delta!r}")
    if f.variant == INCOMPLETE_EXPECTATION and len(f.observable) != n:
        raise ShapeError(f"observable has {len(f.observable)} entries, N={n}")
    norm = max_value(f, n)
    if norm == 0:
        raise DomainError(f"{f.label()} has maximum 0 at N={n}")

    best = _Best()
    if delta > 0:
        if strategy in ("random", "all"):
            for off, P, U, T in _random_rays(f, n, trials, seed, _RANDOM_STREAM):
                _scan_rays(f, P, U, T, alpha, delta, norm, best, "random", off)
        if strategy in ("greedy", "all"):
            for off, P, U, T in _random_rays(f, n, trials, seed, _GREEDY_STREAM):
                _scan_rays(f, P, U, T, alpha, delta, norm, best, "greedy", off)
        if strategy in ("structured", "all"):
            _structured(f, n, alpha, delta, norm, best)
    if best.p is None or best.ratio <= 0:
        # nothing inside the budget beat the trivial pair
        base = _from_chart(np.full(n, 1.0 / n), f.domain, f.q)
        best = _Best(0.0, base, base.copy(), 0.0, {"source": "trivial"}, best.candidates)
    witness = WitnessPair(f, alpha, best.p, best.p2, best.distance, best.ratio,
                          meta={"delta": delta, **best.info})
    return ProbeResult(witness, trials, strategy, seed, delta, best.candidates)


# --- sampling-based soundness checks -----------------------------------------


@dataclass(frozen=True, eq=False)
class SampleResult:
    best: WitnessPair
    pairs: int
    max_ratio: float
    max_distance: float


def sample_within(f: Functional, alpha: float, delta: float, n: int, pairs: int = 10_000,
                  seed: int = 0) -> SampleResult:
    """Draw ``pairs`` random pairs with ``d_alpha < delta`` via :func:`perturb_rows` and keep the worst."""
    alpha = check_alpha(alpha)
    n = check_n(n)
    if f.variant == INCOMPLETE_EXPECTATION and len(f.observable) != n:
        raise ShapeError(f"observable has {len(f.observable)} entries, N={n}")
    kind, q = f.domain, f.q
    norm = max_value(f, n)
    if norm == 0:
        raise DomainError(f"{f.label()} has maximum 0 at N={n}")
    rng = make_rng(seed, _SAMPLE_STREAM, n)
    block = max(1, _BLOCK // n)
    best = _Best()
    max_d = 0.0
    for start in range(0, pairs, block):
        m = min(block, pairs - start)
        P = base_rows(m, n, kind, q, rng)
        P2 = perturb_rows(P, kind, q, delta, alpha, rng)
        d = alpha_distance(P, P2, alpha)
        r = np.abs(evaluate_rows(f, P) - evaluate_rows(f, P2)) / norm
        max_d = max(max_d, float(np.max(d)))
        i = int(np.argmax(r))
        best.offer(r[i], P[i].copy(), P2[i].copy(), d[i], {"source": "sample", "trial": start + i})
    witness = WitnessPair(f, alpha, best.p, best.p2, best.distance, best.ratio, meta={"delta": delta, **best.info})
    return SampleResult(witness, pairs, best.ratio, max_d)


# --- certificate verification ------------------------------------------------


@dataclass(frozen=True, eq=False)
class Verification:
    certificate: StabilityCertificate
    passed: bool
    ratios: dict[int, float]
    violation: WitnessPair | None = None


def _check_family(cert: StabilityCertificate, f: Functional):
    if cert.family != f.variant:
        raise ParameterError(f"certificate is for {cert.family}, functional is {f.variant}")
    if cert.param is not None and not math.isclose(cert.param, f.param, rel_tol=1e-12):
        raise ParameterError(f"certificate parameter {cert.param} does not match {f.param}")


def verify_certificate(cert: StabilityCertificate, f: Functional, n_list: Iterable[int], trials: int = 1000,
                       seed: int = 0, strategy: str = "all") -> Verification:
    """Probe with budget ``cert.delta`` at every N; fail on the first ratio >= epsilon.

    A q-expectation whose observable does not match N gets a seeded random
    observable of the right length (:meth:`Functional.for_dimension`).
    """
    _check_family(cert, f)
    ratios: dict[int, float] = {}
    for n in n_list:
        n = check_n(n)
        if n < cert.n_min:
            raise ParameterError(f"certificate covers N >= {cert.n_min}, got N={n}")
        g = f.for_dimension(n, seed)
        res = probe(g, cert.alpha, cert.delta, n, strategy, trials, seed)
        ratios[n] = res.ratio
        if not res.ratio < cert.epsilon:
            return Verification(cert, False, ratios, res.best)
    return Verification(cert, True, ratios)


def verify_by_sampling(cert: StabilityCertificate, f: Functional, n: int, pairs: int = 10_000,
                       seed: int = 0) -> SampleResult:
    """:func:`sample_within` at the certificate's budget (no ``n_min`` check)."""
    _check_family(cert, f)
    return sample_within(f.for_dimension(n, seed), cert.alpha, cert.delta, n, pairs, seed)


def witness_sidecar(w: WitnessPair) -> str:
    return json.dumps(w.summary(), sort_keys=True)
