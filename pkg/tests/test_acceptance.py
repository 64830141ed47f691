"""Acceptance criteria 1-8, one test each; every test records a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize

from lesche.adversary import probe, renyi_instability_witness, theorem12c_witness, verify_by_sampling
from lesche.certificates import LEMMA_VARIANTS, certificate_for, lemma10_bounds, lemma10_check
from lesche.cli import DEFAULT_EPS, DEFAULT_N, DEFAULT_SWEEP, parse_and_dispatch
from lesche.functionals import Functional, evaluate_rows, functional_max, random_observable
from lesche.metric import alpha_distance, quasi_triangle_factor
from lesche.simplex import COMPLETE, make_rng, sample_chart
from lesche.adversary import base_rows

RESULTS: list[str] = []


def record(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


# --- 1 -----------------------------------------------------------------------


def test_criterion_1_alternating_witness():
    t0 = time.perf_counter()
    w = theorem12c_witness(0.5, 0.01)
    weights = w.weights
    f = w.functional
    c_p = evaluate_rows(f, w.p, weights=weights)
    c_p2 = evaluate_rows(f, w.p2, weights=weights)
    elapsed = time.perf_counter() - t0
    checks = [
        w.meta["W"] == 201,
        w.n == 402,
        abs(w.achieved_distance - 2 / 201) <= 1e-12,
        w.achieved_distance < 0.01,
        abs(c_p - 1) <= 1e-12 and c_p2 == 0,
        abs(w.ratio - 1) <= 1e-12 and w.ratio > 0.5,
        elapsed < 1.0,
    ]
    record(1, "alternating q-expectation witness", all(checks),
           f"W={w.meta['W']} N={w.n} d={w.achieved_distance:.12g} C(p)={c_p:.15g} C(p')={c_p2:g} "
           f"ratio={w.ratio:.15g} time={elapsed:.3f}s")


# --- 2 -----------------------------------------------------------------------


def test_criterion_2_certificate_soundness():
    t0 = time.perf_counter()
    worst, cells, violations = 0.0, 0, []
    for name, q, alphas in DEFAULT_SWEEP:
        for alpha in alphas:
            for n in DEFAULT_N:
                f = Functional(name, q=q) if name != "incomplete_expectation" else \
                    Functional.incomplete_expectation(q, random_observable(n, 0))
                cert = certificate_for(f, alpha, DEFAULT_EPS)
                res = verify_by_sampling(cert, f, n, pairs=10_000, seed=0)
                cells += 1
                worst = max(worst, res.max_ratio / DEFAULT_EPS)
                if not (res.max_ratio < DEFAULT_EPS and res.max_distance < cert.delta):
                    violations.append((name, q, alpha, n, res.max_ratio))
    elapsed = time.perf_counter() - t0
    record(2, "certificate soundness", not violations and cells == 70 and elapsed < 600,
           f"{cells} grid points x 10^4 pairs, violations={len(violations)}, "
           f"max ratio/eps={worst:.4f}, time={elapsed:.1f}s")


# --- 3 -----------------------------------------------------------------------

LEMMA_ALPHAS = {"a": (0.25, 0.5, 0.9), "b": (0.25, 0.5, 0.9), "c": (1.5, 2.0, 5.0), "d": (1.5, 2.0, 5.0)}


def test_criterion_3_power_difference_inequalities():
    per = math.ceil(1_000_000 / 12)
    total, worst = 0, -math.inf
    for v in LEMMA_VARIANTS:
        for a in LEMMA_ALPHAS[v]:
            checks, excess = lemma10_check(v, a, per, seed=0)
            total += checks
            worst = max(worst, excess)
    lhs, rhs = lemma10_bounds((1, 0), (0, 1), 0.5, "a")
    tight = abs(lhs - rhs) <= 1e-12
    record(3, "power-difference inequalities", total >= 1_000_000 and worst <= 1e-12 and tight,
           f"{total} checks, max(lhs-rhs)={worst:.3g}, tight case lhs={lhs!r} rhs={rhs!r}")


# --- 4 -----------------------------------------------------------------------


def test_criterion_4_quasi_distance():
    rng = np.random.default_rng(4)
    X, Y, Z = (rng.standard_normal((10_000, 6)) for _ in range(3))
    # half the triples take two equal steps along different axes, where the bound is tight
    m = 5_000
    rows = np.arange(m)
    i = rng.integers(0, 6, m)
    j = (i + rng.integers(1, 6, m)) % 6
    step = rng.exponential(1.0, m) * rng.choice([-1.0, 1.0], m)
    Y[:m] = X[:m]
    Y[rows, i] += step
    Z[:m] = Y[:m]
    Z[rows, j] += step * rng.uniform(0.5, 1.5, m)
    k = quasi_triangle_factor(0.5)
    slack = k * (alpha_distance(X, Y, 0.5) + alpha_distance(Y, Z, 0.5)) - alpha_distance(X, Z, 0.5)
    direct = alpha_distance((0, 0), (1, 1), 0.5)
    legs = alpha_distance((0, 0), (1, 0), 0.5) + alpha_distance((1, 0), (1, 1), 0.5)
    ok = np.min(slack) >= -1e-12 and direct > legs and abs(k * legs - direct) <= 1e-12
    record(4, "quasi-distance", ok,
           f"min slack over 10^4 triples={np.min(slack):.3g}, documented triple {direct:g} > {legs:g}, "
           f"bound {k * legs:g}")


# --- 5 -----------------------------------------------------------------------


def test_criterion_5_decompositions():
    worst = 0.0
    for n in (2, 3, 5, 20, 100):
        P = base_rows(2_000, n, COMPLETE, None, make_rng(5, n))
        ts = {}

        def tsallis(q):
            if q not in ts:
                ts[q] = evaluate_rows(Functional.tsallis(q), P)
            return ts[q]

        for k in (-0.9, -0.3, 0.3, 0.9):
            diff = evaluate_rows(Functional.kappa_entropy(k), P) - 0.5 * (tsallis(1 + k) + tsallis(1 - k))
            worst = max(worst, float(np.max(np.abs(diff))))
        for q in (0.5, 2.0, 3.0):
            diff = evaluate_rows(Functional.quantum_group(q), P) - (q * tsallis(q) + tsallis(1 / q)) / (q + 1)
            worst = max(worst, float(np.max(np.abs(diff))))
    record(5, "decomposition identities", worst <= 1e-12, f"10^4 distributions, max deviation={worst:.3g}")


# --- 6 -----------------------------------------------------------------------


def _renyi_direct(blocks, counts, q):
    return math.log(sum(c * v**q for v, c in zip(blocks, counts) if v > 0)) / (1 - q)


def test_criterion_6_renyi_instability():
    t0 = time.perf_counter()
    found = {}
    for q, delta, floor in ((0.5, 0.1, 0.65), (2.0, 0.2, 0.45)):
        ratios = []
        for n in (100, 1_000, 10_000):
            w = renyi_instability_witness(q, delta, n)
            counts = w.repeats
            oracle = abs(_renyi_direct(w.p, counts, q) - _renyi_direct(w.p2, counts, q)) / math.log(n)
            assert abs(oracle - w.ratio) <= 1e-12
            assert np.sum(np.abs(w.p - w.p2) * counts) <= delta + 1e-15
            ratios.append(oracle)
        searched = probe(Functional.renyi(q), 1.0, delta, 10_000, "structured", 1).ratio
        found[q] = (ratios, searched, floor)
    elapsed = time.perf_counter() - t0
    ok = all(r[2] >= fl and r[0] < r[1] < r[2] for r, _, fl in found.values()) and elapsed < 5
    detail = "; ".join(
        f"q={q}: witness ratios {', '.join(f'{x:.4f}' for x in r)} (need >= {fl}), structured probe {s:.4f}"
        for q, (r, s, fl) in found.items())
    record(6, "Renyi 1-instability evidence", ok, f"{detail}; time={elapsed:.2f}s")


# --- 7 -----------------------------------------------------------------------


def _oracle_value(variant, param, c):
    """Independent transcription of each definition, on chart weights w (rows on the simplex)."""
    def f(W):
        W = np.atleast_2d(W)
        if variant == "incomplete":
            P = np.power(W, 1.0 / param)
            return (1.0 - P.sum(axis=1)) / (param - 1.0)
        if variant == "incomplete_expectation":
            return W @ c
        P = W
        if variant == "tsallis":
            return (1.0 - np.sum(P**param, axis=1)) / (param - 1.0)
        if variant == "renyi":
            return np.log(np.sum(P**param, axis=1)) / (1.0 - param)
        if variant == "kappa":
            return np.sum(P ** (1 - param) - P ** (1 + param), axis=1) / (2 * param)
        return -np.sum(P**param - P ** (1 / param), axis=1) / (param - 1 / param)
    return f


def _brute_max(variant, param, n, c):
    g = _oracle_value(variant, param, c)
    if n == 2:
        x = np.linspace(0.0, 1.0, 2_000_001)
        return float(np.max(np.abs(g(np.column_stack([x, 1 - x])))))
    rng = np.random.default_rng(7)
    W = np.vstack([sample_chart(100_000, n, rng), np.eye(n), np.full((1, n), 1.0 / n)])
    vals = np.abs(g(W))
    best = float(np.max(vals))
    for i in np.argsort(vals)[-5:]:
        res = minimize(lambda w: -abs(g(np.clip(w, 0, 1))[0]), W[i], method="SLSQP",
                       bounds=[(0.0, 1.0)] * n, constraints=[{"type": "eq", "fun": lambda w: np.sum(w) - 1.0}],
                       options={"ftol": 1e-15, "maxiter": 500})
        w = np.clip(res.x, 0, 1)
        w = w / w.sum()
        best = max(best, float(abs(g(w)[0])))
    return best


CASES_7 = [("tsallis", 0.5), ("tsallis", 2.0), ("incomplete", 0.5), ("incomplete", 2.0), ("renyi", 0.5),
           ("renyi", 2.0), ("kappa", 0.3), ("kappa", 0.9), ("quantum_group", 0.5), ("quantum_group", 2.0),
           ("incomplete_expectation", 0.5), ("incomplete_expectation", 2.0)]


def test_criterion_7_maximizers():
    worst, misses = 0.0, []
    for variant, param in CASES_7:
        for n in (2, 3, 4):
            c = np.array([0.7, -1.3, 0.4, 1.1][:n])
            if variant == "kappa":
                f = Functional.kappa_entropy(param)
            elif variant == "incomplete_expectation":
                f = Functional.incomplete_expectation(param, c)
            else:
                f = Functional(variant, q=param)
            claimed = functional_max(f, n).value
            oracle = _brute_max(variant, param, n, c)
            err = abs(claimed - oracle)
            worst = max(worst, err)
            if err > 1e-6:
                misses.append((variant, param, n, claimed, oracle))
    record(7, "maximizer correctness", not misses,
           f"{len(CASES_7)} functionals x N in {{2,3,4}}, max |claimed - oracle|={worst:.3g}, misses={misses}")


# --- 8 -----------------------------------------------------------------------


def test_criterion_8_sweep_determinism(tmp_path):
    args = ["sweep", "--trials", "2000", "--seed", "11"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = [parse_and_dispatch(args + ["--out", str(a)]), parse_and_dispatch(args + ["--out", str(b)])]
    same = a.read_bytes() == b.read_bytes()
    rows = a.read_text().count("\n") - 1
    record(8, "sweep determinism", same and codes == [0, 0] and rows == 70,
           f"two runs of `{' '.join(args)}`: {rows} rows, byte-identical={same}, exit codes={codes}")
