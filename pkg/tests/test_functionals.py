import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lesche.adversary import base_rows
from lesche.errors import DomainError, ParameterError, ShapeError
from lesche.functionals import (
    INCOMPLETE_EXPECTATION,
    Functional,
    canonical_variant,
    evaluate_rows,
    functional_max,
    incomplete_entropy,
    incomplete_q_expectation,
    kappa_entropy,
    quantum_group_entropy,
    renyi_entropy,
    shannon_entropy,
    tsallis_entropy,
)
from lesche.simplex import COMPLETE, INCOMPLETE, degenerate, make_rng, uniform_complete, uniform_incomplete


def test_tsallis_examples():
    assert tsallis_entropy(degenerate(5), 0.7) == 0
    assert tsallis_entropy((0.5, 0.5), 2) == pytest.approx(0.5, abs=1e-15)
    assert tsallis_entropy(uniform_complete(4), 2) == pytest.approx(0.75, abs=1e-15)
    with pytest.raises(ParameterError):
        tsallis_entropy((0.5, 0.5), 1)


def test_incomplete_examples():
    assert incomplete_entropy(degenerate(4, INCOMPLETE, 2.0), 2) == 0
    assert incomplete_entropy(uniform_incomplete(2, 2), 2) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert incomplete_entropy(uniform_incomplete(2, 0.5), 0.5) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ParameterError):
        incomplete_entropy(uniform_incomplete(2, 2), 3)


def test_renyi_examples():
    assert renyi_entropy(degenerate(3), 0.5) == 0
    assert renyi_entropy(uniform_complete(2), 0.5) == pytest.approx(math.log(2), abs=1e-15)
    # independent evaluation of ln(sum p^q)/(1-q)
    oracle = math.log(math.sqrt(0.25) + math.sqrt(0.75)) / 0.5
    assert renyi_entropy((0.25, 0.75), 0.5) == pytest.approx(oracle, abs=1e-15)
    assert renyi_entropy((0.25, 0.75), 0.5) == pytest.approx(0.62381, abs=1e-5)
    with pytest.raises(ParameterError):
        renyi_entropy((0.5, 0.5), 1)


def test_kappa_and_quantum_group_examples():
    assert kappa_entropy(degenerate(3), 0.4) == 0
    assert kappa_entropy((0.5, 0.5), 0.5) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    for bad in (0, 1, -1, 1.5):
        with pytest.raises(ParameterError):
            kappa_entropy((0.5, 0.5), bad)
    assert quantum_group_entropy(degenerate(3), 2) == 0
    assert quantum_group_entropy((0.5, 0.5), 2) == pytest.approx(-2 * (0.25 - math.sqrt(0.5)) / 1.5, abs=1e-15)
    assert quantum_group_entropy((0.5, 0.5), 2) == pytest.approx(0.60948, abs=1e-5)


def test_expectation_examples():
    rng = np.random.default_rng(0)
    p = uniform_incomplete(5, 0.4)
    assert incomplete_q_expectation(p, 0.4, [2.5] * 5) == pytest.approx(2.5, abs=1e-14)
    assert incomplete_q_expectation(uniform_incomplete(2, 2), 2, (1, 3)) == pytest.approx(2.0, abs=1e-14)
    with pytest.raises(ShapeError):
        incomplete_q_expectation(p, 0.4, rng.random(4))


def test_zero_entries_are_removable():
    p = (0.0, 0.3, 0.7)
    for k in (-0.9, 0.3):
        assert math.isfinite(kappa_entropy(p, k))
    assert math.isfinite(tsallis_entropy(p, 0.3))
    assert math.isfinite(renyi_entropy(p, 0.3))


def test_aliases():
    assert canonical_variant("iqe") == INCOMPLETE_EXPECTATION
    assert Functional("qg", q=2).variant == "quantum_group"
    with pytest.raises(ParameterError):
        Functional("nope", q=2)


def test_functional_json_round_trip():
    for f in (Functional.tsallis(2), Functional.kappa_entropy(-0.3), Functional.incomplete_expectation(0.5, (1, -2))):
        assert Functional.from_json(f.to_json()) == f


def _random_complete(m, n, seed):
    return base_rows(m, n, COMPLETE, None, make_rng(seed))


def test_nonnegativity():
    for n in (2, 3, 7, 30):
        P = _random_complete(25_000, n, n)
        for q in (0.3, 0.5, 2, 5):
            for f in (Functional.tsallis(q), Functional.renyi(q), Functional.quantum_group(q)):
                assert np.min(evaluate_rows(f, P)) >= -1e-12
            Pi = base_rows(25_000, n, INCOMPLETE, q, make_rng(n, int(q * 10)))
            assert np.min(evaluate_rows(Functional.incomplete(q), Pi)) >= -1e-12
        for k in (-0.9, -0.3, 0.3, 0.9):
            assert np.min(evaluate_rows(Functional.kappa_entropy(k), P)) >= -1e-12


def test_maximality_at_uniform():
    for n in (2, 3, 6):
        P = _random_complete(100_000 // 3, n, 100 + n)
        fs = [Functional.tsallis(q) for q in (0.3, 2)] + [Functional.renyi(q) for q in (0.5, 3)]
        fs += [Functional.kappa_entropy(k) for k in (-0.9, 0.3)] + [Functional.quantum_group(q) for q in (0.5, 2)]
        for f in fs:
            top = functional_max(f, n).value
            assert np.max(evaluate_rows(f, P)) <= top + 1e-12
        for q in (0.5, 2):
            Pi = base_rows(10_000, n, INCOMPLETE, q, make_rng(n))
            f = Functional.incomplete(q)
            assert np.max(evaluate_rows(f, Pi)) <= functional_max(f, n).value + 1e-12


def test_decomposition_identities():
    for n in (2, 3, 10, 40):
        P = _random_complete(2_500, n, 200 + n)
        for k in (-0.9, -0.3, 0.3, 0.9):
            lhs = evaluate_rows(Functional.kappa_entropy(k), P)
            rhs = 0.5 * (evaluate_rows(Functional.tsallis(1 + k), P) + evaluate_rows(Functional.tsallis(1 - k), P))
            assert np.max(np.abs(lhs - rhs)) <= 1e-12
        for q in (0.5, 2, 3):
            lhs = evaluate_rows(Functional.quantum_group(q), P)
            rhs = (q * evaluate_rows(Functional.tsallis(q), P) + evaluate_rows(Functional.tsallis(1 / q), P)) / (q + 1)
            assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_q_to_one_continuity():
    rng = np.random.default_rng(9)
    for _ in range(200):
        p = rng.dirichlet(np.ones(rng.integers(2, 20)))
        h = shannon_entropy(p)
        for q in (1 - 1e-6, 1 + 1e-6):
            assert abs(tsallis_entropy(p, q) - h) <= 1e-4
            assert abs(renyi_entropy(p, q) - h) <= 1e-4


def test_expectation_bounds():
    rng = make_rng(11)
    for q in (0.5, 2):
        P = base_rows(50_000, 5, INCOMPLETE, q, rng)
        c = rng.standard_normal(5)
        v = evaluate_rows(Functional.incomplete_expectation(q, c), P)
        assert np.all(v >= c.min() - 1e-12) and np.all(v <= c.max() + 1e-12)


def test_functional_max_examples():
    assert functional_max(Functional.tsallis(2), 4).value == pytest.approx(0.75)
    assert functional_max(Functional.renyi(0.5), 2).value == pytest.approx(0.693147, abs=1e-6)
    assert functional_max(Functional.incomplete(2), 2).value == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert functional_max(Functional.incomplete_expectation(0.3, (1, 0, 1, 0)), 4).value == 1
    assert functional_max(Functional.kappa_entropy(0.5), 3).provenance == "oracle"
    with pytest.raises(DomainError):
        functional_max(Functional.renyi(0.5), 1)
    with pytest.raises(ShapeError):
        functional_max(Functional.incomplete_expectation(0.3, (1, 0)), 4)


def test_incomplete_max_uses_corrected_exponent():
    for q in (0.3, 0.5, 2, 3):
        for n in (2, 3, 4):
            direct = incomplete_entropy(uniform_incomplete(n, q), q)
            assert functional_max(Functional.incomplete(q), n).value == pytest.approx(abs(direct), rel=1e-13)
            assert functional_max(Functional.incomplete(q), n).value == pytest.approx(
                abs(1 - n ** (1 - 1 / q)) / abs(1 - q), rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=10).filter(lambda xs: sum(xs) > 1e-6),
       st.floats(0.05, 5).filter(lambda q: abs(q - 1) > 1e-3))
def test_tsallis_bounded_by_max(raw, q):
    p = np.asarray(raw) / np.sum(raw)
    v = tsallis_entropy(p / np.sum(p), q)
    assert -1e-12 <= v <= functional_max(Functional.tsallis(q), len(raw)).value + 1e-9
