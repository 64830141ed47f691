import math

import numpy as np
import pytest

from lesche.adversary import (
    probe,
    renyi_instability_witness,
    sample_within,
    stability_ratio,
    theorem12c_witness,
    verify_certificate,
)
from lesche.certificates import StabilityCertificate, certificate_for
from lesche.errors import ParameterError, ShapeError
from lesche.functionals import Functional, random_observable
from lesche.metric import alpha_distance
from lesche.simplex import degenerate, uniform_complete


def _check_witness(w, tol=1e-12):
    a, b = w.constraint_residuals()
    assert a <= tol and b <= tol
    d, r = w.recompute()
    assert d == pytest.approx(w.achieved_distance, rel=tol, abs=tol)
    assert r == pytest.approx(w.ratio, rel=tol, abs=tol)


def test_alternating_witness_examples():
    w = theorem12c_witness(0.5, 0.01)
    assert w.meta["W"] == 201 and w.n == 402
    p, p2 = w.dense()
    assert p[0] == pytest.approx(201.0**-2, rel=1e-15) and p[1] == 0 and p2[1] == p[0]
    assert w.achieved_distance == pytest.approx(2 / 201, abs=1e-12) and w.achieved_distance < 0.01
    assert w.ratio == pytest.approx(1.0, abs=1e-12)
    _check_witness(w)
    w = theorem12c_witness(0.5, 0.5)
    assert w.meta["W"] == 5 and w.n == 10
    assert w.p[0] == pytest.approx(0.04) and w.achieved_distance == pytest.approx(0.4, abs=1e-12)
    assert w.meta["ratio_mass_normalized"] == pytest.approx(5.0)


def test_alternating_witness_grid():
    for q in (0.3, 0.5, 0.7):
        for delta in np.geomspace(1e-4, 0.5, 50):
            w = theorem12c_witness(q, delta)
            assert max(w.constraint_residuals()) <= 1e-12
            assert w.achieved_distance < delta
            assert w.achieved_distance == pytest.approx(w.meta["distance_closed_form"], abs=1e-12)
            assert w.ratio == pytest.approx(1.0, abs=1e-12) and w.ratio > 0.5


def test_alternating_witness_alpha_extension():
    sums = []
    for delta in (0.3, 0.1, 0.03, 0.01):
        w = theorem12c_witness(0.5, delta, alpha=0.75)
        assert w.achieved_distance < delta and w.ratio == pytest.approx(1.0, abs=1e-12)
        _check_witness(w)
        sums.append(w.achieved_distance**0.75)
    assert all(b < a for a, b in zip(sums, sums[1:]))


def test_alternating_witness_errors():
    with pytest.raises(ParameterError):
        theorem12c_witness(1.5, 0.1)
    with pytest.raises(ParameterError):
        theorem12c_witness(0.5, 0.1, alpha=0.4)


def test_renyi_witnesses():
    w = renyi_instability_witness(0.5, 0.1, 10_000)
    assert w.ratio == pytest.approx(0.684, abs=1e-3)
    _check_witness(w)
    assert w.achieved_distance <= 0.1 + 1e-15
    w = renyi_instability_witness(2, 0.2, 10_000)
    assert w.ratio == pytest.approx(0.50, abs=5e-3)
    for q, delta in ((0.5, 0.1), (2, 0.2)):
        ratios = [renyi_instability_witness(q, delta, n).ratio for n in (100, 1000, 10_000)]
        assert ratios[0] < ratios[1] < ratios[2]


def test_stability_ratio_examples():
    f = Functional.tsallis(2)
    assert stability_ratio(f, uniform_complete(2), uniform_complete(2)) == 0
    assert stability_ratio(f, uniform_complete(2), degenerate(2)) == pytest.approx(1.0)


def test_probe_respects_certificate():
    f = Functional.tsallis(2)
    res = probe(f, 1.0, 0.0025, 100, "all", 10_000, seed=0)
    assert res.ratio < 0.01
    assert res.best.achieved_distance < 0.0025
    _check_witness(res.best, tol=1e-9)


def test_probe_finds_renyi_instability():
    res = probe(Functional.renyi(2), 1.0, 0.2, 10_000, "structured", 1, seed=0)
    assert res.ratio >= 0.45


def test_probe_zero_budget():
    for s in ("random", "greedy", "structured", "all"):
        assert probe(Functional.tsallis(0.5), 1.0, 0.0, 5, s, 10).ratio == 0


def test_probe_determinism():
    f = Functional.incomplete(0.5)
    a = probe(f, 0.5, 0.01, 20, "all", 300, seed=4)
    b = probe(f, 0.5, 0.01, 20, "all", 300, seed=4)
    assert a.ratio == b.ratio and np.array_equal(a.best.p2, b.best.p2)


def test_probe_monotone_in_trials_and_delta():
    f = Functional.tsallis(0.5)
    by_trials = [probe(f, 1.0, 0.01, 10, "random", t, seed=2).ratio for t in (10, 100, 1000)]
    assert by_trials == sorted(by_trials)
    by_delta = [probe(f, 1.0, d, 10, "all", 200, seed=2).ratio for d in (1e-4, 1e-3, 1e-2, 1e-1)]
    assert by_delta == sorted(by_delta)


def test_probe_expectation_structured_alternating():
    c = np.tile([1.0, 0.0], 127)
    f = Functional.incomplete_expectation(0.5, c)
    assert probe(f, 0.75, 0.1, c.size, "structured", 1).ratio == pytest.approx(1.0)


def test_probe_shape_error():
    with pytest.raises(ShapeError):
        probe(Functional.incomplete_expectation(2, (1, 2)), 1, 0.1, 3)


def test_verify_certificate_passes():
    f = Functional.tsallis(2)
    v = verify_certificate(certificate_for(f, 1, 0.01), f, (2, 10, 100), trials=2_000)
    assert v.passed and set(v.ratios) == {2, 10, 100}
    g = Functional.incomplete_expectation(2, random_observable(10))
    v = verify_certificate(certificate_for(g, 1, 0.01), g, (2, 10, 100), trials=2_000)
    assert v.passed


def test_verify_certificate_catches_bogus():
    f = Functional.tsallis(2)
    bogus = StabilityCertificate("tsallis", 1.0, 1e-6, 0.5, 2, "hand-built", 2.0)
    v = verify_certificate(bogus, f, (100,), trials=100)
    assert not v.passed and v.violation.ratio >= 1e-6
    assert alpha_distance(*v.violation.dense(), 1.0) < 0.5


def test_verify_certificate_family_and_dimension_checks():
    f = Functional.tsallis(2)
    with pytest.raises(ParameterError):
        verify_certificate(certificate_for(Functional.tsallis(0.5), 1, 0.1), f, (10,))
    r = Functional.renyi(0.5)
    with pytest.raises(ParameterError):
        verify_certificate(certificate_for(r, 0.5, 0.1), r, (2,))


def test_sample_within_budget():
    f = Functional.incomplete(2)
    res = sample_within(f, 0.5, 0.01, 7, pairs=3_000, seed=1)
    assert res.max_distance < 0.01 and res.pairs == 3_000
    _check_witness(res.best, tol=1e-9)
