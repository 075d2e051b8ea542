import numpy as np
import pytest

from dagmatrix import Query, build_parent_graph, check_all
from dagmatrix.enumeration import random_parent_graph, singleton_queries
from dagmatrix.gaussian import (
    CoefficientRanges,
    GaussianOracle,
    OracleStatus,
    TriangularSystem,
    cochran_recursion_check,
    coefficient_partition,
    conditional_covariance,
    linear_semigraphoid_checks,
    moments,
    partial_coeffs,
    regression_coeffs,
    sample_system,
    verify_query,
)


def test_chain_with_unit_coefficients(chain):
    # Y1 = Y2 + e1, Y2 = Y3 + e2, ... with unit residual variances
    A = np.eye(4) - np.eye(4, k=1)
    m = moments(TriangularSystem(A, np.ones(4)))
    assert m.Sigma[0, 3] == pytest.approx(1.0)
    assert m.Sigma[0, 0] == pytest.approx(4.0)
    np.testing.assert_allclose(m.Sigma @ m.Conc, np.eye(4), atol=1e-12)
    # cov(Y1, Y2) = var(Y2) = 3
    assert regression_coeffs(m, {1}, {2})[0, 0] == pytest.approx(1.0)
    assert abs(partial_coeffs(m, {1}, {4}, {3})[0, 0]) < 1e-12


def test_system_validation():
    with pytest.raises(ValueError):
        TriangularSystem(np.array([[1.0, 0.0], [0.5, 1.0]]), np.ones(2))
    with pytest.raises(ValueError):
        TriangularSystem(np.eye(2), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        CoefficientRanges(min_coef=0.0)


def test_sample_system_respects_pattern_and_ranges(rng):
    for _ in range(20):
        G = random_parent_graph(int(rng.integers(1, 8)), rng)
        s = sample_system(G, rng)
        assert s.conforms_to(G, min_coef=0.3)
        off = np.abs(s.A[~np.eye(G.d, dtype=bool)])
        assert np.all((off == 0) | ((off >= 0.3) & (off <= 1.0)))
        assert np.all((s.Delta >= 0.5) & (s.Delta <= 2.0))


def test_sample_system_is_deterministic(chain):
    a, b = sample_system(chain, 7), sample_system(chain, 7)
    np.testing.assert_array_equal(a.A, b.A)
    np.testing.assert_array_equal(a.Delta, b.Delta)


def test_conditional_covariance_is_schur_complement(rng):
    G = random_parent_graph(5, rng, density=0.7)
    m = moments(sample_system(G, rng))
    got = conditional_covariance(m, {1, 2}, {1, 2}, {4, 5})
    K = np.linalg.inv(m.Sigma[np.ix_([0, 1, 3, 4], [0, 1, 3, 4])])
    np.testing.assert_allclose(got, np.linalg.inv(K[:2, :2]), atol=1e-10)


def test_partial_coeffs_match_least_squares(rng):
    G = random_parent_graph(6, rng, density=0.6)
    m = moments(sample_system(G, rng))
    # columns of the joint regression of Y_1 on (Y_2..Y_6)
    S = m.Sigma
    full = S[np.ix_([0], range(1, 6))] @ np.linalg.inv(S[1:, 1:])
    pb, pc = coefficient_partition(m, {1}, {2, 3}, {4, 5, 6})
    np.testing.assert_allclose(pb, full[:, :2], atol=1e-10)
    np.testing.assert_allclose(pc, full[:, 2:], atol=1e-10)
    assert partial_coeffs(m, {1}, set()).shape == (1, 0)
    with pytest.raises(ValueError):
        regression_coeffs(m, {1}, {1, 2})


def test_cochran_recursion(rng):
    for _ in range(20):
        G = random_parent_graph(7, rng)
        m = moments(sample_system(G, rng))
        assert cochran_recursion_check(m, {1}, {2, 3}, {4}, {5, 6}) < 1e-9
        assert cochran_recursion_check(m, {7}, {1}, set(), {2}) < 1e-9


def test_oracle_on_chain(chain):
    ok = verify_query(chain, Query({1}, {4}, {3}))
    assert ok.status is OracleStatus.INDEPENDENT and ok.rounds == 1
    assert len(ok.max_abs) == 5 and max(ok.max_abs) < 1e-8
    dep = verify_query(chain, Query({1}, {4}))
    assert dep.status is OracleStatus.DEPENDENT
    assert dep.agrees_with(False) and not dep.agrees_with(True)


def test_oracle_is_reproducible(chain):
    a = GaussianOracle(chain, seed=3).verify(Query({1}, {3}))
    b = GaussianOracle(chain, seed=3).verify(Query({1}, {3}))
    assert a.max_abs == b.max_abs
    with pytest.raises(ValueError):
        GaussianOracle(chain, n_samples=0)


def test_oracle_retries_then_gives_up(chain, monkeypatch):
    import dagmatrix.gaussian as gaussian

    # every coefficient sits between the two thresholds
    monkeypatch.setattr(gaussian, "partial_coeffs", lambda *a, **k: np.array([[1e-7]]))
    res = GaussianOracle(chain, max_rounds=3).verify(Query({1}, {4}))
    assert res.status is OracleStatus.INCONCLUSIVE
    assert res.rounds == 3
    assert not res.agrees_with(True) and not res.agrees_with(False)


def test_oracle_agrees_with_structure(rng):
    for _ in range(10):
        G = random_parent_graph(5, rng)
        oracle = GaussianOracle(G, seed=int(rng.integers(2**31)))
        for q in singleton_queries(G):
            assert oracle.verify(q).agrees_with(check_all(G, q, witness=False).implied)


def test_semigraphoid_properties(rng):
    # on a chain 1 <- 2 <- 3 <- 4 <- 5: 1 _||_ {4,5} | 3 and friends
    G = build_parent_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    m = moments(sample_system(G, rng))
    report = linear_semigraphoid_checks(m, {1}, {4}, {5}, {3})
    assert report.ok
    assert "decomposition" not in report.vacuous
    assert "VIOLATED" not in str(report)
    for _ in range(30):
        G = random_parent_graph(6, rng)
        m = moments(sample_system(G, rng))
        labels = rng.integers(0, 4, size=6)
        sets = [{k + 1 for k in range(6) if labels[k] == p} for p in range(4)]
        if all(sets[:3]):
            assert linear_semigraphoid_checks(m, *sets).ok
    with pytest.raises(ValueError):
        linear_semigraphoid_checks(m, {1}, {1}, {2})
