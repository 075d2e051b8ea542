import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dagmatrix import IndexPartition, Query, build_parent_graph
from dagmatrix.enumeration import random_parent_graph
from dagmatrix.gaussian import moments, sample_system
from dagmatrix.induced import (
    ConsistencyError,
    a_line_ancestors,
    concentration_graph_via_moral,
    concentration_graph_without_M,
    covariance_graph_given_C,
    induced_components,
    moral_graph,
    numeric_B,
    numeric_induced_blocks,
    partial_ancestor_graph,
)
from dagmatrix.operators import inv_set
from dagmatrix.graph import reorder

from conftest import parent_graphs
import oracles


def subsets(d):
    return st.sets(st.integers(1, d))


@settings(max_examples=80)
@given(parent_graphs(max_d=7), st.data())
def test_partial_ancestor_graph_matches_path_walk(G, data):
    a = data.draw(subsets(G.d))
    pag = partial_ancestor_graph(G, a)
    assert pag.labeled() == a_line_ancestors(G, a)
    ref = oracles.a_line_parents(oracles.parent_sets(G.d, G.arrows()), set(a))
    for i in G.nodes:
        assert set(pag.parents(i)) == ref[i]


def test_partial_ancestor_graph_of_chain(chain):
    pag = partial_ancestor_graph(chain, {2, 3})
    # every node is reached from 4 along 2,3-line paths
    assert pag.parents(1) == [2, 3, 4]
    assert pag.children(4) == [1, 2, 3]
    assert not pag.has_arrow(1, 1)


def test_numeric_B_is_inv_a(rng):
    for _ in range(20):
        G = random_parent_graph(int(rng.integers(2, 8)), rng)
        s = sample_system(G, rng)
        a = [v for v in G.nodes if rng.random() < 0.5]
        p = IndexPartition.split(G.d, a)
        np.testing.assert_allclose(numeric_B(s.A, p), inv_set(reorder(s.A, p), p.a_indices), atol=1e-12)


def test_numeric_blocks_match_partial_inversion(rng):
    for _ in range(30):
        G = random_parent_graph(int(rng.integers(1, 8)), rng)
        s = sample_system(G, rng)
        a = [v for v in G.nodes if rng.random() < 0.5]
        p = IndexPartition.split(G.d, a)
        blocks = numeric_induced_blocks(s, p)
        direct = inv_set(reorder(moments(s).Conc, p), p.a_indices)
        np.testing.assert_allclose(blocks.assembled(), direct, atol=1e-9)
        # Sigma_aa|b is the conditional covariance, Sigma^bb.a the marginal concentration
        m = moments(s)
        idx_a = [v - 1 for v in p.a]
        idx_b = [v - 1 for v in p.b]
        if p.a and p.b:
            S = m.Sigma
            cond = S[np.ix_(idx_a, idx_a)] - S[np.ix_(idx_a, idx_b)] @ np.linalg.solve(
                S[np.ix_(idx_b, idx_b)], S[np.ix_(idx_b, idx_a)]
            )
            np.testing.assert_allclose(blocks.Sigma_aa_given_b, cond, atol=1e-9)
            np.testing.assert_allclose(
                blocks.Sigma_bb_dot_a, np.linalg.inv(S[np.ix_(idx_b, idx_b)]), atol=1e-9
            )


def test_numeric_blocks_detect_corruption(chain, rng, monkeypatch):
    import dagmatrix.induced as induced

    s = sample_system(chain, rng)
    p = IndexPartition.split(4, {1, 3})
    orig = induced.inv_set
    monkeypatch.setattr(induced, "inv_set", lambda M, a: orig(M, a) + 1e-6)
    with pytest.raises(ConsistencyError):
        numeric_induced_blocks(s, p)
    numeric_induced_blocks(s, p, verify=False)


@settings(max_examples=40, deadline=None)
@given(parent_graphs(min_d=2, max_d=6), st.data())
def test_structural_zeros_are_numeric_zeros(G, data):
    a = data.draw(subsets(G.d))
    p = IndexPartition.split(G.d, a)
    E = induced_components(G, p)
    seed = data.draw(st.integers(0, 2**32 - 1))
    num = numeric_induced_blocks(sample_system(G, seed), p)
    for pattern, values in (
        (E.S_aa_given_b, num.Sigma_aa_given_b),
        (E.P_a_given_b, num.Pi_a_given_b),
        (E.S_bb_dot_a, num.Sigma_bb_dot_a),
    ):
        zeros = pattern.matrix.to_array() == 0
        assert np.all(np.abs(values[zeros]) < 1e-8)


def test_induced_blocks_of_chain(chain):
    p = IndexPartition.split(4, {1, 4})
    E = induced_components(chain, p)
    # regression of 1 on (2, 3) uses only 2; regression of 4 on (2, 3) uses only 3
    assert E.P_a_given_b.edges() == [(1, 2), (4, 3)]
    assert E.S_aa_given_b.is_zero() is False
    assert E.S_aa_given_b[1, 4] == 0
    assert E.S_bb_dot_a[2, 3] == 1


def test_covariance_graph_given_C(chain):
    S = covariance_graph_given_C(chain, {3})
    assert S[1, 4] == 0 and S[1, 2] == 1
    S0 = covariance_graph_given_C(chain, set())
    assert S0[1, 4] == 1


@settings(max_examples=80)
@given(parent_graphs(max_d=7), st.data())
def test_moral_graph_matches_three_step_construction(G, data):
    seed = data.draw(st.sets(st.integers(1, G.d), min_size=1))
    M = moral_graph(G, seed)
    ref = oracles.moral_graph_prose(oracles.parent_sets(G.d, G.arrows()), seed)
    assert set(M.row_labels) == set(ref)
    got = {v: set() for v in M.row_labels}
    for i, j in M.edges():
        got[i].add(j)
    assert got == ref


def test_collider_is_married(collider):
    M = moral_graph(collider, {1})
    assert M[2, 3] == 1
    M = moral_graph(collider, {2, 3})
    assert list(M.row_labels) == [2, 3]
    assert M[2, 3] == 0


@settings(max_examples=80, deadline=None)
@given(parent_graphs(min_d=2, max_d=7), st.data())
def test_concentration_graph_two_routes(G, data):
    i, j = sorted(data.draw(st.lists(st.integers(1, G.d), min_size=2, max_size=2, unique=True)))
    C = data.draw(st.sets(st.integers(1, G.d).filter(lambda v: v not in (i, j))))
    q = Query({i}, {j}, C)
    assert concentration_graph_without_M(G, q) == concentration_graph_via_moral(G, q)


def test_concentration_graph_numeric(rng):
    # zeros of the induced concentration graph are zeros of the marginal concentration matrix
    for _ in range(40):
        d = int(rng.integers(2, 7))
        G = random_parent_graph(d, rng)
        i, j = sorted(rng.choice(np.arange(1, d + 1), size=2, replace=False).tolist())
        C = {v for v in G.nodes if v not in (i, j) and rng.random() < 0.4}
        q = Query({i}, {j}, C)
        S = concentration_graph_without_M(G, q)
        Sigma = moments(sample_system(G, rng)).Sigma
        idx = [v - 1 for v in S.row_labels]
        K = np.linalg.inv(Sigma[np.ix_(idx, idx)])
        zeros = S.matrix.to_array() == 0
        assert np.all(np.abs(K[zeros]) < 1e-8)


@settings(max_examples=80)
@given(parent_graphs(max_d=7), st.data())
def test_order_compatible_coefficients_equal_ancestor_block(G, data):
    k = data.draw(st.integers(0, G.d))
    p = IndexPartition.split(G.d, range(1, k + 1))
    E = induced_components(G, p)
    assert E.P_a_given_b.matrix == E.B.take(range(k), range(k, G.d))
