from fractions import Fraction
from math import factorial

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropic_turan.errors import InvalidParameters
from entropic_turan.hypergraph import (Hypergraph, make_complete, make_complete_bipartite, make_cycle, make_star,
                                       random_hypergraph)
from entropic_turan.lagrangian import (EXACT_CERTIFICATE, EdgePolynomial, adjacency_spectral_radius,
                                       blowup_density, closed_form_complete, kkt_residual, max_clique, p_spectral)


def test_closed_form():
    assert closed_form_complete(4, 3) == Fraction(3, 8)
    assert closed_form_complete(3, 3) == Fraction(2, 9)
    assert closed_form_complete(5, 2) == Fraction(4, 5)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_single_edge(k):
    res = blowup_density(Hypergraph(k, k, [tuple(range(k))]))
    assert res.value == pytest.approx(factorial(k) / k ** k, abs=1e-10)
    assert np.allclose(res.weights, 1 / k, atol=1e-6)


def test_graphs_take_the_exact_clique_path():
    res = blowup_density(make_cycle(5))
    assert res.certificate == EXACT_CERTIFICATE
    assert res.exact_value == Fraction(1, 2)
    assert res.value == 0.5


def test_numeric_path_matches_motzkin_straus():
    rng = np.random.default_rng(11)
    for _ in range(15):
        G = random_hypergraph(2, int(rng.integers(3, 9)), 0.5, rng)
        exact = blowup_density(G).value
        numeric = blowup_density(G, exact=False).value
        assert numeric == pytest.approx(exact, abs=1e-8)


def test_max_clique_against_networkx():
    rng = np.random.default_rng(2)
    for _ in range(10):
        G = random_hypergraph(2, 9, 0.5, rng)
        H = nx.Graph(list(G.edges))
        H.add_nodes_from(range(9))
        assert len(max_clique(G)) == max(len(c) for c in nx.find_cliques(H))


def test_p2_is_the_adjacency_eigenvalue():
    for G in (make_cycle(5), make_star(4), make_complete_bipartite(2, 3), make_complete(5, 2)):
        lam = np.linalg.eigvalsh(G.adjacency_matrix()).max()
        assert p_spectral(G, 2).value == pytest.approx(lam, abs=1e-9)
        assert adjacency_spectral_radius(G) == pytest.approx(lam, abs=1e-9)


def test_pk_for_complete_hypergraph():
    # at p = k the uniform vector is optimal on K_r^(k): (r-1)...(r-k+1)
    G = make_complete(5, 3)
    assert p_spectral(G, 3).value == pytest.approx(4 * 3, rel=1e-9)


def test_kkt_residual_small_at_optimum():
    G = Hypergraph(3, 5, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])
    for p in (1, 2, 3):
        res = p_spectral(G, p)
        assert res.kkt_residual < 1e-7
        assert kkt_residual(G, res.weights, p) == pytest.approx(res.kkt_residual)


def test_seed_determinism():
    G = random_hypergraph(3, 6, 0.5, np.random.default_rng(1))
    a = p_spectral(G, 1.5, seed=7)
    b = p_spectral(G, 1.5, seed=7)
    assert a.value == b.value and np.array_equal(a.weights, b.weights)


def test_rejects_nonpositive_p():
    with pytest.raises(InvalidParameters):
        p_spectral(make_cycle(4), 0)
    # below p = 1 spreading out stops paying: one edge (2 * 2^(-2/p)) beats the whole triangle
    assert p_spectral(make_complete(3, 2), 0.5).value == pytest.approx(2 * 2 ** -4, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1.0, 2.0, 3.0]))
def test_polynomial_value_never_exceeds_optimum(seed, p):
    rng = np.random.default_rng(seed)
    G = random_hypergraph(3, 6, 0.5, rng)
    best = p_spectral(G, p, starts=8).value
    x = rng.random(G.n)
    x /= np.sum(x ** p) ** (1 / p)
    assert EdgePolynomial(G).value(x[None, :])[0] <= best + 1e-9
