from fractions import Fraction

import numpy as np
import pytest

from entropic_turan.constructions import (binary_entropy, check_tent_freeness, find_G1, g1_iterated_density,
                                          greedy_independent_set, intersection_design, intersection_histogram,
                                          is_k4_minus_free, large_part_tents, pair_degrees)
from entropic_turan.entropy import ratio_sequence, uniform_edge_distribution
from entropic_turan.errors import InvalidParameters, TooLarge
from entropic_turan.homs import find_hom
from entropic_turan.hypergraph import Hypergraph, make_complete, make_tent


@pytest.fixture(scope="module")
def g1():
    return find_G1()


def test_g1_is_the_unique_two_design(g1):
    G = g1.hypergraph
    assert (G.k, G.n, G.num_edges) == (3, 6, 10)
    assert set(pair_degrees(G).values()) == {2}
    assert g1.stats["isomorphism_classes"] == 1
    assert g1.certificate["k4_minus_free"] and g1.verify()


def test_g1_certificate_catches_tampering(g1):
    bad = type(g1)(Hypergraph(3, 6, g1.hypergraph.edges[1:]), g1.certificate, g1.stats)
    assert not bad.verify()


def test_g1_ratio_sequence(g1):
    x = ratio_sequence(uniform_edge_distribution(g1.hypergraph)).x
    # each pair lies in two edges, so the third vertex has 2 choices out of 6
    assert x[0] == pytest.approx(1 / 3, abs=1e-12)


def test_k4_minus():
    assert not is_k4_minus_free(Hypergraph(3, 4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)]))
    assert is_k4_minus_free(Hypergraph(3, 4, [(0, 1, 2), (0, 1, 3)]))


def test_g1_density_series():
    assert g1_iterated_density(1) == Fraction(1, 2)
    assert float(g1_iterated_density(3)) == pytest.approx(0.28972, abs=1e-5)
    p = [g1_iterated_density(m, "power") for m in (1, 2, 3)]
    assert p[0] == Fraction(5, 18)
    for a, b in zip(p, p[1:]):
        assert b == a / 36 + Fraction(10, 36)
    assert float(p[2]) == pytest.approx(0.2857082, abs=1e-7)
    assert float(g1_iterated_density(4)) == pytest.approx(2 / 7, abs=1e-3)


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(binary_entropy(0.89))


def test_greedy_independent_set():
    # 5-cycle: at most 2, greedy finds 2
    adj = np.zeros((5, 5), dtype=bool)
    for i in range(5):
        adj[i, (i + 1) % 5] = adj[(i + 1) % 5, i] = True
    S = greedy_independent_set(adj)
    assert len(S) == 2
    assert not any(adj[a, b] for a in S for b in S)


@pytest.mark.parametrize("k,alpha,lam", [(5, 0.6, (4, 1)), (6, 0.8, (5, 1))])
def test_intersection_design_avoids_large_part_tents(k, alpha, lam):
    res = intersection_design(k, alpha)
    G = res.hypergraph
    assert res.verify()
    assert max(intersection_histogram(G)) <= alpha * k
    assert res.stats["independent_set"] >= res.stats["caro_wei_bound"]
    assert lam in large_part_tents(k, alpha)
    assert all(w is None for w in check_tent_freeness(res, alpha).values())
    assert find_hom(make_tent(lam), make_complete(k + 1, k)) is not None


def test_intersection_design_parameters():
    with pytest.raises(InvalidParameters):
        intersection_design(5, 0.4)
    with pytest.raises(TooLarge):
        intersection_design(12, 0.8)
