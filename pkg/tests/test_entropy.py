import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropic_turan.entropy import (EdgeDistribution, FiniteDistribution, cond_entropy, edge_distribution_from_json,
                                    entropic_density, entropy, mixture_bound, product_form_identity,
                                    ratio_sequence, uniform_edge_distribution)
from entropic_turan.errors import InvalidParameters, NoEdges, PreconditionFailure, SymmetryViolation
from entropic_turan.hypergraph import Hypergraph, make_complete, make_cycle, random_hypergraph
from entropic_turan.lagrangian import p_spectral


def test_entropy_of_uniform():
    assert entropy(FiniteDistribution.uniform(range(8))) == pytest.approx(3.0)
    assert entropy(FiniteDistribution({0: 1})) == 0.0


def test_distribution_validation():
    with pytest.raises(InvalidParameters):
        FiniteDistribution({0: Fraction(1, 2)})
    with pytest.raises(InvalidParameters):
        FiniteDistribution({0: -0.5, 1: 1.5})


@settings(max_examples=40)
@given(st.lists(st.integers(1, 20), min_size=8, max_size=8))
def test_chain_rule(ws):
    outcomes = [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]
    tot = sum(ws)
    d = FiniteDistribution({o: Fraction(w, tot) for o, w in zip(outcomes, ws)})
    H = entropy(d)
    parts = entropy(d.marginal([0])) + cond_entropy(d, [0], [1]) + cond_entropy(d, [0, 1], [2])
    assert H == pytest.approx(parts, abs=1e-12)
    assert cond_entropy(d, [0, 1]) <= entropy(d.marginal([2])) + 1e-12


def test_uniform_edge_distribution_on_c5():
    d = uniform_edge_distribution(make_cycle(5))
    assert d.joint_entropy() == pytest.approx(math.log2(10))
    rs = ratio_sequence(d)
    assert rs.vertex_entropy == pytest.approx(math.log2(5))
    assert rs.x[0] == pytest.approx(0.4) and rs.x[1] == pytest.approx(1.0)
    assert rs.product_identity_gap() < 1e-12


def test_no_edges():
    with pytest.raises(NoEdges):
        uniform_edge_distribution(Hypergraph(2, 3, []))


def test_from_oriented_checks_symmetry():
    G = Hypergraph(2, 2, [(0, 1)])
    ok = EdgeDistribution.from_oriented(G, FiniteDistribution({(0, 1): Fraction(1, 2), (1, 0): Fraction(1, 2)}))
    assert ok.q == (1,)
    with pytest.raises(SymmetryViolation):
        EdgeDistribution.from_oriented(G, FiniteDistribution({(0, 1): Fraction(3, 4), (1, 0): Fraction(1, 4)}))
    with pytest.raises(SymmetryViolation):
        ratio_sequence((G, FiniteDistribution({(0, 1): 0.75, (1, 0): 0.25})))


def test_ratio_sequence_of_complete_hypergraph():
    rs = ratio_sequence(uniform_edge_distribution(make_complete(6, 3)))
    assert rs.x == pytest.approx((4 / 6, 5 / 6, 1.0))


def test_distribution_json_round_trip():
    G = make_complete(4, 3)
    d = uniform_edge_distribution(G)
    back = edge_distribution_from_json(G, d.to_dict())
    assert back.q == pytest.approx([float(v) for v in d.q])
    with pytest.raises(InvalidParameters):
        edge_distribution_from_json(G, {"edges": [[0, 1, 5]], "q": [1.0]})


def test_mixture_bound_rejects_overlap_with_witness():
    a = FiniteDistribution.uniform([0, 1])
    b = FiniteDistribution.uniform([1, 2])
    with pytest.raises(PreconditionFailure) as exc:
        mixture_bound([a, b], 1)
    assert exc.value.witness == 1
    assert mixture_bound([a, b], 2).holds


def test_mixture_bound_equality_for_disjoint_uniforms():
    dists = [FiniteDistribution.uniform(range(3 * i, 3 * i + 3)) for i in range(4)]
    res = mixture_bound(dists, 1)
    assert abs(res.slack) < 1e-12 and res.weights == pytest.approx([0.25] * 4)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_mixture_bound_random(seed):
    rng = np.random.default_rng(seed)
    a = int(rng.integers(1, 4))
    m = int(rng.integers(1, 6))
    sets = [set() for _ in range(m)]
    for o in range(10):
        for i in rng.choice(m, size=int(rng.integers(0, min(a, m) + 1)), replace=False):
            sets[int(i)].add(o)
    dists = []
    for i, s in enumerate(sets):
        s = sorted(s) or [100 + i]
        w = rng.dirichlet(np.ones(len(s)))
        dists.append(FiniteDistribution(dict(zip(s, w.tolist()))))
    assert mixture_bound(dists, a).holds


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_entropic_density_matches_polynomial(p):
    rng = np.random.default_rng(int(p))
    for k in (2, 3):
        G = random_hypergraph(k, 6, 0.6, rng)
        ent = entropic_density(G, p)
        assert ent.value == pytest.approx(p_spectral(G, p).value, abs=1e-8)
        assert ent.log2_value == pytest.approx(math.log2(ent.value), abs=1e-12)


def test_entropic_density_reports_a_symmetric_distribution():
    res = entropic_density(make_cycle(5), 1)
    d = res.distribution
    assert sum(d.q) == pytest.approx(1.0)
    dist = d.dist
    for e in d.G.edges:
        probs = {dist.prob(o) for o in permutations(e)}
        assert max(probs) - min(probs) < 1e-15


def test_product_form_identity():
    G = make_complete(4, 3)
    rng = np.random.default_rng(0)
    for p in (1.0, 2.0, 3.0):
        lhs, rhs = product_form_identity(G, rng.random(4) + 0.1, p)
        assert lhs == pytest.approx(rhs, abs=1e-12)
