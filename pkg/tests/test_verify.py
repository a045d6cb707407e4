import math
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropic_turan.errors import InvalidParameters, PreconditionFailure
from entropic_turan.forests import derive_constraint
from entropic_turan.hypergraph import (Hypergraph, make_complete, make_complete_bipartite, make_cycle, make_path,
                                       make_star, random_hypergraph)
from entropic_turan.verify import (appendix_diagnostics, appendix_r_star, appendix_s_star, aux_ineq_72, aux_ineq_76,
                                   aux_ineq_85, check_entropic_turan, check_pspectral_turan, check_spectral_turan,
                                   check_star_series, check_star_sidorenko, claim_86, krs_relation, random_76_instance,
                                   random_84_sequence, random_krs, random_superadditive, require_clique_free,
                                   star_density, tent_density_bound)


def by_claim(reports):
    return {r.claim: r for r in reports}


def test_c5_spectral_forms():
    reps = by_claim(check_spectral_turan(make_cycle(5), 2))
    assert reps["spectral-turan-vertex"].lhs == pytest.approx(2.0)
    assert reps["spectral-turan-vertex"].rhs == pytest.approx(2.5)
    # 2m = 10, so the edge form reads 4 <= 5
    assert reps["spectral-turan-edge"].details["homs"] == 10
    assert reps["spectral-turan-edge"].rhs == pytest.approx(5.0)
    assert all(r.passed for r in reps.values())


def test_c5_pspectral_second_form():
    reps = by_claim(check_pspectral_turan(make_cycle(5), 2, 2))
    assert reps["pspectral-turan-m"].rhs == pytest.approx(math.sqrt(5))
    assert reps["pspectral-turan-n"].rhs == pytest.approx(2.5)


def test_balanced_bipartite_is_tight():
    G = make_complete_bipartite(3, 3)
    reps = by_claim(check_spectral_turan(G, 2, T=make_star(3), walks=(3, 4)))
    for name in ("spectral-turan-vertex", "spectral-turan-edge", "spectral-turan-walks-3"):
        assert abs(reps[name].slack) < 1e-8, name
    assert check_entropic_turan(G, 2).slack == pytest.approx(0, abs=1e-12)


def test_clique_precondition_has_a_witness():
    with pytest.raises(PreconditionFailure) as exc:
        require_clique_free(make_complete(4, 2), 2)
    w = exc.value.witness
    assert len(set(w)) == 3
    with pytest.raises(PreconditionFailure):
        check_entropic_turan(make_cycle(3), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_graph_theorems_on_random_triangle_free_graphs(seed):
    rng = np.random.default_rng(seed)
    G = random_hypergraph(2, int(rng.integers(3, 9)), 0.4, rng)
    # knock out one edge of each triangle found
    edges = list(G.edges)
    while True:
        H = Hypergraph(2, G.n, edges)
        try:
            require_clique_free(H, 2)
            break
        except PreconditionFailure as e:
            tri = set(e.witness)
            edges.remove(next(x for x in edges if set(x) <= tri))
    if H.num_edges == 0:
        return
    assert check_entropic_turan(H, 2).passed
    assert all(r.passed for r in check_spectral_turan(H, 2, T=make_path(4), walks=(3, 5)))
    for p in (1, 1.5, 3):
        assert all(r.passed for r in check_pspectral_turan(H, 2, p))
    assert all(r.passed for r in check_star_series(H, 2))


def test_star_density_and_sidorenko():
    S = make_star(3)
    assert star_density(S, 1) == Fraction(6, 16)
    for i in range(5):
        rep = check_star_sidorenko(S, i)
        assert rep.passed and isinstance(rep.slack, Fraction)
    # regular graphs are equality cases
    assert check_star_sidorenko(make_cycle(6), 3).slack == 0


def test_star_series_exact_on_turan_graph():
    reps = by_claim(check_star_series(make_complete_bipartite(2, 2), 2))
    assert reps["star-series"].lhs == 2
    assert reps["density-turan"].slack == 0


def test_superadditive_equality_and_random():
    for k in range(1, 9):
        assert abs(aux_ineq_72([float(i) for i in range(1, k + 1)]).slack) <= 1e-12 * factorial(k)
    rng = np.random.default_rng(3)
    for _ in range(300):
        rep = aux_ineq_72(random_superadditive(int(rng.integers(2, 9)), rng))
        assert rep.hypothesis == "ok" and rep.passed
    assert aux_ineq_72([2.0, 1.0]).hypothesis == "failed"


def test_ratio_products():
    rng = np.random.default_rng(4)
    for _ in range(300):
        y, z = random_76_instance(int(rng.integers(2, 8)), rng)
        rep = aux_ineq_76(y, z)
        assert rep.hypothesis == "ok" and rep.passed
    z = [1.0, 2.5, 4.0]
    assert aux_ineq_76(z, z).slack == pytest.approx(0, abs=1e-12)
    with pytest.raises(InvalidParameters):
        aux_ineq_76([1.0], [1.0, 2.0])


def test_weighted_amgm():
    # equality when y_i proportional to z + i
    z = 1.5
    y = [z + i for i in range(1, 5)]
    assert aux_ineq_85(y, z).slack == pytest.approx(0, abs=1e-9)
    rng = np.random.default_rng(5)
    for _ in range(200):
        t = int(rng.integers(1, 8))
        assert aux_ineq_85(rng.exponential(size=t).tolist(), float(rng.exponential(2))).passed


def test_krs_relation():
    assert krs_relation(3, 4, 2)
    assert krs_relation(3, 3, 1)
    assert not krs_relation(3, 3, 3)
    assert krs_relation(5, 5, 3) == (2 >= Fraction(1, 4) + Fraction(2, 3))


def test_weighted_sum_on_random_sequences():
    rng = np.random.default_rng(6)
    for _ in range(300):
        k, r, s = random_krs(rng)
        x = random_84_sequence(k, r, s, rng)
        assert x[-1] == pytest.approx(1.0)
        rep = claim_86(x, k, r, s)
        assert rep.hypothesis == "ok" and rep.passed
        assert rep.details["identity"] and rep.details["c_in_range"]


def test_weighted_sum_is_tight_on_cliques():
    k, r = 4, 6
    x = [Fraction(r - k + i, r) for i in range(1, k + 1)]
    rep = claim_86(x, k, r, 1)
    assert rep.slack == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_superadditive_product_bound_pipeline(seed):
    # superadditive ratio sequences with x_k = 1 keep the product at most k!/k^k
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, 8))
    y = random_superadditive(k, rng)
    x = [v / y[-1] for v in y]
    for i in range(1, k):
        for j in range(1, k - i + 1):
            assert derive_constraint("lemma72", i=i, j=j, k=k).evaluate(x, 1e-9).satisfied
    assert math.prod(x) <= factorial(k) / k ** k + 1e-12


def test_tent_density_examples():
    rep = tent_density_bound(make_complete(4, 3), "fks", r=4, s=2)
    assert rep.lhs == pytest.approx(3 / 8) and rep.passed
    assert rep.details["constraints_failed"] == []
    single = tent_density_bound(Hypergraph(3, 3, [(0, 1, 2)]))
    assert single.slack == pytest.approx(0, abs=1e-9)
    assert single.rhs == pytest.approx(2 / 9)


def test_tent_density_preconditions():
    with pytest.raises(PreconditionFailure) as exc:
        tent_density_bound(make_complete(4, 3))
    assert exc.value.witness
    with pytest.raises(PreconditionFailure):
        tent_density_bound(make_complete(5, 3), "fks", r=4, s=2)
    with pytest.raises(InvalidParameters):
        tent_density_bound(make_complete(4, 3), "fks", r=4, s=3)
    with pytest.raises(InvalidParameters):
        tent_density_bound(make_complete(4, 3), "fks")


def test_appendix_thresholds_are_monotone():
    s = [appendix_s_star(6, r) for r in range(6, 40)]
    assert s == sorted(s) and s[0] >= 1
    rs = [appendix_r_star(8, d) for d in range(1, 8)]
    assert rs == sorted(rs, reverse=True)
    for k, r in ((7, 9), (10, 25)):
        st_ = appendix_s_star(k, r)
        assert krs_relation(k, r, st_) and (st_ == k or not krs_relation(k, r, st_ + 1))
    for k, d in ((8, 2), (12, 5)):
        r = appendix_r_star(k, d)
        assert krs_relation(k, r, k - d) and (r == k or not krs_relation(k, r - 1, k - d))


def test_appendix_asymptotics():
    ratios = [appendix_diagnostics(k, r=2 * k)["s_ratio_to_asymptote"] for k in (50, 200, 800)]
    assert ratios == sorted(ratios)
    assert abs(ratios[-1] - 1) < 2e-3
