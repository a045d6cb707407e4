import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropic_turan.errors import HypergraphFormatError, InvalidParameters
from entropic_turan.hypergraph import (Hypergraph, PartialHypergraph, blowup, extend, find_isomorphism,
                                       from_text, is_isomorphic, iterated_blowup, iterated_blowup_counts,
                                       iterated_blowup_density_series, loads, make_complete, make_Fks,
                                       make_Fks_partial, make_partial_tent, make_tent, partitions, random_hypergraph,
                                       read_hypergraph, tent_family, to_json, to_text, write_hypergraph)


@st.composite
def hypergraphs(draw, max_n=6, ks=(2, 3)):
    k = draw(st.sampled_from(ks))
    n = draw(st.integers(k, max_n))
    slots = list(itertools.combinations(range(n), k))
    picked = draw(st.lists(st.sampled_from(slots), unique=True, max_size=len(slots)))
    return Hypergraph(k, n, picked)


def test_edges_are_sorted_and_deduplicated():
    G = Hypergraph(3, 4, [(2, 1, 0), (0, 1, 2), (3, 1, 0)])
    assert G.edges == ((0, 1, 2), (0, 1, 3))
    with pytest.raises(InvalidParameters):
        Hypergraph(3, 4, [(0, 1, 2), (2, 1, 0)], strict=True)


def test_rejects_bad_edges():
    with pytest.raises(InvalidParameters):
        Hypergraph(3, 4, [(0, 1)])
    with pytest.raises(InvalidParameters):
        Hypergraph(2, 3, [(0, 3)])
    with pytest.raises(InvalidParameters):
        Hypergraph(2, 3, [(1, 1)])


def test_complete_graph_counts():
    assert make_complete(5, 3).num_edges == 10
    assert make_complete(4, 2).degrees() == [3, 3, 3, 3]


def test_tents():
    F5 = make_tent((2, 1))
    assert F5.k == 3 and F5.n == 5 and F5.num_edges == 3
    base = set(F5.edges[0])
    apex = 3
    others = [set(e) for e in F5.edges[1:]]
    assert sorted(len(base & e) for e in others) == [1, 2]
    assert all(apex in e for e in others)
    assert len(others[0] & others[1]) == 1

    P = make_partial_tent((2, 1))
    assert sorted(map(len, P.maximal_faces)) == [2, 3, 3]
    assert extend(P).num_edges == 3


def test_partitions():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions(5, 2)) == [(4, 1), (3, 2)]
    assert len(tent_family(4, 2)) == 2


def test_partial_hypergraph_faces_are_downward_closed():
    P = PartialHypergraph(3, 4, [(0, 1, 2), (2, 3)])
    assert P.is_face((0, 2)) and P.is_face(()) and not P.is_face((1, 3))
    assert len(P.faces()) == 4 + 4 + 1  # vertices, pairs, the triple


def test_fks_shapes():
    F = make_Fks_partial(3, 2, 4)
    assert F.n == 5
    assert make_Fks(3, 2, 4).k == 3


def test_blowup_and_density():
    K2 = make_complete(2, 2)
    B = blowup(K2, [2, 3])
    assert B.num_edges == 6 and B.n == 5
    assert K2.density() == 1


def test_iterated_blowup_counts_match_materialised():
    G1 = Hypergraph(3, 4, [(0, 1, 2), (0, 1, 3)])
    for m in (1, 2, 3):
        G = iterated_blowup(G1, m)
        assert (G.n, G.num_edges) == iterated_blowup_counts(G1, m)[-1]


def test_density_series_normalisations():
    G1 = make_complete(4, 3)
    b = iterated_blowup_density_series(G1, 2, "binomial")
    p = iterated_blowup_density_series(G1, 2, "power")
    assert b[0] == 1 and p[0] == Fraction(6 * 4, 64)
    with pytest.raises(InvalidParameters):
        iterated_blowup_density_series(G1, 2, "cubes")


def test_isomorphism():
    C = Hypergraph(2, 4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    D = Hypergraph(2, 4, [(0, 2), (2, 1), (1, 3), (0, 3)])
    perm = find_isomorphism(C, D)
    assert perm is not None and C.relabel(perm) == D
    assert not is_isomorphic(C, Hypergraph(2, 4, [(0, 1), (1, 2), (2, 3), (0, 2)]))


@given(hypergraphs())
def test_text_and_json_round_trip(G):
    assert from_text(to_text(G)) == G
    assert loads(to_json(G)) == G


@settings(max_examples=40)
@given(hypergraphs(max_n=5), st.randoms(use_true_random=False))
def test_relabelled_copies_are_isomorphic(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    assert is_isomorphic(G, G.relabel(perm))


def test_parse_errors_carry_positions():
    with pytest.raises(HypergraphFormatError) as exc:
        from_text("k 3 n 4\n0 1 2\n0 1 9\n")
    assert exc.value.line == 3 and exc.value.column == 5
    with pytest.raises(HypergraphFormatError) as exc:
        from_text("# comment\nk x n 3\n")
    assert exc.value.line == 2
    with pytest.raises(HypergraphFormatError):
        from_text("k 2 n 3\n0 1 2\n")
    with pytest.raises(HypergraphFormatError):
        loads('{"k": 2, "n": 3')


def test_file_round_trip(tmp_path):
    G = make_tent((2, 1))
    for name in ("g.hg", "g.json"):
        write_hypergraph(G, tmp_path / name)
        assert read_hypergraph(tmp_path / name) == G


def test_random_hypergraph_is_seeded():
    a = random_hypergraph(3, 6, 0.4, np.random.default_rng(5))
    b = random_hypergraph(3, 6, 0.4, np.random.default_rng(5))
    assert a == b and a.num_edges >= 1
