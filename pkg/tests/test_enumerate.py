import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropic_turan.enumerate import (canonical_form, clique_free_graphs, count_classes, enumerate_hypergraphs,
                                      enumerate_trees, has_clique, hom_free_hypergraphs,
                                      is_complete_bipartite_balanced)
from entropic_turan.errors import TooLarge
from entropic_turan.homs import find_hom, is_tree
from entropic_turan.hypergraph import (Hypergraph, is_isomorphic, make_complete, make_complete_bipartite,
                                       make_cycle, tent_family)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
def test_graph_class_counts(n, count):
    assert count_classes(n) == count


@pytest.mark.slow
def test_graph_class_count_seven():
    assert count_classes(7) == 1044


@pytest.mark.parametrize("n,count", [(3, 2), (4, 5), (5, 34)])
def test_three_graph_counts(n, count):
    assert count_classes(n, 3) == count


def test_triangle_free_counts():
    assert [sum(1 for _ in clique_free_graphs(n, 2)) for n in range(1, 7)] == [1, 2, 3, 7, 14, 38]


def test_tree_counts():
    trees = [enumerate_trees(n) for n in range(1, 8)]
    assert [len(t) for t in trees] == [1, 1, 1, 2, 3, 6, 11]
    assert all(is_tree(T) for ts in trees[1:] for T in ts)


def test_classes_are_pairwise_non_isomorphic():
    graphs = list(enumerate_hypergraphs(5))
    for G, H in itertools.combinations(graphs, 2):
        if G.num_edges == H.num_edges:
            assert not is_isomorphic(G, H)


def test_triangle_free_agrees_with_networkx():
    for G in clique_free_graphs(6, 2):
        H = nx.Graph(list(G.edges))
        assert sum(nx.triangles(H).values()) == 0 if G.num_edges else True
    full = [G for G in enumerate_hypergraphs(5) if not has_clique(G, 3)]
    assert len(full) == sum(1 for _ in clique_free_graphs(5, 2))


def test_hom_free_filter():
    fam = tent_family(3, 2)
    got = list(hom_free_hypergraphs(5, 3, fam, max_edges=4))
    assert got
    for G in got:
        assert all(find_hom(F, G) is None for F in fam)


def test_size_guard():
    with pytest.raises(TooLarge):
        next(enumerate_hypergraphs(8))


def test_balanced_bipartite_recognition():
    assert is_complete_bipartite_balanced(make_complete_bipartite(3, 3))
    assert is_complete_bipartite_balanced(make_complete_bipartite(2, 3))
    assert not is_complete_bipartite_balanced(make_complete_bipartite(1, 3))
    assert not is_complete_bipartite_balanced(make_cycle(6))
    assert is_complete_bipartite_balanced(make_cycle(4))


@st.composite
def labelled(draw):
    k = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(k, 6))
    slots = list(itertools.combinations(range(n), k))
    edges = draw(st.lists(st.sampled_from(slots), unique=True, max_size=len(slots)))
    perm = draw(st.permutations(range(n)))
    return Hypergraph(k, n, edges), list(perm)


@settings(max_examples=60, deadline=None)
@given(labelled())
def test_canonical_form_is_a_relabelling_invariant(case):
    G, perm = case
    C = canonical_form(G)
    assert C == canonical_form(G.relabel(perm))
    assert is_isomorphic(C, G)


def test_complete_graph_is_its_own_canonical_form():
    assert canonical_form(make_complete(5, 3)) == make_complete(5, 3)
