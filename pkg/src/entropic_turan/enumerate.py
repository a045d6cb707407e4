"""Isomorphism-free generation of small k-graphs.

Classes are grown one edge at a time. Each candidate is reduced to its
lexicographically least isomorph by applying every vertex permutation at once
through a precomputed table, so ``n`` is capped at 7 (5040 permutations).
A ``keep`` predicate that is closed under deleting edges (hom-freeness,
triangle-freeness) can prune during the growth without losing classes.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import InvalidParameters, TooLarge
from .hypergraph import Hypergraph

MAX_VERTICES = 7


@lru_cache(maxsize=None)
def _tables(n: int, k: int):
    if n > MAX_VERTICES:
        raise TooLarge(f"isomorphism-free generation is limited to n <= {MAX_VERTICES}")
    slots = list(itertools.combinations(range(n), k))
    index = {s: i for i, s in enumerate(slots)}
    perms = list(itertools.permutations(range(n)))
    table = np.array([[index[tuple(sorted(p[v] for v in s))] for s in slots] for p in perms],
                     dtype=np.int64)
    return slots, index, table


def canonical_mask(n: int, k: int, edge_ids) -> int:
    """Canonical code of the edge set given by slot ids.

    Earlier slots get more significant bits, so the maximum code over all
    relabelings belongs to the lexicographically least sorted edge list.
    """
    slots, _, table = _tables(n, k)
    if len(edge_ids) == 0:
        return 0
    top = len(slots) - 1
    images = top - table[:, list(edge_ids)]
    masks = (np.int64(1) << images).sum(axis=1)
    return int(masks.max())


def _from_mask(n, k, mask):
    slots = _tables(n, k)[0]
    top = len(slots) - 1
    return Hypergraph(k, n, [slots[top - b] for b in range(top + 1) if mask >> b & 1])


def canonical_form(G: Hypergraph) -> Hypergraph:
    """The lexicographically least isomorph of ``G``."""
    _, index, _ = _tables(G.n, G.k)
    return _from_mask(G.n, G.k, canonical_mask(G.n, G.k, [index[e] for e in G.edges]))


def enumerate_hypergraphs(n: int, k: int = 2, max_edges: int | None = None,
                          keep: Callable[[Hypergraph], bool] | None = None) -> Iterator[Hypergraph]:
    """Yield one representative per isomorphism class of k-graphs on ``n``
    labelled vertices (isolated vertices allowed), in order of edge count.

    ``keep`` must be inherited by subgraphs; rejected graphs are neither
    yielded nor extended.
    """
    if n < 0 or k < 1:
        raise InvalidParameters("need n >= 0 and k >= 1")
    slots, _, _ = _tables(n, k)
    top = len(slots) - 1
    limit = len(slots) if max_edges is None else min(max_edges, len(slots))
    level = {0: ()}
    empty = Hypergraph(k, n, [])
    if keep is not None and not keep(empty):
        return
    yield empty
    for _ in range(limit):
        nxt = {}
        for ids in level.values():
            present = set(ids)
            for s in range(len(slots)):
                if s in present:
                    continue
                cand = ids + (s,)
                cm = canonical_mask(n, k, cand)
                if cm in nxt:
                    continue
                nxt[cm] = None
        kept = {}
        for cm in sorted(nxt, reverse=True):
            G = _from_mask(n, k, cm)
            if keep is None or keep(G):
                kept[cm] = tuple(top - b for b in range(top + 1) if cm >> b & 1)
                yield G
        level = kept
        if not level:
            return


def count_classes(n: int, k: int = 2, **kw) -> int:
    return sum(1 for _ in enumerate_hypergraphs(n, k, **kw))


def has_clique(G: Hypergraph, size: int) -> bool:
    """Does the graph ``G`` contain ``K_size``?"""
    if size <= 1:
        return G.n >= size
    adj = _adj(G)
    for combo in itertools.combinations(range(G.n), size):
        if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def _adj(G):
    adj = [set() for _ in range(G.n)]
    for a, b in G.edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def clique_free_graphs(n: int, r: int) -> Iterator[Hypergraph]:
    """All ``K_{r+1}``-free graphs on ``n`` vertices up to isomorphism."""
    return enumerate_hypergraphs(n, 2, keep=lambda G: not has_clique(G, r + 1))


def hom_free_hypergraphs(n: int, k: int, family, max_edges: int | None = None) -> Iterator[Hypergraph]:
    """k-graphs on ``n`` vertices admitting no homomorphism from ``family``."""
    from .homs import is_hom_free
    return enumerate_hypergraphs(n, k, max_edges=max_edges, keep=lambda G: is_hom_free(G, family)[0])


def enumerate_trees(n: int) -> list[Hypergraph]:
    """Trees on ``n`` vertices up to isomorphism."""
    if n < 1:
        raise InvalidParameters("trees need at least one vertex")
    if n == 1:
        return [Hypergraph(2, 1, [])]
    out = []
    for G in enumerate_hypergraphs(n, 2, max_edges=n - 1, keep=_is_forest):
        if G.num_edges == n - 1:
            out.append(G)
    return out


def _is_forest(G):
    parent = list(range(G.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in G.edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def is_complete_bipartite_balanced(G: Hypergraph) -> bool:
    """Is ``G`` (ignoring isolated vertices) ``K_{a,a}`` or ``K_{a,a+1}``?"""
    adj = _adj(G)
    active = [v for v in range(G.n) if adj[v]]
    if not active:
        return False
    side = {active[0]: 0}
    stack = [active[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in side:
                side[u] = 1 - side[v]
                stack.append(u)
            elif side[u] == side[v]:
                return False
    if len(side) != len(active):
        return False
    a = sum(1 for v in side.values() if v == 0)
    b = len(active) - a
    return abs(a - b) <= 1 and G.num_edges == a * b


__all__ = ["canonical_form", "canonical_mask", "enumerate_hypergraphs", "count_classes", "has_clique",
           "clique_free_graphs", "hom_free_hypergraphs", "enumerate_trees", "is_complete_bipartite_balanced"]
