"""Homomorphism search between (partial) hypergraphs and tree homomorphism counts.

A homomorphism from a partial k-graph F to a k-graph G maps every face of F
injectively into some edge of G. For a k-graph F of the same uniformity this
is the usual notion: edges go to edges. Only maximal faces are checked, since
the condition is inherited by subfaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidParameters
from .hypergraph import Hypergraph, PartialHypergraph, extend


@dataclass(frozen=True)
class HomWitness:
    map: tuple[int, ...]
    checked: bool = True


def _faces_of(F):
    if isinstance(F, PartialHypergraph):
        return F.k, F.n, [tuple(f) for f in F.maximal_faces]
    covered = {v for e in F.edges for v in e}
    faces = list(F.edges) + [(v,) for v in range(F.n) if v not in covered]
    return F.k, F.n, faces


class _Shadow:
    """All vertex sets (as bitmasks) contained in some edge of G, by size."""

    def __init__(self, G: Hypergraph, max_size: int):
        self.sets = set()
        for e in G.edges:
            for r in range(1, min(max_size, len(e)) + 1):
                for sub in itertools.combinations(e, r):
                    mask = 0
                    for v in sub:
                        mask |= 1 << v
                    self.sets.add(mask)

    def __contains__(self, mask):
        return mask in self.sets


def _variable_order(n, faces):
    incidence = [0] * n
    for f in faces:
        for v in f:
            incidence[v] += 1
    return sorted(range(n), key=lambda v: (-incidence[v], v))


def is_homomorphism(F, G: Hypergraph, mapping) -> bool:
    _, n, faces = _faces_of(F)
    if len(mapping) != n:
        return False
    edge_sets = [frozenset(e) for e in G.edges]
    for f in faces:
        img = [mapping[v] for v in f]
        if len(set(img)) != len(img):
            return False
        s = frozenset(img)
        if not any(s <= e for e in edge_sets):
            return False
    return True


def find_hom(F, G: Hypergraph) -> HomWitness | None:
    """Return a homomorphism ``F -> G`` if one exists, else ``None``.

    Deterministic backtracking over the vertices of ``F`` in a static order
    (most incident faces first, ties by label), checking injectivity and edge
    containment of every partially assigned face.
    """
    kf, n, faces = _faces_of(F)
    if max((len(f) for f in faces), default=0) > G.k:
        raise InvalidParameters("F has faces larger than the uniformity of G")
    if n == 0:
        return HomWitness(())
    shadow = _Shadow(G, max((len(f) for f in faces), default=1))
    touched = sorted({v for e in G.edges for v in e})
    if not touched:
        return None

    order = _variable_order(n, faces)
    position = {v: i for i, v in enumerate(order)}
    # faces to re-check when the vertex at position i gets assigned
    checks = [[] for _ in range(n)]
    for f in faces:
        for v in f:
            checks[position[v]].append(f)
    for i in range(n):
        checks[i] = sorted(set(checks[i]))

    image = [None] * n

    def consistent(i):
        for f in checks[i]:
            mask = 0
            for v in f:
                w = image[v]
                if w is None:
                    continue
                bit = 1 << w
                if mask & bit:
                    return False
                mask |= bit
            if mask not in shadow:
                return False
        return True

    def rec(i):
        if i == n:
            return True
        v = order[i]
        for w in touched:
            image[v] = w
            if consistent(i) and rec(i + 1):
                return True
        image[v] = None
        return False

    if rec(0):
        return HomWitness(tuple(image))
    return None


def is_hom_free(G: Hypergraph, family) -> tuple[bool, tuple[int, HomWitness] | None]:
    """``(True, None)`` if no member of ``family`` maps into ``G``, otherwise
    ``(False, (index, witness))`` for the first member that does."""
    for idx, F in enumerate(family):
        w = find_hom(F, G)
        if w is not None:
            return False, (idx, w)
    return True, None


def check_extension_equivalence(F: PartialHypergraph, G: Hypergraph) -> bool:
    """A hom from ``F`` exists iff a hom from its extension exists."""
    a = find_hom(F, G) is not None
    b = find_hom(extend(F, G.k), G) is not None
    return a == b


def brute_force_hom_exists(F, G: Hypergraph) -> bool:
    """Exhaustive check over all ``n(G)^n(F)`` maps (test oracle)."""
    _, n, _ = _faces_of(F)
    for mapping in itertools.product(range(G.n), repeat=n):
        if is_homomorphism(F, G, mapping):
            return True
    return False


# ---------------------------------------------------------------------------
# tree homomorphisms


def is_tree(T: Hypergraph) -> bool:
    if T.k != 2 or T.n == 0 or T.num_edges != T.n - 1:
        return False
    nb = T.neighbors()
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for w in nb[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == T.n


def count_tree_homs(T: Hypergraph, G: Hypergraph) -> int:
    """Exact number of homomorphisms from the tree ``T`` into the graph ``G``."""
    if not is_tree(T):
        raise InvalidParameters("T must be a connected acyclic 2-graph")
    if G.k != 2:
        raise InvalidParameters("G must be a 2-graph")
    nbT = T.neighbors()
    nbG = [sorted(s) for s in G.neighbors()]
    parent = {0: None}
    order = [0]
    for u in order:
        for w in sorted(nbT[u]):
            if w not in parent:
                parent[w] = u
                order.append(w)
    counts = {}
    for u in reversed(order):
        f = [1] * G.n
        for c in nbT[u]:
            if parent.get(c) == u:
                fc = counts.pop(c)
                for a in range(G.n):
                    f[a] *= sum(fc[b] for b in nbG[a])
        counts[u] = f
    return sum(counts[0])


def brute_force_tree_homs(T: Hypergraph, G: Hypergraph) -> int:
    adj = {(u, v) for u, v in G.edges} | {(v, u) for u, v in G.edges}
    return sum(all((m[u], m[v]) in adj for u, v in T.edges)
               for m in itertools.product(range(G.n), repeat=T.n))
