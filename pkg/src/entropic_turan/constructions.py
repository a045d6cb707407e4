"""Search-based constructions: the 2-(6,3,2) design G_1 and small-intersection designs."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .enumerate import canonical_form
from .errors import InvalidParameters, TooLarge
from .homs import find_hom
from .hypergraph import Hypergraph, find_isomorphism, iterated_blowup_density_series, make_tent, partitions

MAX_AUX_VERTICES = 10 ** 6


@dataclass
class DesignSearchResult:
    hypergraph: Hypergraph
    certificate: dict
    stats: dict = field(default_factory=dict)

    def verify(self) -> bool:
        """Recompute the certificate from the hypergraph and compare."""
        kind = self.certificate.get("kind")
        if kind == "pair-degree":
            return pair_degrees(self.hypergraph) == self.certificate["pair_degrees"]
        if kind == "intersection-histogram":
            return intersection_histogram(self.hypergraph) == self.certificate["histogram"]
        return False

    def to_dict(self) -> dict:
        G = self.hypergraph
        cert = dict(self.certificate)
        if "pair_degrees" in cert:
            cert["pair_degrees"] = {f"{a},{b}": d for (a, b), d in sorted(cert["pair_degrees"].items())}
        if "histogram" in cert:
            cert["histogram"] = {str(s): c for s, c in sorted(cert["histogram"].items())}
        return {"hypergraph": {"k": G.k, "n": G.n, "edges": [list(e) for e in G.edges]},
                "certificate": cert, "stats": self.stats}


def pair_degrees(G: Hypergraph) -> dict:
    deg = {p: 0 for p in itertools.combinations(range(G.n), 2)}
    for e in G.edges:
        for p in itertools.combinations(e, 2):
            deg[p] += 1
    return deg


def intersection_histogram(G: Hypergraph) -> dict:
    hist = Counter(len(set(e) & set(f)) for e, f in itertools.combinations(G.edges, 2))
    return dict(sorted(hist.items()))


def is_k4_minus_free(G: Hypergraph) -> bool:
    """No four vertices spanning three or more edges."""
    edges = set(G.edges)
    for quad in itertools.combinations(range(G.n), 4):
        if sum(1 for t in itertools.combinations(quad, 3) if t in edges) >= 3:
            return False
    return True


def _pair_designs(n, k, lam):
    """All k-uniform designs on [n] with every pair in exactly ``lam`` edges."""
    triples = list(itertools.combinations(range(n), k))
    pairs_of = [list(itertools.combinations(t, 2)) for t in triples]
    deg = Counter()
    chosen, found, nodes = [], [], 0

    def rec(start):
        nonlocal nodes
        nodes += 1
        # first pair still short of lam decides which edges may come next
        open_pair = next((p for p in itertools.combinations(range(n), 2) if deg[p] < lam), None)
        if open_pair is None:
            found.append(list(chosen))
            return
        for i in range(start, len(triples)):
            t = triples[i]
            if not (open_pair[0] in t and open_pair[1] in t):
                continue
            if any(deg[p] >= lam for p in pairs_of[i]):
                continue
            for p in pairs_of[i]:
                deg[p] += 1
            chosen.append(t)
            rec(i + 1)
            chosen.pop()
            for p in pairs_of[i]:
                deg[p] -= 1

    rec(0)
    return found, nodes


def find_G1() -> DesignSearchResult:
    """The 3-graph on 6 vertices with every pair in exactly two edges.

    All labelled completions are enumerated and bucketed by isomorphism; the
    uniqueness claim is only checked on these 6 vertices.
    """
    designs, nodes = _pair_designs(6, 3, 2)
    classes = []
    for edges in designs:
        H = Hypergraph(3, 6, edges)
        if not any(find_isomorphism(H, rep) is not None for rep in classes):
            classes.append(H)
    if not designs:
        raise AssertionError("no 2-(6,3,2) design found")
    G = canonical_form(classes[0])
    cert = {"kind": "pair-degree", "pair_degrees": pair_degrees(G),
            "vertex_degrees": list(G.degrees()), "k4_minus_free": is_k4_minus_free(G)}
    stats = {"labelled_designs": len(designs), "isomorphism_classes": len(classes),
             "search_nodes": nodes, "scope": "n = 6 only"}
    return DesignSearchResult(G, cert, stats)


def g1_iterated_density(m: int, normalization: str = "binomial") -> Fraction:
    """Exact edge density of the m-th iterated blowup of G_1.

    ``"binomial"`` divides by ``C(n, 3)``; ``"power"`` uses ``3! e / n^3``,
    which follows ``t_m = t_{m-1}/36 + 10/36``. Both tend to 2/7.
    """
    if m < 1:
        raise InvalidParameters("m must be at least 1")
    return iterated_blowup_density_series(find_G1().hypergraph, m, normalization)[-1]


def binary_entropy(a: float) -> float:
    if a in (0.0, 1.0):
        return 0.0
    return -a * math.log2(a) - (1 - a) * math.log2(1 - a)


def greedy_independent_set(adj: np.ndarray) -> list:
    """Repeatedly take a minimum-degree vertex (smallest index on ties) and
    delete its closed neighbourhood."""
    alive = np.ones(adj.shape[0], dtype=bool)
    deg = adj.sum(axis=1).astype(np.int64)
    chosen = []
    while alive.any():
        cand = np.where(alive, deg, np.iinfo(np.int64).max)
        v = int(np.argmin(cand))
        chosen.append(v)
        gone = alive & (adj[v] | (np.arange(len(alive)) == v))
        alive &= ~gone
        deg -= adj[:, gone].sum(axis=1).astype(np.int64)
    return chosen


def intersection_design(k: int, alpha: float) -> DesignSearchResult:
    """k-graph on [2k] whose edges pairwise meet in fewer than ``alpha*k`` vertices.

    Edges form an independent set of the graph on k-subsets of [2k] joining
    sets that meet in at least ``alpha*k`` vertices.
    """
    if not (0.5 < alpha < 1):
        raise InvalidParameters("alpha must lie in (1/2, 1)")
    if k < 1:
        raise InvalidParameters("k must be positive")
    N = comb(2 * k, k)
    if N > MAX_AUX_VERTICES:
        raise TooLarge(f"C({2 * k},{k}) = {N} exceeds the auxiliary graph cap")
    subsets = list(itertools.combinations(range(2 * k), k))
    inc = np.zeros((N, 2 * k), dtype=np.int32)
    for i, s in enumerate(subsets):
        inc[i, list(s)] = 1
    meet = inc @ inc.T
    adj = meet >= alpha * k
    np.fill_diagonal(adj, False)
    degree = int(adj[0].sum())
    chosen = greedy_independent_set(adj)
    G = Hypergraph(k, 2 * k, [subsets[i] for i in sorted(chosen)])
    hist = intersection_histogram(G)
    edges = G.num_edges
    density = Fraction(math.factorial(k) * edges, (2 * k) ** k)
    cert = {"kind": "intersection-histogram", "histogram": hist, "alpha": alpha,
            "max_intersection": max(hist) if hist else 0}
    stats = {"aux_vertices": N, "aux_degree": degree, "independent_set": edges,
             "caro_wei_bound": N / (degree + 1),
             "asymptotic_size": N / 2 ** (2 * binary_entropy(alpha) * k),
             "density": float(density), "density_ratio": edges / 2 ** k}
    return DesignSearchResult(G, cert, stats)


def large_part_tents(k: int, alpha: float) -> list:
    """Partitions of k with at least two parts and largest part above ``alpha*k``."""
    return [lam for length in range(2, k + 1) for lam in partitions(k, length) if lam[0] > alpha * k]


def check_tent_freeness(result: DesignSearchResult, alpha: float) -> dict:
    """Hom-search every tent the design should avoid; maps partition to a witness or None."""
    G = result.hypergraph
    out = {}
    for lam in large_part_tents(G.k, alpha):
        w = find_hom(make_tent(lam), G)
        out[lam] = None if w is None else w.map
    return out
