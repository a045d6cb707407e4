"""Uniform hypergraphs, partial hypergraphs and the named families built from them.

Vertices are always the contiguous integers ``0..n-1``. Edges and faces are
stored as sorted tuples, and edge lists are kept in lexicographic order, so two
equal objects always have identical representations.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import HypergraphFormatError, InvalidParameters


def _normalize_sets(sets, n, strict, what):
    out = set()
    for s in sets:
        t = tuple(sorted(int(v) for v in s))
        if len(set(t)) != len(t):
            raise InvalidParameters(f"{what} {tuple(s)} has repeated vertices")
        if t and (t[0] < 0 or t[-1] >= n):
            raise InvalidParameters(f"{what} {tuple(s)} uses a vertex outside 0..{n - 1}")
        if t in out and strict:
            raise InvalidParameters(f"duplicate {what} {t}")
        out.add(t)
    return tuple(sorted(out))


class Hypergraph:
    """A k-uniform hypergraph on vertices ``0..n-1``.

    Duplicate edges are merged silently unless ``strict=True``.
    """

    __slots__ = ("k", "n", "edges", "_edge_set")

    def __init__(self, k: int, n: int, edges: Iterable[Iterable[int]] = (), strict: bool = False):
        if k < 1:
            raise InvalidParameters("uniformity k must be at least 1")
        if n < 0:
            raise InvalidParameters("vertex count must be nonnegative")
        edges = _normalize_sets(edges, n, strict, "edge")
        for e in edges:
            if len(e) != k:
                raise InvalidParameters(f"edge {e} does not have exactly {k} vertices")
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_edge_set", frozenset(edges))

    def __setattr__(self, name, value):
        raise AttributeError("Hypergraph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.k, self.n, self.edges) == (other.k, other.n, other.edges)

    def __hash__(self):
        return hash((self.k, self.n, self.edges))

    def __repr__(self):
        return f"Hypergraph(k={self.k}, n={self.n}, edges={list(self.edges)})"

    def __len__(self):
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, e) -> bool:
        return tuple(sorted(e)) in self._edge_set

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def neighbors(self) -> list[set]:
        """Vertex neighbourhoods (vertices sharing at least one edge)."""
        nb = [set() for _ in range(self.n)]
        for e in self.edges:
            for v in e:
                nb[v].update(e)
        for v in range(self.n):
            nb[v].discard(v)
        return nb

    def oriented_edges(self):
        for e in self.edges:
            yield from itertools.permutations(e)

    def relabel(self, perm: Sequence[int]) -> "Hypergraph":
        """Return the image under the vertex map ``v -> perm[v]`` (a bijection)."""
        return Hypergraph(self.k, self.n, [[perm[v] for v in e] for e in self.edges])

    def induced(self, vertices: Iterable[int]) -> "Hypergraph":
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        keep = [[index[v] for v in e] for e in self.edges if all(v in index for v in e)]
        return Hypergraph(self.k, len(vs), keep)

    def add_edges(self, edges) -> "Hypergraph":
        return Hypergraph(self.k, self.n, list(self.edges) + [tuple(e) for e in edges])

    def density(self) -> Fraction:
        """Edge density ``e(G) / C(n, k)`` as an exact rational."""
        total = comb(self.n, self.k)
        if total == 0:
            return Fraction(0)
        return Fraction(len(self.edges), total)

    def adjacency_matrix(self):
        """Adjacency matrix of a graph (k = 2) as a float numpy array."""
        import numpy as np

        if self.k != 2:
            raise InvalidParameters("adjacency matrix requires a 2-graph")
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a


class PartialHypergraph:
    """A downward-closed face family with faces of size at most ``k``.

    Only the maximal faces are stored. Every vertex is a face, so a vertex
    that lies in no larger face shows up as a singleton maximal face.
    """

    __slots__ = ("k", "n", "maximal_faces", "_closure")

    def __init__(self, k: int, n: int, faces: Iterable[Iterable[int]] = (), strict: bool = False):
        if k < 1:
            raise InvalidParameters("maximum face size k must be at least 1")
        faces = _normalize_sets(faces, n, strict, "face")
        for f in faces:
            if len(f) > k:
                raise InvalidParameters(f"face {f} is larger than k={k}")
        fsets = [frozenset(f) for f in faces if f]
        # a face is kept iff no strictly larger generating face contains it
        maximal = [f for f in fsets if not any(f < g for g in fsets)]
        covered = set().union(*maximal) if maximal else set()
        maximal += [frozenset([v]) for v in range(n) if v not in covered]
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "maximal_faces", tuple(sorted(tuple(sorted(f)) for f in maximal)))
        object.__setattr__(self, "_closure", None)

    def __setattr__(self, name, value):
        raise AttributeError("PartialHypergraph is immutable")

    def __eq__(self, other):
        if not isinstance(other, PartialHypergraph):
            return NotImplemented
        return (self.k, self.n, self.maximal_faces) == (other.k, other.n, other.maximal_faces)

    def __hash__(self):
        return hash((self.k, self.n, self.maximal_faces))

    def __repr__(self):
        return f"PartialHypergraph(k={self.k}, n={self.n}, maximal_faces={list(self.maximal_faces)})"

    def faces(self) -> frozenset:
        """All nonempty faces (the downward closure), computed once on demand."""
        if self._closure is None:
            out = set()
            for f in self.maximal_faces:
                for r in range(1, len(f) + 1):
                    out.update(itertools.combinations(f, r))
            object.__setattr__(self, "_closure", frozenset(out))
        return self._closure

    def is_face(self, s) -> bool:
        s = frozenset(s)
        return any(s <= frozenset(f) for f in self.maximal_faces)

    def restrict(self, vertices: Iterable[int]) -> "PartialHypergraph":
        """Induced subcomplex on ``vertices``, relabelled in increasing order."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        faces = [[index[v] for v in f if v in index] for f in self.maximal_faces]
        return PartialHypergraph(self.k, len(vs), [f for f in faces if f])

    def union(self, other: "PartialHypergraph") -> "PartialHypergraph":
        if self.n != other.n:
            raise InvalidParameters("union requires the same vertex set")
        return PartialHypergraph(max(self.k, other.k), self.n,
                                 list(self.maximal_faces) + list(other.maximal_faces))

    def with_k(self, k: int) -> "PartialHypergraph":
        return PartialHypergraph(k, self.n, self.maximal_faces)


def complex_generated_by(H: Hypergraph, k: int | None = None) -> PartialHypergraph:
    """The simplicial complex generated by the edges of ``H``, viewed as a partial k-graph."""
    return PartialHypergraph(H.k if k is None else k, H.n, H.edges)


def normalize_partition(parts: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    if not parts or any(p < 1 for p in parts):
        raise InvalidParameters("partition parts must be positive integers")
    return tuple(sorted(parts, reverse=True))


def partitions(k: int, length: int | None = None):
    """All partitions of ``k`` (nonincreasing tuples), optionally of a fixed length."""

    def rec(rest, largest):
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, largest), 0, -1):
            for tail in rec(rest - p, p):
                yield (p,) + tail

    for lam in rec(k, k):
        if length is None or len(lam) == length:
            yield lam


# ---------------------------------------------------------------------------
# generators


def make_complete(r: int, k: int) -> Hypergraph:
    """K_r^(k): all k-subsets of ``r`` vertices."""
    if k < 1 or k > r:
        raise InvalidParameters(f"need 1 <= k <= r, got k={k}, r={r}")
    return Hypergraph(k, r, itertools.combinations(range(r), k))


def _tent_parts(lam):
    lam = normalize_partition(lam)
    if len(lam) < 2:
        raise InvalidParameters("a tent needs a partition with at least two parts")
    k = sum(lam)
    blocks, start = [], 0
    for p in lam:
        blocks.append(tuple(range(start, start + p)))
        start += p
    return lam, k, blocks


def make_tent(lam: Sequence[int]) -> Hypergraph:
    """The lambda-tent.

    Labelling: base edge ``0..k-1`` with part ``i`` occupying a consecutive block,
    apex ``k``, then the padding vertices of ``e_1, e_2, ...`` in order.
    """
    lam, k, blocks = _tent_parts(lam)
    apex = k
    edges = [tuple(range(k))]
    nxt = k + 1
    for block in blocks:
        pad = k - 1 - len(block)
        edges.append(block + (apex,) + tuple(range(nxt, nxt + pad)))
        nxt += pad
    return Hypergraph(k, nxt, edges)


def make_partial_tent(lam: Sequence[int]) -> PartialHypergraph:
    """The partial lambda-tent on base ``0..k-1`` plus apex ``k``."""
    lam, k, blocks = _tent_parts(lam)
    faces = [tuple(range(k))] + [block + (k,) for block in blocks]
    return PartialHypergraph(k, k + 1, faces)


def tent_family(k: int, length: int = 2, partial: bool = True) -> list:
    """All (partial) tents with ``|lambda| = k`` and ``l(lambda) = length``."""
    make = make_partial_tent if partial else make_tent
    return [make(lam) for lam in partitions(k, length)]


def extend(F: PartialHypergraph, k: int | None = None) -> Hypergraph:
    """Pad every maximal face to a k-edge with fresh, unshared vertices.

    Fresh vertices are numbered from ``F.n`` upwards, maximal faces taken in
    lexicographic order.
    """
    k = F.k if k is None else k
    if F.n == 0:
        raise InvalidParameters("cannot extend an empty partial hypergraph")
    edges, nxt = [], F.n
    for f in F.maximal_faces:
        if len(f) > k:
            raise InvalidParameters(f"face {f} does not fit in a {k}-edge")
        pad = k - len(f)
        edges.append(f + tuple(range(nxt, nxt + pad)))
        nxt += pad
    return Hypergraph(k, nxt, edges)


def make_extended_clique(k: int, size: int) -> Hypergraph:
    """E^(k)_size: the extension of the complete graph K_size to uniformity k."""
    if k < 2 or size < 2:
        raise InvalidParameters("extended cliques need k >= 2 and size >= 2")
    return extend(PartialHypergraph(k, size, itertools.combinations(range(size), 2)))


def make_Fks_partial(k: int, s: int, r: int) -> PartialHypergraph:
    """Partial k-graph on ``r+1`` vertices spanned by ``[s] + {i}`` and all pairs."""
    if not (1 <= s < k <= r):
        raise InvalidParameters(f"need 1 <= s < k <= r, got k={k}, s={s}, r={r}")
    head = tuple(range(s))
    faces = [head + (i,) for i in range(s, r + 1)]
    faces += list(itertools.combinations(range(r + 1), 2))
    return PartialHypergraph(k, r + 1, faces)


def make_Fks(k: int, s: int, r: int) -> Hypergraph:
    """F^(k,s)_{r+1}: the extension of :func:`make_Fks_partial`."""
    return extend(make_Fks_partial(k, s, r))


def make_clique_pairs_partial(k: int, r: int) -> PartialHypergraph:
    """Partial k-graph on ``r+1`` vertices generated by ``[k]`` and all pairs."""
    if not (2 <= k <= r):
        raise InvalidParameters(f"need 2 <= k <= r, got k={k}, r={r}")
    faces = [tuple(range(k))] + list(itertools.combinations(range(r + 1), 2))
    return PartialHypergraph(k, r + 1, faces)


def make_k4_minus() -> Hypergraph:
    """K_4^(3)-: three edges on four vertices."""
    return Hypergraph(3, 4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])


def make_cycle(n: int) -> Hypergraph:
    if n < 3:
        raise InvalidParameters("a cycle needs at least 3 vertices")
    return Hypergraph(2, n, [(i, (i + 1) % n) for i in range(n)])


def make_path(n: int) -> Hypergraph:
    return Hypergraph(2, n, [(i, i + 1) for i in range(n - 1)])


def make_star(leaves: int) -> Hypergraph:
    """K_{1,leaves} with centre 0."""
    return Hypergraph(2, leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def make_complete_bipartite(a: int, b: int) -> Hypergraph:
    return Hypergraph(2, a + b, [(i, a + j) for i in range(a) for j in range(b)])


def random_hypergraph(k: int, n: int, density: float, rng, min_edges: int = 1) -> Hypergraph:
    """Each k-subset of ``range(n)`` kept independently with probability ``density``;
    resampled until at least ``min_edges`` edges survive."""
    slots = list(itertools.combinations(range(n), k))
    if min_edges > len(slots):
        raise InvalidParameters("min_edges exceeds the number of k-subsets")
    while True:
        keep = rng.random(len(slots)) < density
        if keep.sum() >= min_edges:
            return Hypergraph(k, n, [s for s, b in zip(slots, keep) if b])


def blowup(G: Hypergraph, counts: Sequence[int]) -> Hypergraph:
    """Replace vertex ``v`` by ``counts[v]`` copies; copies of ``v`` form a consecutive block."""
    if len(counts) != G.n or any(int(c) < 1 for c in counts):
        raise InvalidParameters("blowup needs one positive count per vertex")
    offsets = list(itertools.accumulate([0] + [int(c) for c in counts]))
    edges = []
    for e in G.edges:
        blocks = [range(offsets[v], offsets[v + 1]) for v in e]
        edges.extend(itertools.product(*blocks))
    return Hypergraph(G.k, offsets[-1], edges)


def iterated_blowup(G1: Hypergraph, m: int) -> Hypergraph:
    """Materialise G_m: every vertex of G_1 replaced by a copy of G_{m-1}.

    Only sensible for small ``m``; use :func:`iterated_blowup_density_series`
    for densities.
    """
    if m < 1:
        raise InvalidParameters("m must be at least 1")
    G = G1
    for _ in range(m - 1):
        size = G.n
        edges = []
        for e in G1.edges:
            edges.extend(itertools.product(*[range(v * size, (v + 1) * size) for v in e]))
        for v in range(G1.n):
            edges.extend(tuple(v * size + u for u in f) for f in G.edges)
        G = Hypergraph(G1.k, G1.n * size, edges)
    return G


def iterated_blowup_counts(G1: Hypergraph, m: int) -> list[tuple[int, int]]:
    """``(n_j, e_j)`` for ``j = 1..m`` from the exact integer recurrence."""
    if m < 1:
        raise InvalidParameters("m must be at least 1")
    n1, e1, k = G1.n, G1.num_edges, G1.k
    out = [(n1, e1)]
    for _ in range(m - 1):
        n, e = out[-1]
        out.append((n1 * n, n1 * e + e1 * n ** k))
    return out


def iterated_blowup_density_series(G1: Hypergraph, m: int, normalization: str = "binomial") -> list[Fraction]:
    """Exact densities of G_1, ..., G_m without materialising them.

    ``normalization="binomial"`` gives ``e / C(n, k)``; ``"power"`` gives
    ``k! e / n^k``, the blowup-style density that obeys the affine recurrence
    ``t_m = t_{m-1} / n_1^(k-1) + k! e_1 / n_1^k``.
    """
    k = G1.k
    series = []
    for n, e in iterated_blowup_counts(G1, m):
        if normalization == "binomial":
            series.append(Fraction(e, comb(n, k)))
        elif normalization == "power":
            series.append(Fraction(e * _factorial(k), n ** k))
        else:
            raise InvalidParameters(f"unknown normalization {normalization!r}")
    return series


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# isomorphism (brute force, small n only)

MAX_ISO_VERTICES = 10


def _as_sets(H):
    if isinstance(H, Hypergraph):
        return H.k, H.n, frozenset(H.edges)
    return H.k, H.n, frozenset(H.maximal_faces)


def find_isomorphism(A, B) -> tuple[int, ...] | None:
    """A vertex bijection mapping ``A`` onto ``B``, or ``None``.

    Works for two Hypergraphs or two PartialHypergraphs (compared by maximal
    faces). Brute force over degree-respecting permutations, ``n <= 10``.
    """
    if type(A) is not type(B):
        return None
    ka, na, ea = _as_sets(A)
    kb, nb, eb = _as_sets(B)
    if ka != kb or na != nb or len(ea) != len(eb):
        return None
    if na > MAX_ISO_VERTICES:
        raise InvalidParameters(f"brute-force isomorphism is limited to n <= {MAX_ISO_VERTICES}")
    sig_a = sorted(tuple(sorted(len(f) for f in ea if v in f)) for v in range(na))
    sig_b = sorted(tuple(sorted(len(f) for f in eb if v in f)) for v in range(nb))
    if sig_a != sig_b:
        return None
    deg_a = [tuple(sorted(len(f) for f in ea if v in f)) for v in range(na)]
    deg_b = [tuple(sorted(len(f) for f in eb if v in f)) for v in range(nb)]
    choices = [[w for w in range(nb) if deg_b[w] == deg_a[v]] for v in range(na)]
    for perm in _injective_maps(choices):
        if frozenset(tuple(sorted(perm[v] for v in f)) for f in ea) == eb:
            return tuple(perm)
    return None


def _injective_maps(choices):
    n = len(choices)
    perm = [None] * n
    used = set()

    def rec(i):
        if i == n:
            yield list(perm)
            return
        for w in choices[i]:
            if w not in used:
                used.add(w)
                perm[i] = w
                yield from rec(i + 1)
                used.discard(w)

    yield from rec(0)


def is_isomorphic(A, B) -> bool:
    return find_isomorphism(A, B) is not None


# ---------------------------------------------------------------------------
# file formats


def to_text(G: Hypergraph) -> str:
    lines = [f"k {G.k} n {G.n}"]
    lines += [" ".join(str(v) for v in e) for e in G.edges]
    return "\n".join(lines) + "\n"


def from_text(text: str, strict: bool = False) -> Hypergraph:
    """Parse the line format: a ``k <int> n <int>`` header, one edge per line, ``#`` comments."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 4 or tokens[0] != "k" or tokens[2] != "n":
                raise HypergraphFormatError("expected header 'k <int> n <int>'", lineno, 1)
            try:
                header = (int(tokens[1]), int(tokens[3]))
            except ValueError:
                raise HypergraphFormatError("header values must be integers", lineno,
                                            raw.index(tokens[1]) + 1) from None
            continue
        edge = []
        col = 0
        for tok in tokens:
            col = raw.index(tok, col)
            try:
                v = int(tok)
            except ValueError:
                raise HypergraphFormatError(f"vertex {tok!r} is not an integer", lineno, col + 1) from None
            if v < 0 or v >= header[1]:
                raise HypergraphFormatError(f"vertex {v} outside 0..{header[1] - 1}", lineno, col + 1)
            edge.append(v)
            col += len(tok)
        if len(edge) != header[0]:
            raise HypergraphFormatError(f"edge has {len(edge)} vertices, expected {header[0]}", lineno, 1)
        edges.append(edge)
    if header is None:
        raise HypergraphFormatError("missing header line")
    try:
        return Hypergraph(header[0], header[1], edges, strict=strict)
    except InvalidParameters as exc:
        raise HypergraphFormatError(str(exc)) from None


def to_json(G: Hypergraph) -> str:
    return json.dumps({"k": G.k, "n": G.n, "edges": [list(e) for e in G.edges]})


def from_json(text: str, strict: bool = False) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or not {"k", "n", "edges"} <= set(data):
        raise HypergraphFormatError("JSON hypergraph needs keys 'k', 'n', 'edges'")
    try:
        return Hypergraph(int(data["k"]), int(data["n"]), data["edges"], strict=strict)
    except (InvalidParameters, TypeError) as exc:
        raise HypergraphFormatError(str(exc)) from None


def loads(text: str, strict: bool = False) -> Hypergraph:
    """Parse either format, sniffing JSON by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return from_json(text, strict=strict)
    return from_text(text, strict=strict)


def read_hypergraph(path, strict: bool = False) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), strict=strict)


def write_hypergraph(G: Hypergraph, path) -> None:
    path = str(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(G) + "\n" if path.endswith(".json") else to_text(G))
