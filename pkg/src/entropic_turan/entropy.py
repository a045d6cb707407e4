"""Entropy of finite distributions and of symmetric random edges, plus the
entropic density optimiser.

Entropies are in bits. Probabilities may be floats or ``Fraction``s; the
latter keep marginals exact, while logarithms are always taken in floating
point.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidParameters, NoEdges, PreconditionFailure, SymmetryViolation
from .hypergraph import Hypergraph

PRUNE_BELOW = 1e-15


class FiniteDistribution:
    """A probability distribution on finitely many hashable outcomes (usually tuples)."""

    __slots__ = ("_p",)

    def __init__(self, probs: Mapping, check: bool = True):
        acc = defaultdict(int)
        for o, pr in probs.items():
            if pr < 0:
                raise InvalidParameters(f"negative probability at {o!r}")
            if pr:
                acc[o] += pr
        self._p = dict(acc)
        if check:
            total = sum(self._p.values())
            exact = all(isinstance(v, (int, Fraction)) for v in self._p.values())
            if (total != 1) if exact else abs(float(total) - 1.0) > 1e-12:
                raise InvalidParameters(f"probabilities sum to {float(total)!r}, not 1")

    @classmethod
    def uniform(cls, outcomes) -> "FiniteDistribution":
        outcomes = list(dict.fromkeys(outcomes))
        if not outcomes:
            raise InvalidParameters("empty support")
        w = Fraction(1, len(outcomes))
        return cls({o: w for o in outcomes})

    @property
    def support(self) -> list:
        return sorted(self._p)

    def prob(self, outcome):
        return self._p.get(outcome, 0)

    def items(self):
        return sorted(self._p.items())

    def __len__(self):
        return len(self._p)

    def __eq__(self, other):
        return isinstance(other, FiniteDistribution) and self._p == other._p

    def __repr__(self):
        return f"FiniteDistribution({len(self._p)} outcomes)"

    def marginal(self, coords: Sequence[int]) -> "FiniteDistribution":
        coords = tuple(coords)
        acc = defaultdict(int)
        for o, pr in self._p.items():
            acc[tuple(o[c] for c in coords)] += pr
        return FiniteDistribution(acc, check=False)

    def entropy(self) -> float:
        return entropy(self)


def entropy(d: FiniteDistribution) -> float:
    """Shannon entropy in bits."""
    return math.fsum(-float(p) * math.log2(p) for p in d._p.values())


def cond_entropy(joint: FiniteDistribution, given: Sequence[int], target: Sequence[int] | None = None) -> float:
    """``H(target | given)`` as ``H(target, given) - H(given)``.

    ``target`` defaults to every coordinate not in ``given``.
    """
    given = tuple(given)
    if target is None:
        width = len(next(iter(joint._p)))
        target = [c for c in range(width) if c not in given]
    both = tuple(sorted(set(target) | set(given)))
    return entropy(joint.marginal(both)) - entropy(joint.marginal(given))


# ---------------------------------------------------------------------------
# symmetric edge distributions


class EdgeDistribution:
    """A random edge of ``G`` with uniformly random ordering.

    Stored as probabilities ``q_e`` on unordered edges; every orientation of
    ``e`` then carries ``q_e / k!``.
    """

    __slots__ = ("G", "q", "pruned")

    def __init__(self, G: Hypergraph, q, pruned: int = 0):
        if G.num_edges == 0:
            raise NoEdges("the hypergraph has no edges")
        if isinstance(q, Mapping):
            q = [q.get(e, 0) for e in G.edges]
        q = list(q)
        if len(q) != G.num_edges:
            raise InvalidParameters("need one probability per edge")
        exact = all(isinstance(v, (int, Fraction)) for v in q)
        total = sum(q)
        if any(v < 0 for v in q) or ((total != 1) if exact else abs(float(total) - 1) > 1e-9):
            raise InvalidParameters("edge probabilities must be nonnegative and sum to 1")
        if not exact:
            q = [float(v) / float(total) for v in q]
        self.G = G
        self.q = tuple(q)
        self.pruned = pruned

    @classmethod
    def from_oriented(cls, G: Hypergraph, dist: FiniteDistribution) -> "EdgeDistribution":
        """Validate an arbitrary distribution on oriented edges and collapse it."""
        k = G.k
        per_edge = defaultdict(int)
        for o, pr in dist.items():
            e = tuple(sorted(o))
            if len(o) != k or len(set(o)) != k or not G.has_edge(e):
                raise InvalidParameters(f"{o!r} is not an oriented edge of G")
            per_edge[e] += pr
        kf = math.factorial(k)
        for e, tot in per_edge.items():
            share = tot / kf
            for o in permutations(e):
                pr = dist.prob(o)
                off = abs(pr - share) if isinstance(share, Fraction) else abs(float(pr) - float(share))
                if off > (0 if isinstance(share, Fraction) else 1e-12):
                    raise SymmetryViolation(f"orientation {o} has probability {float(pr)!r}, "
                                            f"expected {float(share)!r}")
        return cls(G, per_edge)

    @property
    def k(self):
        return self.G.k

    @property
    def dist(self) -> FiniteDistribution:
        kf = math.factorial(self.k)
        acc = {}
        for e, qe in zip(self.G.edges, self.q):
            if qe:
                for o in permutations(e):
                    acc[o] = qe / kf
        return FiniteDistribution(acc, check=False)

    def suffix_marginal(self, j: int) -> FiniteDistribution:
        """Law of ``(X_{k-j+1}, ..., X_k)``; equal to any other j coordinates."""
        k = self.k
        share_den = math.comb(k, j) * math.factorial(j)
        acc = defaultdict(int)
        for e, qe in zip(self.G.edges, self.q):
            if not qe:
                continue
            part = qe / share_den
            for sub in combinations(e, j):
                for o in permutations(sub):
                    acc[o] += part
        return FiniteDistribution(acc, check=False)

    def vertex_marginal(self) -> list:
        y = [0] * self.G.n
        for e, qe in zip(self.G.edges, self.q):
            for v in e:
                y[v] += qe / self.k
        return y

    def joint_entropy(self) -> float:
        """``H(X_1..X_k) = log2 k! - sum q_e log2 q_e``."""
        return math.log2(math.factorial(self.k)) + math.fsum(-float(q) * math.log2(q) for q in self.q if q)

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.G.edges], "q": [float(v) for v in self.q]}


def uniform_edge_distribution(G: Hypergraph) -> EdgeDistribution:
    if G.num_edges == 0:
        raise NoEdges("the hypergraph has no edges")
    return EdgeDistribution(G, [Fraction(1, G.num_edges)] * G.num_edges)


def edge_distribution_from_json(G: Hypergraph, data: Mapping) -> EdgeDistribution:
    q = {tuple(sorted(e)): v for e, v in zip(data["edges"], data["q"])}
    unknown = [e for e in q if not G.has_edge(e)]
    if unknown:
        raise InvalidParameters(f"{unknown[0]} is not an edge of G")
    return EdgeDistribution(G, q)


@dataclass
class RatioSequence:
    x: tuple
    joint_entropy: float
    vertex_entropy: float
    suffix_entropies: tuple = field(repr=False, default=())

    @property
    def k(self):
        return len(self.x)

    @property
    def log2_product(self) -> float:
        """``log2 prod x_i``, which equals ``H(X_1..X_k) - k H(X_1)``."""
        return math.fsum(math.log2(v) for v in self.x)

    def product_identity_gap(self) -> float:
        return abs(self.log2_product - (self.joint_entropy - self.k * self.vertex_entropy))

    def to_dict(self) -> dict:
        return {"x": [float(v) for v in self.x], "joint_entropy": self.joint_entropy,
                "vertex_entropy": self.vertex_entropy, "log2_product": self.log2_product}


def ratio_sequence(d, tol: float = 1e-9) -> RatioSequence:
    """``x_i = 2^(H(X_i | X_{i+1..k}) - H(X_i))`` from exact suffix marginals.

    ``d`` is an ``EdgeDistribution`` or a ``(G, FiniteDistribution)`` pair of
    oriented-edge probabilities; the latter is checked for symmetry first.
    """
    if isinstance(d, tuple):
        G, dist = d
        d = EdgeDistribution.from_oriented(G, dist)
    k = d.k
    # H[j] = entropy of the last j coordinates
    H = [0.0] + [entropy(d.suffix_marginal(j)) for j in range(1, k + 1)]
    h1 = H[1]
    x = tuple(2.0 ** (H[k - i + 1] - H[k - i] - h1) for i in range(1, k + 1))
    if abs(x[-1] - 1.0) > tol or x[0] <= 0 or any(a > b + tol for a, b in zip(x, x[1:])):
        raise SymmetryViolation(f"ratio sequence {x} violates 0 < x_1 <= ... <= x_k = 1")
    return RatioSequence(x, H[k], h1, tuple(H))


# ---------------------------------------------------------------------------
# mixture bound


@dataclass
class MixtureResult:
    weights: list
    mixture: FiniteDistribution
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -1e-9 * max(1.0, abs(self.rhs))


def mixture_bound(dists: Sequence[FiniteDistribution], a: int) -> MixtureResult:
    """``sum_i 2^H(X_i) <= a 2^H(Z)`` for (a+1)-wise disjoint supports.

    ``Z`` picks ``X_i`` with probability proportional to ``2^H(X_i)``.
    """
    if a < 1:
        raise InvalidParameters("a must be at least 1")
    if not dists:
        raise InvalidParameters("need at least one distribution")
    seen = defaultdict(int)
    for d in dists:
        for o in d.support:
            seen[o] += 1
            if seen[o] > a:
                raise PreconditionFailure(f"outcome {o!r} lies in {seen[o]} supports, more than a={a}",
                                          witness=o)
    s = [2.0 ** entropy(d) for d in dists]
    total = math.fsum(s)
    w = [si / total for si in s]
    acc = defaultdict(float)
    for wi, d in zip(w, dists):
        for o, pr in d.items():
            acc[o] += wi * float(pr)
    Z = FiniteDistribution(acc, check=False)
    return MixtureResult(w, Z, total, a * 2.0 ** entropy(Z))


# ---------------------------------------------------------------------------
# entropic density


@dataclass
class EntropicResult:
    value: float
    log2_value: float
    distribution: EdgeDistribution
    p: float
    converged: bool
    iterations: int
    starts: int
    seed: int
    pruned: int = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "log2_value": self.log2_value, "p": self.p,
                "converged": self.converged, "iterations": self.iterations,
                "starts": self.starts, "seed": self.seed, "pruned": self.pruned,
                "distribution": self.distribution.to_dict()}


def _objective(logQ, M, k, p):
    """``H(X_1..X_k) - (k/p) H(X_1)`` in bits for each row of log-probabilities."""
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        Q = np.exp(logQ)
        HQ = -np.where(Q > 0, Q * logQ, 0.0).sum(axis=1) / math.log(2)
        Y = Q @ M / k
        HY = -np.where(Y > 0, Y * np.log2(Y), 0.0).sum(axis=1)
    return math.log2(math.factorial(k)) + HQ - (k / p) * HY


def _logsumexp_rows(L):
    m = L.max(axis=1, keepdims=True)
    return L - (m + np.log(np.exp(L - m).sum(axis=1, keepdims=True)))


def entropic_density(G: Hypergraph, p: float, starts: int = 16, seed: int = 0,
                     max_iter: int = 100_000, tol: float = 1e-12, damping: float = 0.5,
                     stall_window: int = 500, stall_tol: float = 1e-7,
                     polish: bool = True) -> EntropicResult:
    """Maximise ``2^(H(X_1..X_k) - (k/p) H(X_1))`` over symmetric edge distributions.

    Works on the unordered-edge probabilities ``q``. The stationarity
    condition says ``q_e`` is proportional to ``prod_{v in e} y_v^(1/p)``
    with ``y_v = P(X_1 = v)``; the iteration moves ``log q`` a fraction
    ``eta`` of the way towards that target, halving ``eta`` whenever the
    objective would drop. Starts: uniform plus ``starts`` Dirichlet(1).

    A start stops when ``max |dq| < tol`` (converged) or when its objective
    has gained less than ``stall_tol`` bits over ``stall_window`` iterations.
    The second case happens near degenerate boundary optima, where the
    weight of a losing edge decays only polynomially; ``converged`` then
    stays false. With ``polish`` the stationarity equations are finally
    solved by Newton's method on a few candidate edge supports, and a
    polished point replaces the iterate when its objective is higher.
    """
    if p <= 0:
        raise InvalidParameters("p must be positive")
    if G.num_edges == 0:
        raise NoEdges("the hypergraph has no edges")
    k, m = G.k, G.num_edges
    M = np.zeros((m, G.n))
    for i, e in enumerate(G.edges):
        M[i, list(e)] = 1.0

    rows = [np.full(m, 1.0 / m)]
    for i in range(starts):
        rows.append(np.random.default_rng([seed, i]).dirichlet(np.ones(m)))
    with np.errstate(divide="ignore"):
        logQ = np.log(np.array(rows))
    vals = _objective(logQ, M, k, p)
    eta = np.full(len(rows), damping)
    done = np.zeros(len(rows), dtype=bool)
    settled = np.zeros(len(rows), dtype=bool)
    checkpoint = vals.copy()
    iters = 0
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        while iters < max_iter and not done.all():
            iters += 1
            idx = np.flatnonzero(~done)
            L = logQ[idx]
            Y = np.exp(L) @ M / k
            # log 0 * 0 would poison the matmul; vertices of weight 0 only
            # meet edges of weight 0, which stay at -inf anyway
            logY = np.where(Y > 0, np.log(np.where(Y > 0, Y, 1.0)), -1e300)
            target = _logsumexp_rows(np.maximum(logY @ M.T, -1e300) / p)
            e = eta[idx].copy()
            newL, newv = L.copy(), vals[idx].copy()
            pending = np.ones(len(idx), dtype=bool)
            for _ in range(60):
                if not pending.any():
                    break
                pi = np.flatnonzero(pending)
                cand = (1 - e[pi, None]) * L[pi] + e[pi, None] * target[pi]
                cand = np.where(np.isfinite(cand), cand, -np.inf)
                cand = _logsumexp_rows(cand)
                cv = _objective(cand, M, k, p)
                ok = cv >= vals[idx][pi] - 1e-15
                newL[pi[ok]] = cand[ok]
                newv[pi[ok]] = cv[ok]
                pending[pi[ok]] = False
                e[pi[~ok]] *= 0.5
            delta = np.abs(np.exp(newL) - np.exp(L)).max(axis=1)
            logQ[idx] = newL
            vals[idx] = newv
            eta[idx] = np.minimum(damping, 2 * e)
            settled[idx[delta < tol]] = True
            done[idx[(delta < tol) | pending]] = True
            if iters % stall_window == 0:
                done |= vals - checkpoint < stall_tol
                checkpoint = vals.copy()

    best = int(np.argmax(vals))
    q = np.exp(logQ[best])
    if polish:
        for thr in (1e-2, 1e-4, 1e-8):
            cand = _newton_stationary(q, q > thr * q.max(), M, k, p)
            if cand is not None:
                with np.errstate(divide="ignore"):
                    cv = _objective(np.log(cand)[None, :], M, k, p)[0]
                if cv > vals[best]:
                    q, vals[best] = cand, cv
                    settled[best] = True
    pruned = int(((q > 0) & (q < PRUNE_BELOW)).sum())
    q[q < PRUNE_BELOW] = 0.0
    q /= q.sum()
    dist = EdgeDistribution(G, q.tolist(), pruned=pruned)
    f = dist.joint_entropy() - (k / p) * _vertex_entropy(dist)
    return EntropicResult(2.0 ** f, f, dist, float(p), bool(settled[best]), iters, len(rows), seed, pruned)


def _newton_stationary(q, support, M, k, p, max_iter=50):
    """Solve ``log q_e - (1/p) sum_{v in e} log y_v = c`` on ``support``."""
    S = np.flatnonzero(support)
    if len(S) == 0:
        return None
    MS = M[S]
    z = np.log(q[S] / q[S].sum())
    c = 0.0

    def residual(z, c):
        qs = np.exp(z)
        y = qs @ MS / k
        with np.errstate(divide="ignore"):
            ly = np.where(y > 0, np.log(np.where(y > 0, y, 1.0)), 0.0)
        r = np.empty(len(S) + 1)
        r[:-1] = z - (MS @ ly) / p - c
        r[-1] = qs.sum() - 1.0
        return r, qs, y

    r, qs, y = residual(z, c)
    for _ in range(max_iter):
        nr = np.linalg.norm(r)
        if not np.isfinite(nr):
            return None
        if nr < 1e-14:
            break
        inv_y = np.where(y > 0, 1.0 / np.where(y > 0, y, 1.0), 0.0)
        # d log y_v / d z_f = q_f M[f, v] / (k y_v)
        dly = (MS * qs[:, None]) * inv_y[None, :] / k
        J = np.zeros((len(S) + 1, len(S) + 1))
        J[:-1, :-1] = np.eye(len(S)) - (MS @ dly.T) / p
        J[:-1, -1] = -1.0
        J[-1, :-1] = qs
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        t, moved = 1.0, False
        for _ in range(30):
            r2, qs2, y2 = residual(z + t * step[:-1], c + t * step[-1])
            if np.linalg.norm(r2) < nr:
                z, c, r, qs, y = z + t * step[:-1], c + t * step[-1], r2, qs2, y2
                moved = True
                break
            t *= 0.5
        if not moved:
            break
    out = np.zeros_like(q)
    out[S] = np.exp(z)
    if not np.all(np.isfinite(out)):
        return None
    return out / out.sum()


def _vertex_entropy(d: EdgeDistribution) -> float:
    return math.fsum(-float(y) * math.log2(y) for y in d.vertex_marginal() if y)


def product_form_identity(G: Hypergraph, x, p: float) -> tuple[float, float]:
    """Both sides of the identity for the product-form distribution
    ``P(v_1..v_k) = prod x_{v_i} / beta``:

        H(X_1..X_k) - (k/p) H(X_1) = log2 beta - (k/p) sum_v y_v log2(x_v^p / y_v).
    """
    x = [float(v) for v in x]
    kf = math.factorial(G.k)
    w = [kf * math.prod(x[v] for v in e) for e in G.edges]
    beta = math.fsum(w)
    if beta <= 0:
        raise InvalidParameters("x vanishes on every edge")
    d = EdgeDistribution(G, [wi / beta for wi in w])
    lhs = d.joint_entropy() - (G.k / p) * _vertex_entropy(d)
    y = d.vertex_marginal()
    rhs = math.log2(beta) - (G.k / p) * math.fsum(
        yv * math.log2(x[v] ** p / yv) for v, yv in enumerate(y) if yv > 0)
    return lhs, rhs
