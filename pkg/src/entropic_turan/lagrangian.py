"""Blowup density, p-spectral radius and related closed forms.

The objective throughout is the oriented-edge polynomial

    P(x) = sum over oriented edges (v_1..v_k) of x_{v_1} ... x_{v_k}
         = k! * sum over edges e of prod_{v in e} x_v,

maximised over nonnegative ``x`` with ``sum x_v^p = 1``. ``p = 1`` gives the
blowup density ``b(G) = k! L(G)``; ``p = 2`` on a graph gives the adjacency
spectral radius.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import InvalidParameters
from .hypergraph import Hypergraph

NUMERICAL_CERTIFICATE = "numerical lower bound certificate"
EXACT_CERTIFICATE = "exact (clique supports)"


@dataclass
class OptResult:
    value: float
    weights: np.ndarray
    p: float
    starts: int
    converged: bool
    iterations: int
    seed: int
    kkt_residual: float = float("nan")
    certificate: str = NUMERICAL_CERTIFICATE
    exact_value: Fraction | None = None
    history: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "weights": [float(w) for w in self.weights],
            "p": float(self.p),
            "starts": int(self.starts),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "seed": int(self.seed),
            "kkt_residual": float(self.kkt_residual),
            "certificate": self.certificate,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
        }


class EdgePolynomial:
    """Vectorised evaluation of the oriented-edge polynomial of a hypergraph."""

    def __init__(self, G: Hypergraph):
        self.G = G
        self.k = G.k
        self.n = G.n
        self.scale = float(factorial(G.k))
        self.E = np.array(G.edges, dtype=np.intp).reshape(-1, G.k)
        m = len(self.E)
        # scatter matrix: (edge, position) -> vertex
        self.scatter = np.zeros((m * self.k, self.n))
        if m:
            self.scatter[np.arange(m * self.k), self.E.reshape(-1)] = 1.0

    def value(self, X):
        X = np.atleast_2d(X)
        if len(self.E) == 0:
            return np.zeros(len(X))
        return self.scale * X[:, self.E].prod(axis=2).sum(axis=1)

    def gradient(self, X):
        X = np.atleast_2d(X)
        s = len(X)
        if len(self.E) == 0:
            return np.zeros_like(X)
        vals = X[:, self.E]  # s x m x k
        others = np.empty_like(vals)
        for j in range(self.k):
            others[:, :, j] = np.prod(np.delete(vals, j, axis=2), axis=2)
        return self.scale * others.reshape(s, -1) @ self.scatter

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        H = np.zeros((self.n, self.n))
        if len(self.E) == 0 or self.k < 2:
            return H
        vals = x[self.E]
        for a, b in itertools.permutations(range(self.k), 2):
            rest = [j for j in range(self.k) if j not in (a, b)]
            contrib = np.prod(vals[:, rest], axis=1) if rest else np.ones(len(self.E))
            np.add.at(H, (self.E[:, a], self.E[:, b]), contrib)
        return self.scale * H


def _normalize_p(X, p):
    norms = (X ** p).sum(axis=-1, keepdims=True) ** (1.0 / p)
    return X / norms


def kkt_residual(G: Hypergraph, x, p: float) -> float:
    """Largest violation of the first-order conditions at ``x`` on the p-sphere.

    On the support, ``grad_v = mu p x_v^(p-1)`` with ``mu = k P(x) / p``;
    off the support ``grad_v <= mu`` when ``p = 1`` and ``grad_v = 0`` when
    ``p > 1``; for ``p < 1`` the boundary imposes nothing.
    """
    poly = EdgePolynomial(G)
    x = np.asarray(x, dtype=float)
    val = poly.value(x)[0]
    g = poly.gradient(x)[0]
    mu = G.k * val / p
    # weights that decayed geometrically towards zero count as off-support
    on = x > 1e-8 * x.max() if x.size else x > 0
    res = 0.0
    if on.any():
        res = float(np.max(np.abs(g[on] - mu * p * x[on] ** (p - 1))))
    off = g[~on]
    if off.size and p == 1:
        res = max(res, float(np.max(np.maximum(off - mu, 0.0))))
    elif off.size and p > 1:
        res = max(res, float(np.max(off)))
    return res


def _ascent(poly, X, p, max_iter, tol, trace=False, stall_window=500, stall_tol=1e-9):
    """Monotone multiplicative ascent on the p-sphere, all starts at once.

    With ``u = x^p`` (a probability vector) and ``a_v = x_v grad_v / (k P)``
    (another one, by Euler's identity), the step is ``u <- u^(1-eta) a^eta``
    renormalised. Its first-order gain is ``(k/p) eta (KL(a|u) + KL(u|a)) >= 0``,
    so halving ``eta`` until the objective does not drop always terminates;
    fixed points are exactly the interior KKT points. For ``p = 1`` and
    ``eta = 1`` this is the Baum-Eagon update.

    Near degenerate optima the ascent is only polynomially fast, so a start
    also stops once its relative gain over ``stall_window`` iterations falls
    below ``stall_tol``; the Newton polish takes over from there.
    """
    k = poly.k
    X = _normalize_p(np.asarray(X, dtype=float), p)
    vals = poly.value(X)
    eta = np.ones(len(X))
    active = vals > 0
    done = ~active
    iters = 0
    checkpoint = vals.copy()
    history = [vals.copy()] if trace else []
    with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
        while iters < max_iter and not done.all():
            iters += 1
            idx = np.flatnonzero(~done)
            Xa, va = X[idx], vals[idx]
            g = poly.gradient(Xa)
            U = Xa ** p
            A = Xa * g / (k * va[:, None])
            e = eta[idx].copy()
            pending = np.ones(len(idx), dtype=bool)
            newX = Xa.copy()
            newv = va.copy()
            for _ in range(60):
                if not pending.any():
                    break
                pi = np.flatnonzero(pending)
                Un = U[pi] ** (1.0 - e[pi, None]) * A[pi] ** e[pi, None]
                Un /= Un.sum(axis=1, keepdims=True)
                cand = Un ** (1.0 / p)
                cv = poly.value(cand)
                ok = cv >= va[pi] * (1 - 1e-15)
                good = pi[ok]
                newX[good] = cand[ok]
                newv[good] = cv[ok]
                pending[good] = False
                e[pi[~ok]] *= 0.5
            # starts whose line search failed stay put and are declared stuck
            stuck = pending
            rel = np.abs(newv - va) / np.maximum(np.abs(va), 1e-300)
            X[idx] = newX
            vals[idx] = newv
            eta[idx] = np.minimum(1.0, e * 2.0)
            finished = (rel < tol) | stuck
            done[idx[finished]] = True
            if iters % stall_window == 0:
                done |= (vals - checkpoint) <= stall_tol * np.abs(vals)
                checkpoint = vals.copy()
            if trace:
                history.append(vals.copy())
    return X, vals, iters, bool(done.all()), history


def _newton_polish(poly, x, p, support, max_iter=60):
    """Solve the KKT system restricted to ``support`` by damped Gauss-Newton."""
    S = np.flatnonzero(support)
    if len(S) == 0:
        return None
    k = poly.k
    y = np.zeros(poly.n)
    y[S] = np.maximum(x[S], 1e-300)
    y = _normalize_p(y[None, :], p)[0]
    mu = k * poly.value(y)[0] / p

    def residual(y, mu):
        g = poly.gradient(y)[0]
        r = np.empty(len(S) + 1)
        r[:-1] = g[S] - mu * p * y[S] ** (p - 1)
        r[-1] = (y[S] ** p).sum() - 1.0
        return r

    with np.errstate(all="ignore"):
        r = residual(y, mu)
        for _ in range(max_iter):
            nr = np.linalg.norm(r)
            if not np.isfinite(nr):
                return None
            if nr < 1e-15:
                break
            H = poly.hessian(y)[np.ix_(S, S)]
            J = np.zeros((len(S) + 1, len(S) + 1))
            J[:-1, :-1] = H - np.diag(mu * p * (p - 1) * y[S] ** (p - 2))
            J[:-1, -1] = -p * y[S] ** (p - 1)
            J[-1, :-1] = p * y[S] ** (p - 1)
            step = np.linalg.lstsq(J, -r, rcond=None)[0]
            t = 1.0
            improved = False
            for _ in range(30):
                y2 = y.copy()
                y2[S] = y[S] + t * step[:-1]
                mu2 = mu + t * step[-1]
                if (y2[S] > 0).all():
                    r2 = residual(y2, mu2)
                    if np.linalg.norm(r2) < nr:
                        y, mu, r = y2, mu2, r2
                        improved = True
                        break
                t *= 0.5
            if not improved:
                break
    if not np.all(np.isfinite(y)) or (y < 0).any():
        return None
    return _normalize_p(y[None, :], p)[0]


def _starts(G, p, n_random, seed, edge_starts):
    n = G.n
    rows = [np.full(n, 1.0)]
    for i in range(n_random):
        rng = np.random.default_rng([seed, i])
        rows.append(rng.dirichlet(np.ones(n)))
    if edge_starts:
        edges = list(G.edges)
        if len(edges) > edge_starts:
            rng = np.random.default_rng([seed, n_random])
            pick = rng.choice(len(edges), size=edge_starts, replace=False)
            edges = [edges[i] for i in sorted(pick)]
        for e in edges:
            row = np.full(n, 1e-4 / n)
            row[list(e)] += 1.0
            rows.append(row)
    X = np.array(rows)
    X /= X.sum(axis=1, keepdims=True)
    return X ** (1.0 / p)


def _optimize(G, p, starts, seed, max_iter, tol, edge_starts, polish, trace):
    if p <= 0:
        raise InvalidParameters("p must be positive")
    n = G.n
    if G.num_edges == 0:
        w = np.zeros(n)
        if n:
            w[:] = n ** (-1.0 / p)
        return OptResult(0.0, w, p, 0, True, 0, seed, 0.0)
    poly = EdgePolynomial(G)
    X0 = _starts(G, p, starts, seed, edge_starts)
    X, vals, iters, converged, history = _ascent(poly, X0, p, max_iter, tol, trace)
    order = np.argsort(-vals, kind="stable")
    best_x, best_v = X[order[0]].copy(), float(vals[order[0]])
    if polish:
        tried = set()
        for i in order[: min(len(order), 8)]:
            x = X[i]
            u = x ** p
            for thr in (1e-3, 1e-6, 1e-10, 0.0):
                support = u > thr * u.max()
                key = support.tobytes()
                if key in tried:
                    continue
                tried.add(key)
                y = _newton_polish(poly, x, p, support)
                if y is None:
                    continue
                v = float(poly.value(y)[0])
                if v > best_v:
                    best_x, best_v = y, v
    res = OptResult(best_v, best_x, p, len(X0), converged, iters, seed)
    res.kkt_residual = kkt_residual(G, best_x, p)
    if trace:
        res.history = [h.tolist() for h in history]
    return res


def p_spectral(G: Hypergraph, p: float, starts: int = 32, seed: int = 0, max_iter: int = 100_000,
               tol: float = 1e-12, edge_starts: int = 64, polish: bool = True,
               trace: bool = False) -> OptResult:
    """Best found maximum of the oriented-edge polynomial over the nonnegative p-sphere.

    Multistart (uniform start, ``starts`` Dirichlet(1) starts and one start
    concentrated on each of up to ``edge_starts`` edges) monotone ascent,
    followed by a Newton solve of the first-order conditions on the
    identified support. For k >= 3 the result is a lower bound, not a
    certificate of global optimality.
    """
    return _optimize(G, float(p), starts, seed, max_iter, tol, edge_starts, polish, trace)


def blowup_density(G: Hypergraph, starts: int = 32, seed: int = 0, exact: bool = True,
                   **kwargs) -> OptResult:
    """Blowup density ``b(G) = k! L(G)``, i.e. the ``p = 1`` case.

    For graphs with at most 12 vertices the Motzkin-Straus value
    ``1 - 1/omega`` is also computed exactly; the better of the two weight
    vectors is returned and ``exact_value`` is filled in.
    """
    res = _optimize(G, 1.0, starts, seed, kwargs.pop("max_iter", 100_000), kwargs.pop("tol", 1e-12),
                    kwargs.pop("edge_starts", 64), kwargs.pop("polish", True), kwargs.pop("trace", False))
    if exact and G.k == 2 and 0 < G.n <= 12 and G.num_edges:
        clique = max_clique(G)
        w = len(clique)
        res.exact_value = Fraction(w - 1, w)
        x = np.zeros(G.n)
        x[list(clique)] = 1.0 / w
        v = float(EdgePolynomial(G).value(x)[0])
        if v >= res.value:
            res.value, res.weights = v, x
            res.kkt_residual = kkt_residual(G, x, 1.0)
        res.certificate = EXACT_CERTIFICATE
    return res


def max_clique(G: Hypergraph) -> tuple[int, ...]:
    """A maximum clique of a small graph (brute force over vertex subsets)."""
    if G.k != 2:
        raise InvalidParameters("max_clique expects a graph")
    nb = G.neighbors()
    best = ()

    def grow(clique, cand):
        nonlocal best
        if len(clique) > len(best):
            best = tuple(clique)
        for v in sorted(cand):
            if len(clique) + len(cand) <= len(best):
                return
            grow(clique + [v], {w for w in cand if w in nb[v] and w > v})

    grow([], set(range(G.n)))
    return best


def closed_form_complete(r: int, k: int) -> Fraction:
    """Exact ``b(K_r^(k)) = prod_{i<k} (1 - i/r) = k! C(r,k) / r^k``."""
    if k < 1 or k > r:
        raise InvalidParameters(f"need 1 <= k <= r, got k={k}, r={r}")
    return Fraction(factorial(k) * comb(r, k), r ** k)


def adjacency_spectral_radius(G: Hypergraph, tol: float = 1e-10, max_squarings: int = 64) -> float:
    """Largest adjacency eigenvalue of a graph by shifted power iteration.

    The shift ``A + I`` keeps the top eigenvalue dominant on bipartite
    graphs. Repeated squaring of the normalised matrix stands in for
    ``2^j`` power steps; the answer is the Rayleigh quotient of the
    resulting positive vector, refined by plain power steps until it moves
    by less than ``tol``.
    """
    if G.k != 2:
        raise InvalidParameters("adjacency spectral radius needs a 2-graph")
    if G.num_edges == 0:
        return 0.0
    A = G.adjacency_matrix()
    B = A + np.eye(G.n)
    M = B / np.abs(B).max()
    for _ in range(max_squarings):
        M2 = M @ M
        M2 /= np.abs(M2).max()
        if np.abs(M2 - M).max() < 1e-15:
            M = M2
            break
        M = M2
    v = M @ np.ones(G.n)
    v /= np.linalg.norm(v)
    rho = float(v @ A @ v)
    for _ in range(10_000):
        w = B @ v
        w /= np.linalg.norm(w)
        new = float(w @ A @ w)
        v = w
        if abs(new - rho) < tol:
            rho = new
            break
        rho = new
    return rho
