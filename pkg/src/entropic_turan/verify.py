"""Executable checks of the theorem-level inequalities on concrete instances.

Every check returns a ``CheckReport`` whose ``passed`` flag means
``slack >= -tolerance``. Hypothesis failures of the auxiliary inequalities
are reported, not raised: they describe the input, not a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np

from .entropy import EdgeDistribution, ratio_sequence, uniform_edge_distribution
from .errors import InvalidParameters, PreconditionFailure
from .forests import derive_constraint
from .homs import count_tree_homs, find_hom, is_hom_free
from .hypergraph import Hypergraph, make_complete, make_Fks_partial, make_path, tent_family
from .lagrangian import blowup_density, closed_form_complete, p_spectral

ENTROPY_TOL = 1e-9
OPTIMIZER_TOL = 1e-6


@dataclass
class CheckReport:
    claim: str
    instance: str
    lhs: object
    rhs: object
    slack: object
    tolerance: float
    hypothesis: str = "ok"  # "ok" or "failed"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.hypothesis == "ok" and self.slack >= -self.tolerance

    def to_dict(self) -> dict:
        return {"claim": self.claim, "instance": self.instance, "lhs": _jsonable(self.lhs),
                "rhs": _jsonable(self.rhs), "slack": _jsonable(self.slack),
                "tolerance": self.tolerance, "hypothesis": self.hypothesis,
                "pass": self.passed, "details": _jsonable(self.details)}


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v) if v.denominator != 1 else int(v)
    if isinstance(v, dict):
        return {str(a): _jsonable(b) for a, b in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _describe(G: Hypergraph) -> str:
    return f"k={G.k} n={G.n} m={G.num_edges}"


def require_clique_free(G: Hypergraph, r: int) -> None:
    """Raise unless the graph ``G`` has no homomorphic copy of ``K_{r+1}``."""
    if G.k != 2:
        raise InvalidParameters("expected a graph")
    if r < 1:
        raise InvalidParameters("r must be positive")
    w = find_hom(make_complete(r + 1, 2), G)
    if w is not None:
        raise PreconditionFailure(f"G contains K_{r + 1}", witness=w.map)


# ---------------------------------------------------------------------------
# graph theorems


def check_entropic_turan(G: Hypergraph, r: int, d: EdgeDistribution | None = None) -> CheckReport:
    """``H(X,Y) <= 2 H(X) + log2(1 - 1/r)`` for a symmetric random edge of a
    ``K_{r+1}``-free graph."""
    require_clique_free(G, r)
    d = uniform_edge_distribution(G) if d is None else d
    lhs = d.joint_entropy()
    hx = ratio_sequence(d).vertex_entropy
    rhs = 2 * hx + math.log2(1 - 1 / r)
    return CheckReport("entropic-turan", f"{_describe(G)} r={r}", lhs, rhs, rhs - lhs, ENTROPY_TOL,
                       details={"H_X": hx})


def check_spectral_turan(G: Hypergraph, r: int, T=None,
                         walks: Sequence[int] = (), rho: float | None = None) -> list:
    """``rho^l <= (1-1/r) hom(T, G)`` for a tree ``T`` on ``l`` vertices, plus
    the vertex (``rho <= (1-1/r) n``) and edge (``rho^2 <= (1-1/r) 2m``) forms
    and, for each ``l`` in ``walks``, the walk-count form.

    ``T`` may be a single tree or a list of trees. ``rho`` defaults to the
    p = 2 optimum of the edge polynomial.
    """
    require_clique_free(G, r)
    if rho is None:
        rho = p_spectral(G, 2).value if G.num_edges else 0.0
    c = 1 - Fraction(1, r)
    trees = [("vertex", make_path(1)), ("edge", make_path(2))]
    trees += [(f"walks-{l}", make_path(l)) for l in walks]
    if isinstance(T, Hypergraph):
        T = [T]
    trees += [("tree", t) for t in (T or [])]
    out = []
    for label, tree in trees:
        homs = count_tree_homs(tree, G)
        lhs = rho ** tree.n
        rhs = float(c * homs)
        out.append(CheckReport(f"spectral-turan-{label}", f"{_describe(G)} r={r} l={tree.n}",
                               lhs, rhs, rhs - lhs, OPTIMIZER_TOL * max(1.0, rhs),
                               details={"rho": rho, "homs": homs}))
    return out


def check_pspectral_turan(G: Hypergraph, r: int, p: float, value: float | None = None) -> list:
    """``b_p <= (1-1/r) n^(2-2/p)`` and ``b_p <= (1-1/r)^(1/p) (2m)^(1-1/p)``."""
    if p < 1:
        raise InvalidParameters("the p-spectral bounds need p >= 1")
    require_clique_free(G, r)
    if value is None:
        value = (blowup_density(G).value if p == 1 else p_spectral(G, p).value) if G.num_edges else 0.0
    c = 1 - 1 / r
    n, m = G.n, G.num_edges
    first = c * n ** (2 - 2 / p)
    second = c ** (1 / p) * (2 * m) ** (1 - 1 / p)
    inst = f"{_describe(G)} r={r} p={p}"
    return [CheckReport("pspectral-turan-n", inst, value, first, first - value, OPTIMIZER_TOL * max(1.0, first)),
            CheckReport("pspectral-turan-m", inst, value, second, second - value,
                        OPTIMIZER_TOL * max(1.0, second))]


def star_density(G: Hypergraph, i: int) -> Fraction:
    """``t(S_i, G) = sum_v deg(v)^i / n^(i+1)``."""
    n = G.n
    return Fraction(sum(d ** i for d in G.degrees()), n ** (i + 1))


def check_star_sidorenko(G: Hypergraph, i: int) -> CheckReport:
    """``t(S_i, G) >= t(K_2, G)^i``, exactly."""
    if i < 0:
        raise InvalidParameters("i must be nonnegative")
    if G.k != 2 or G.n == 0:
        raise InvalidParameters("expected a nonempty graph")
    lhs = star_density(G, i)
    rhs = Fraction(2 * G.num_edges, G.n ** 2) ** i
    return CheckReport("star-sidorenko", f"{_describe(G)} i={i}", lhs, rhs, lhs - rhs, 0.0)


def check_star_series(G: Hypergraph, r: int) -> list:
    """The counting argument in exact form.

    With ``A_i`` the event that the i-th random vertex is adjacent to all
    earlier ones, ``sum_i P(A_i) = sum_v 1/(n - deg v)`` and at most ``r``
    events happen together, so the sum is at most ``r``; convexity then gives
    ``t(K_2, G) <= 1 - 1/r``.
    """
    require_clique_free(G, r)
    n = G.n
    total = sum((Fraction(1, n - d) for d in G.degrees()), Fraction(0))
    t = Fraction(2 * G.num_edges, n * n)
    inst = f"{_describe(G)} r={r}"
    return [CheckReport("star-series", inst, total, r, r - total, 0.0),
            CheckReport("density-turan", inst, t, 1 - Fraction(1, r), 1 - Fraction(1, r) - t, 0.0)]


# ---------------------------------------------------------------------------
# auxiliary real inequalities


def _rel_tol(tol, *vals):
    return tol * max([1.0] + [abs(float(v)) for v in vals])


def aux_ineq_72(y: Sequence[float], tol: float = 1e-12) -> CheckReport:
    """Superadditive ``y`` (``y_i + y_j <= y_{i+j}``) has
    ``prod y <= k! (sum y / C(k+1, 2))^k``."""
    k = len(y)
    hyp = all(v >= 0 for v in y) and all(
        y[i - 1] + y[j - 1] <= y[i + j - 1] + _rel_tol(tol, y[i + j - 1])
        for i in range(1, k + 1) for j in range(1, k + 1 - i))
    lhs = math.prod(y)
    rhs = factorial(k) * (sum(y) / comb(k + 1, 2)) ** k
    return CheckReport("aux-superadditive", f"k={k}", lhs, rhs, rhs - lhs, _rel_tol(tol, rhs),
                       "ok" if hyp else "failed")


def _ratio_prod(v, i):
    out = 1
    for j in range(1, i + 1):
        out = out * v[j - 1] / (v[i] - v[j - 1])
    return out


def aux_ineq_76(y: Sequence[float], z: Sequence[float], tol: float = 1e-12) -> CheckReport:
    """If ``prod_{j<=i} y_j/(y_{i+1}-y_j) <= prod_{j<=i} z_j/(z_{i+1}-z_j)`` for all
    ``i < k`` then ``y_1..y_{k-1} <= z_1..z_{k-1} / z_k^(k-1) * y_k^(k-1)``."""
    k = len(y)
    if len(z) != k:
        raise InvalidParameters("y and z must have the same length")
    inc = lambda v: v[0] > 0 and all(a < b for a, b in zip(v, v[1:]))
    hyp = inc(y) and inc(z) and all(
        _ratio_prod(y, i) <= _ratio_prod(z, i) * (1 + tol) for i in range(1, k))
    lhs = math.prod(y[: k - 1])
    rhs = math.prod(z[: k - 1]) / z[-1] ** (k - 1) * y[-1] ** (k - 1)
    return CheckReport("aux-ratio-products", f"k={k}", lhs, rhs, rhs - lhs, _rel_tol(tol, rhs),
                       "ok" if hyp else "failed")


def aux_ineq_85(y: Sequence[float], z: float, tol: float = 1e-12) -> CheckReport:
    """``y_1..y_t <= (sum y_i/(z+i))^t (z+1)..(z+t) / t^t`` for nonnegative inputs."""
    t = len(y)
    hyp = z >= 0 and all(v >= 0 for v in y)
    lhs = math.prod(y)
    rhs = sum(v / (z + i) for i, v in enumerate(y, 1)) ** t * math.prod(z + i for i in range(1, t + 1)) / t ** t
    return CheckReport("aux-weighted-amgm", f"t={t} z={z}", lhs, rhs, rhs - lhs, _rel_tol(tol, rhs),
                       "ok" if hyp else "failed")


def krs_relation(k: int, r: int, s: int) -> bool:
    """``k - s >= sum_{i<s} i/(r-i)``, exactly."""
    if s < 1 or s - 1 >= r:
        return s >= 1 and s - 1 < r
    return k - s >= sum((Fraction(i, r - i) for i in range(1, s)), Fraction(0))


def claim_86(x: Sequence, k: int, r: int, s: int, tol: float = 1e-12) -> CheckReport:
    """``sum_{i<k} x_i/(r-k+i) <= (k-1)/r * x_k`` from the F^(k,s) forest constraints.

    Besides the conclusion, the proof's threshold ``s'`` (largest integer
    with ``k - s' >= sum_{i<s'} i/(r-i)``) and constant ``c`` with
    ``(k-1)/r = (1-c)/(r-s') + 1/(r-s'+1) + ... + 1/(r-1)`` are recomputed
    exactly, together with ``c in (0, 1]`` and the closing identity
    ``k - s' - 1 + c = (1-c) s'/(r-s') + sum_{l<s'} l/(r-l)``.
    """
    if len(x) != k or not (1 <= s < k <= r):
        raise InvalidParameters("need len(x) = k and 1 <= s < k <= r")
    hyp_krs = krs_relation(k, r, s)
    hyp_84 = all(
        x[i - 1] / (r - k + i) <= (x[j] - x[j - 1]) + _rel_tol(tol, x[j])
        for i in range(1, k - s + 1) for j in range(i, k))
    sp = 1
    while sp + 1 < k and krs_relation(k, r, sp + 1):
        sp += 1
    tail = sum((Fraction(1, m) for m in range(r - sp + 1, r)), Fraction(0))
    c = 1 - (Fraction(k - 1, r) - tail) * (r - sp)
    identity = (k - sp - 1 + c) == (1 - c) * Fraction(sp, r - sp) + sum(
        (Fraction(l, r - l) for l in range(1, sp)), Fraction(0))
    lhs = sum(x[i - 1] / (r - k + i) for i in range(1, k))
    rhs = Fraction(k - 1, r) * x[-1] if isinstance(x[-1], Fraction) else (k - 1) / r * x[-1]
    details = {"s_prime": sp, "c": c, "c_in_range": 0 < c <= 1, "identity": identity,
               "krs_relation": hyp_krs, "lemma84": hyp_84}
    hyp = hyp_krs and hyp_84 and sp >= s
    return CheckReport("fks-weighted-sum", f"k={k} r={r} s={s}", lhs, rhs, rhs - lhs, _rel_tol(tol, rhs),
                       "ok" if hyp else "failed", details)


# random inputs that satisfy the hypotheses by construction
# (sufficient generators, not complete ones)


def random_superadditive(k: int, rng, scale: float = 1.0) -> list:
    """``y_n = max_{i+j=n}(y_i + y_j) + slack_n`` with exponential slacks."""
    y = []
    for n in range(1, k + 1):
        base = max((y[i - 1] + y[n - i - 1] for i in range(1, n)), default=0.0)
        y.append(base + float(rng.exponential(scale)))
    return y


def _threshold_76(y, target):
    """Least ``t > y[-1]`` with ``prod_j y_j/(t - y_j) <= target`` by bisection."""
    lo = y[-1]
    hi = y[-1] + 1.0
    while math.prod(v / (hi - v) for v in y) > target:
        hi = y[-1] + 2 * (hi - y[-1])
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if math.prod(v / (mid - v) for v in y) > target:
            lo = mid
        else:
            hi = mid
    return hi


def random_76_instance(k: int, rng) -> tuple:
    """Increasing ``z`` at random, then ``y`` grown one entry at a time at or
    beyond the bisection threshold of each ratio-product hypothesis."""
    z = list(np.cumsum(rng.exponential(1.0, size=k) + 1e-3))
    y = [float(rng.exponential(1.0)) + 1e-3]
    for i in range(1, k):
        t = _threshold_76(y, _ratio_prod(z, i)) * (1 + 1e-9)
        if rng.random() < 0.5:
            t += float(rng.exponential(0.5))
        y.append(t)
    return y, z


def random_krs(rng, max_k: int = 8, max_r: int = 12) -> tuple:
    """Random ``(k, r, s)`` with ``1 <= s < k <= r`` satisfying the relation."""
    while True:
        k = int(rng.integers(2, max_k + 1))
        r = int(rng.integers(k, max_r + 1))
        s = int(rng.integers(1, k))
        if krs_relation(k, r, s):
            return k, r, s


def random_84_sequence(k: int, r: int, s: int, rng) -> list:
    """Ratio sequence obeying ``x_i/(r-k+i) <= x_{j+1} - x_j`` (``i <= k-s``,
    ``i <= j < k``), scaled so that ``x_k = 1``."""
    x = [float(rng.exponential(1.0)) + 1e-3]
    for j in range(1, k):
        need = max(x[i - 1] / (r - k + i) for i in range(1, min(j, k - s) + 1))
        x.append(x[-1] + need * (1 + 1e-9) + (float(rng.exponential(0.3)) if rng.random() < 0.7 else 0.0))
    return [v / x[-1] for v in x]


# ---------------------------------------------------------------------------
# hypergraph Turan bounds


def tent_density_bound(G: Hypergraph, mode: str = "tents", r: int | None = None,
                       s: int | None = None, result=None) -> CheckReport:
    """Blowup density of a hom-free ``G`` against the matching extremal value.

    ``mode="tents"``: forbidden are the partial tents with two parts, target
    ``k!/k^k``, constraints from the two-forest and ``F^(t)`` families.
    ``mode="fks"``: forbidden is ``F^(k,s)_{r+1}`` (which needs the k, r, s
    relation), target ``b(K_r^(k))``, constraints from the ``F^(1..N)`` family.
    The uniform-edge ratio sequence must satisfy every constraint.
    """
    k = G.k
    if mode == "tents":
        forbidden = tent_family(k, 2)
        target = Fraction(factorial(k), k ** k)
        constraints = [derive_constraint("lemma72", i=i, j=j, k=k)
                       for i in range(1, k) for j in range(1, k - i + 1)]
        constraints += [derive_constraint("lemma75", i=i, k=k) for i in range(1, k)]
    elif mode == "fks":
        if r is None or s is None:
            raise InvalidParameters("fks mode needs r and s")
        if not krs_relation(k, r, s):
            raise InvalidParameters(f"k={k}, r={r}, s={s} violate k-s >= sum_(i<s) i/(r-i)")
        forbidden = [make_Fks_partial(k, s, r)]
        target = closed_form_complete(r, k)
        constraints = [derive_constraint("lemma84", i=i, j=j, k=k, r=r, s=s)
                       for i in range(1, k - s + 1) for j in range(i, k)]
    else:
        raise InvalidParameters(f"unknown mode {mode!r}")
    free, witness = is_hom_free(G, forbidden)
    if not free:
        idx, w = witness
        raise PreconditionFailure(f"G admits a homomorphism from forbidden member {idx}", witness=w.map)
    if G.num_edges == 0:
        return CheckReport(f"tent-density-{mode}", _describe(G), 0.0, float(target), float(target),
                           OPTIMIZER_TOL)
    res = blowup_density(G) if result is None else result
    x = ratio_sequence(uniform_edge_distribution(G)).x
    evals = [(c.description, c.evaluate(x, ENTROPY_TOL)) for c in constraints]
    bad = [desc for desc, v in evals if not v.satisfied]
    details = {"constraints_checked": len(evals), "constraints_failed": bad, "ratio_sequence": list(x)}
    slack = float(target) - res.value
    rep = CheckReport(f"tent-density-{mode}", _describe(G), res.value, float(target), slack, OPTIMIZER_TOL,
                      details=details)
    if bad:
        rep.slack = min(slack, -math.inf)
    return rep


# ---------------------------------------------------------------------------
# appendix asymptotics


def _krs_sum(r, upto):
    return sum((Fraction(i, r - i) for i in range(1, upto)), Fraction(0))


def appendix_s_star(k: int, r: int) -> int:
    """Largest ``s`` with ``k - s >= sum_{i<s} i/(r-i)``; 0 if none."""
    if not (1 <= k <= r):
        raise InvalidParameters("need 1 <= k <= r")
    s, acc = 0, Fraction(0)
    # acc holds sum_{i < s+1} i/(r-i) when testing s+1
    while s + 1 <= k and s < r:
        cand = s + 1
        if cand > 1:
            acc += Fraction(cand - 1, r - cand + 1)
        if k - cand >= acc:
            s = cand
        else:
            break
    return s


def appendix_r_star(k: int, d: int) -> int:
    """Smallest ``r >= k`` such that ``s = k - d`` satisfies the relation."""
    if not (1 <= d < k):
        raise InvalidParameters("need 1 <= d < k")
    s = k - d

    def ok(r):
        return d >= _krs_sum(r, s)

    lo, hi = k, max(k, 2)
    while not ok(hi):
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def appendix_diagnostics(k: int, r: int | None = None, d: int | None = None) -> dict:
    """Ratios of the exact thresholds to their asymptotic predictions."""
    out = {"k": k}
    if r is not None:
        s = appendix_s_star(k, r)
        C = r / k
        out.update(r=r, s_star=s, s_over_k=s / k, s_ratio_to_asymptote=s / (C * (1 - math.exp(-1 / C)) * k))
    if d is not None:
        rs = appendix_r_star(k, d)
        out.update(d=d, r_star=rs, r_ratio_to_asymptote=rs * 2 * d / k ** 2)
    return out
