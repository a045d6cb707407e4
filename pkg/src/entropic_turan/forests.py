"""Partial forests, the sampled homomorphism built along a forest, support
disjointness certificates for forest families, and the ratio-sequence
inequalities those families imply.

A partial k-graph ``F`` with a linear order is a partial forest when, for
every vertex ``v``, the faces whose largest vertex is ``v`` have a unique
maximal element ``e_v``. The forest sequence counts vertices by ``|e_v|``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .entropy import EdgeDistribution, FiniteDistribution, entropy, ratio_sequence
from .errors import InvalidParameters, NotAForest, NotCertified, TooLarge
from .homs import find_hom
from .hypergraph import (Hypergraph, PartialHypergraph, extend, make_clique_pairs_partial,
                         make_Fks_partial, tent_family)

MATERIALIZE_LIMIT = 10 ** 7
SUBFAMILY_LIMIT = 10 ** 5


@dataclass(frozen=True)
class PartialForest:
    F: PartialHypergraph
    order: tuple  # vertices from smallest to largest
    maxedge: dict = field(hash=False, compare=False)
    forest_seq: tuple = ()

    @property
    def k(self):
        return self.F.k

    @property
    def n(self):
        return self.F.n


def validate_forest(F: PartialHypergraph, order: Sequence[int] | None = None) -> PartialForest:
    """Check the unique-maximal-face condition and compute the forest sequence.

    The faces with top vertex ``v`` all lie inside their union, so they have a
    unique maximal element exactly when that union is itself a face.
    """
    order = tuple(range(F.n)) if order is None else tuple(order)
    if sorted(order) != list(range(F.n)):
        raise InvalidParameters("order must list every vertex exactly once")
    rank = {v: i for i, v in enumerate(order)}
    union = defaultdict(set)
    for f in F.maximal_faces:
        for v in f:
            union[v].update(u for u in f if rank[u] <= rank[v])
    maxedge = {}
    seq = [0] * F.k
    for v in order:
        e = union[v] or {v}
        if not F.is_face(e):
            raise NotAForest(f"vertex {v}: faces topped by it have no unique maximal face "
                             f"(their union {sorted(e)} is not a face)", vertex=v)
        e = tuple(sorted(e, key=rank.__getitem__))
        maxedge[v] = e
        seq[len(e) - 1] += 1
    return PartialForest(F, order, maxedge, tuple(seq))


def forest_from_faces(k: int, n: int, faces, order=None) -> PartialForest:
    return validate_forest(PartialHypergraph(k, n, faces), order)


def random_forest(k: int, n: int, rng) -> PartialForest:
    """Grow a partial forest vertex by vertex in label order.

    Vertex ``v`` picks a random existing face ``S`` with ``|S| <= k-1`` (possibly
    empty) and adds the face ``S + {v}``; such a complex is always a forest.
    """
    faces = []
    for v in range(n):
        size = int(rng.integers(0, min(k - 1, v) + 1))
        if size and faces:
            base = faces[int(rng.integers(len(faces)))]
            size = min(size, len(base))
            S = tuple(sorted(rng.choice(base, size=size, replace=False).tolist()))
        else:
            S = ()
        faces.append(S + (v,))
    return forest_from_faces(k, n, faces)


# ---------------------------------------------------------------------------
# sampled homomorphism


@dataclass
class SampledHom:
    joint: FiniteDistribution
    entropy: float
    predicted: float
    faces_match: bool
    mismatched_face: tuple | None = None

    @property
    def entropy_gap(self) -> float:
        return abs(self.entropy - self.predicted)


def sampled_hom_distribution(PF: PartialForest, d: EdgeDistribution, check_faces: bool = True) -> SampledHom:
    """Exact law of the random homomorphism ``F -> G`` built along the forest order.

    Vertex ``v`` is drawn given the images of ``e_v - {v}`` so that the image
    of ``e_v`` has the law of the last ``|e_v|`` coordinates of the random
    edge. Outcomes are tuples indexed by the vertex labels of ``F``.
    """
    if PF.k != d.k:
        raise InvalidParameters("forest and edge distribution have different uniformities")
    nG = d.G.n
    if nG ** PF.n > MATERIALIZE_LIMIT:
        raise TooLarge(f"{nG}^{PF.n} joint outcomes exceed the limit {MATERIALIZE_LIMIT}")
    suffix = {j: dict(d.suffix_marginal(j).items()) for j in range(1, d.k + 1)}
    suffix[0] = {(): 1}
    nb = [set() for _ in range(nG)]
    for e in d.G.edges:
        for v in e:
            nb[v].update(e)

    slots = {}
    states = {(): Fraction(1) if _exact(d) else 1.0}
    for v in PF.order:
        e = PF.maxedge[v]
        S = [u for u in e if u != v]
        m = len(e)
        nxt = defaultdict(int)
        for state, pr in states.items():
            img = tuple(state[slots[u]] for u in S)
            den = suffix[m - 1].get(img)
            if not den:
                continue
            cands = range(nG) if not img else set.intersection(*(nb[w] for w in img)) - set(img)
            for w in cands:
                num = suffix[m].get(img + (w,))
                if num:
                    nxt[state + (w,)] += pr * num / den
        slots[v] = len(slots)
        states = nxt
    joint = FiniteDistribution({tuple(s[slots[u]] for u in range(PF.n)): p for s, p in states.items()},
                               check=False)
    H = entropy(joint)
    rs = ratio_sequence(d)
    k = d.k
    predicted = PF.n * rs.vertex_entropy + math.fsum(
        PF.forest_seq[k - i] * math.log2(rs.x[i - 1]) for i in range(1, k + 1))
    ok, bad = True, None
    if check_faces:
        ok, bad = _faces_match(PF, joint, d)
    return SampledHom(joint, H, predicted, ok, bad)


def _exact(d: EdgeDistribution) -> bool:
    return all(isinstance(q, (int, Fraction)) for q in d.q)


def _faces_match(PF, joint, d):
    exact = _exact(d)
    cache = {}
    for face in sorted(PF.F.faces()):
        j = len(face)
        if j not in cache:
            cache[j] = dict(d.suffix_marginal(j).items())
        want = cache[j]
        got = dict(joint.marginal(face).items())
        if exact:
            if got != want:
                return False, face
        else:
            keys = set(got) | set(want)
            if any(abs(float(got.get(o, 0)) - float(want.get(o, 0))) > 1e-12 for o in keys):
                return False, face
    return True, None


def hom_support(joint: FiniteDistribution) -> set:
    return set(joint.support)


# ---------------------------------------------------------------------------
# named families


@dataclass
class ForestFamily:
    name: str
    params: dict
    members: list
    forbidden: list
    claimed_a: int
    certified_a: int | None = None
    labels: list = field(default_factory=list)

    @property
    def k(self):
        return self.members[0].k

    @property
    def n(self):
        return self.members[0].n


def lemma72_family(i: int, j: int, k: int) -> ForestFamily:
    """Two forests on ``v_1..v_k, w`` (labels ``0..k-1``, ``k``).

    ``F1``: ``{v_1..v_k}`` and ``{v_{i+1}..v_k, w}``;
    ``F2``: ``{v_1..v_k}`` and ``{v_1..v_{k-j}, w}``.
    Their union holds a partial ``(i, k-i)``-tent with apex ``w``.
    """
    if i < 1 or j < 1 or i + j > k:
        raise InvalidParameters("need i, j >= 1 and i + j <= k")
    base = tuple(range(k))
    w = k
    F1 = forest_from_faces(k, k + 1, [base, tuple(range(i, k)) + (w,)])
    F2 = forest_from_faces(k, k + 1, [base, tuple(range(k - j)) + (w,)])
    return ForestFamily("lemma72", {"i": i, "j": j, "k": k}, [F1, F2], tent_family(k, 2), 1,
                        labels=["F1", "F2"])


def _t_vectors(i, N):
    """All ``1 = t_0 < t_1 < ... < t_i <= N`` (returned without ``t_0``)."""
    return list(itertools.combinations(range(2, N + 1), i))


def lemma75_forest(i: int, k: int, N: int, t: Sequence[int]) -> PartialForest:
    """``F^(t)`` on ``v_1..v_{k-i-1}`` (labels ``0..k-i-2``) and ``w_1..w_N``
    (label of ``w_m`` is ``k-i-2+m``), ordered ``v's < w_N < ... < w_1``.

    Spanned by ``{w_m, w_{t_{j+1}}, ..., w_{t_i}} + {v's}`` for
    ``t_j <= m < t_{j+1}``, with ``t_0 = 1`` and ``t_{i+1} = N + 1``.
    """
    nv = k - i - 1
    t = (1,) + tuple(t) + (N + 1,)
    if len(t) != i + 2 or any(a >= b for a, b in zip(t, t[1:])):
        raise InvalidParameters(f"need 1 < t_1 < ... < t_i <= N, got {t[1:-1]}")
    vs = tuple(range(nv))

    def w(m):
        return nv + m - 1

    faces = []
    for j in range(i + 1):
        tail = tuple(w(t[l]) for l in range(j + 1, i + 1))
        for m in range(t[j], t[j + 1]):
            faces.append(vs + (w(m),) + tail)
    order = list(vs) + [w(m) for m in range(N, 0, -1)]
    return forest_from_faces(k, nv + N, faces, order)


def lemma75_family(i: int, k: int, N: int = 4, t_vectors=None) -> ForestFamily:
    """All ``F^(t)``; pairwise unions contain a partial tent with two parts."""
    if not 1 <= i <= k - 1:
        raise InvalidParameters("need 1 <= i <= k-1")
    if N < i + 1:
        raise InvalidParameters("need N >= i + 1 so that some t exists")
    ts = _t_vectors(i, N) if t_vectors is None else [tuple(t) for t in t_vectors]
    members = [lemma75_forest(i, k, N, t) for t in ts]
    return ForestFamily("lemma75", {"i": i, "k": k, "N": N}, members, tent_family(k, 2), 1,
                        labels=[list(t) for t in ts])


def thm81_family(k: int, r: int, i: int, N: int = 4) -> ForestFamily:
    """The ``F^(t)`` forests again, now against the clique-with-pairs pattern:
    any ``C(r-k+i, i) + 1`` of them must already force it."""
    if r < k:
        raise InvalidParameters("need r >= k")
    fam = lemma75_family(i, k, N)
    fam.name = "thm81"
    fam.params = {"k": k, "r": r, "i": i, "N": N}
    fam.forbidden = [make_clique_pairs_partial(k, r)]
    fam.claimed_a = math.comb(r - k + i, i)
    return fam


def lemma84_forest(i: int, j: int, k: int, N: int, t: int) -> PartialForest:
    """``F^(t)`` on ``v_1..v_{k-i}`` (labels ``0..k-i-1``) and ``w_1..w_N``
    (label ``k-i-1+m``), ordered ``v's < w_N < ... < w_1``.

    Spanned by ``{v_1..v_{k-i}, w_t}``, ``{v_1..v_{k-j-1}, w_m, w_t}`` for
    ``m < t`` and ``{v_1..v_{k-j-1}, w_m}`` for ``m > t``.
    """
    nv = k - i

    def w(m):
        return nv + m - 1

    vs = tuple(range(nv))
    short = tuple(range(k - j - 1))
    faces = [vs + (w(t),)]
    faces += [short + (w(m), w(t)) for m in range(1, t)]
    faces += [short + (w(m),) for m in range(t + 1, N + 1)]
    order = list(vs) + [w(m) for m in range(N, 0, -1)]
    return forest_from_faces(k, nv + N, faces, order)


def lemma84_family(i: int, j: int, k: int, r: int, s: int | None = None, N: int = 4) -> ForestFamily:
    """``F^(1..N)``; any ``r-k+i+1`` of them force ``F^(k,s)_{r+1}`` with ``s = k-i``
    by default (any ``s >= k-i`` works as well)."""
    s = k - i if s is None else s
    if not (1 <= i <= k - s and i <= j < k and s < k <= r):
        raise InvalidParameters("need 1 <= i <= k-s, i <= j < k and s < k <= r")
    members = [lemma84_forest(i, j, k, N, t) for t in range(1, N + 1)]
    return ForestFamily("lemma84", {"i": i, "j": j, "k": k, "r": r, "s": s, "N": N}, members,
                        [make_Fks_partial(k, s, r)], r - k + i, labels=list(range(1, N + 1)))


FAMILIES = {"lemma72": lemma72_family, "lemma75": lemma75_family,
            "thm81": thm81_family, "lemma84": lemma84_family}


# ---------------------------------------------------------------------------
# certification


def forest_union(members: Sequence[PartialForest]) -> PartialHypergraph:
    k, n = members[0].k, members[0].n
    if any(m.n != n for m in members):
        raise InvalidParameters("members must share the vertex set")
    faces = [f for m in members for f in m.F.maximal_faces]
    return PartialHypergraph(k, n, faces)


def _forced(union, forbidden, G):
    if G is not None:
        # a tuple in every support is a homomorphism from the union into G
        return find_hom(union, G) is None
    target = extend(union)
    return any(find_hom(F, target) is not None for F in forbidden)


def certify_disjointness(fam: ForestFamily, forbidden=None, G: Hypergraph | None = None,
                         limit: int = SUBFAMILY_LIMIT) -> int:
    """Smallest ``a`` such that every ``a+1`` members have a forced union.

    Without ``G`` a union is forced when its extension receives a
    homomorphism from a forbidden member, so the supports are (a+1)-wise
    disjoint on every forbidden-hom-free host. With ``G`` the condition is
    checked against that host directly. Forcing is inherited by larger
    subfamilies, so ``a`` is found by increasing it one step at a time.
    """
    forbidden = fam.forbidden if forbidden is None else forbidden
    members = fam.members
    total = 0
    a = 1
    while a + 1 <= len(members):
        count = math.comb(len(members), a + 1)
        total += count
        if total > limit:
            raise NotCertified(f"more than {limit} subfamilies to check (reached a={a})")
        if all(_forced(forest_union([members[x] for x in sub]), forbidden, G)
               for sub in itertools.combinations(range(len(members)), a + 1)):
            break
        a += 1
    fam.certified_a = a
    return a


def support_overlap(supports: Sequence[set]) -> int:
    """Largest number of supports sharing one outcome."""
    counts = defaultdict(int)
    for s in supports:
        for o in s:
            counts[o] += 1
    return max(counts.values(), default=0)


# ---------------------------------------------------------------------------
# derived constraints


@dataclass
class ConstraintValue:
    lhs: object
    rhs: object
    slack: object
    status: str  # "ok", "violated" or "divergent"

    @property
    def satisfied(self) -> bool:
        return self.status == "ok"


@dataclass
class DerivedConstraint:
    family: str
    params: dict
    description: str
    provenance: str
    _lhs: Callable = field(repr=False)
    rhs: object
    _guard: Callable = field(repr=False, default=None)
    _truncated: Callable = field(repr=False, default=None)

    def evaluate(self, x: Sequence, tol: float = 0.0) -> ConstraintValue:
        """Evaluate on ``x = (x_1, ..., x_k)``; exact when ``x`` holds Fractions."""
        exact = all(isinstance(v, (int, Fraction)) for v in x)
        if self._guard is not None and not self._guard(x, 0 if exact else 1e-12):
            return ConstraintValue(math.inf, self.rhs, -math.inf, "divergent")
        lhs = self._lhs(x)
        slack = self.rhs - lhs
        return ConstraintValue(lhs, self.rhs, slack, "ok" if slack >= -tol else "violated")

    def truncated_lhs(self, x: Sequence, N: int):
        """Left side of the finite-N inequality the limit came from."""
        if self._truncated is None:
            return self._lhs(x)
        return self._truncated(x, N)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params, "description": self.description,
                "provenance": self.provenance, "rhs": _num(self.rhs)}


def _num(v):
    return str(v) if isinstance(v, Fraction) else v


def _ratio_product(x, i):
    out = 1
    for j in range(1, i + 1):
        out = out * x[j - 1] / (x[i] - x[j - 1])
    return out


def _guard_below(i):
    return lambda x, eps: all(x[j - 1] < x[i] - eps for j in range(1, i + 1))


def _lemma75_truncated(i):
    def f(x, N):
        # sum over delta_1..delta_i >= 1 with sum <= N - 1 of prod (x_j/x_{i+1})^delta_j
        ratios = [x[j - 1] / x[i] for j in range(1, i + 1)]
        # dp[s] = total weight of compositions with running sum s
        dp = {0: 1}
        for rj in ratios:
            nxt = defaultdict(int)
            for s, wgt in dp.items():
                p = rj
                for d in range(1, N - s):
                    nxt[s + d] += wgt * p
                    p = p * rj
            dp = nxt
        return sum(dp.values())
    return f


def derive_constraint(family: str, **params) -> DerivedConstraint:
    """Closed-form limit of the inequality a named forest family yields.

    lemma72 (i, j, k):    x_i + x_j <= x_{i+j}
    lemma75 (i, k):       prod_{j<=i} x_j / (x_{i+1} - x_j) <= 1
    thm81 (k, r, i):      same product <= C(r-k+i, i)
    lemma84 (i, j, k, r): x_i / (r-k+i) <= x_{j+1} - x_j

    The product forms need ``x_j < x_{i+1}`` for the geometric series to
    converge; otherwise the evaluation reports "divergent".
    """
    if family == "lemma72":
        i, j, k = params["i"], params["j"], params["k"]
        if i < 1 or j < 1 or i + j > k:
            raise InvalidParameters("need i, j >= 1 and i + j <= k")
        return DerivedConstraint(
            family, {"i": i, "j": j, "k": k}, f"x_{i} + x_{j} <= x_{i + j}",
            "forests {v1..vk},{v_(i+1)..vk,w} and {v1..vk},{v1..v_(k-j),w}; disjoint supports "
            "since the union holds a partial (i,k-i)-tent",
            lambda x: x[i - 1] + x[j - 1] - x[i + j - 1], 0)
    if family in ("lemma75", "thm81"):
        i, k = params["i"], params["k"]
        if not 1 <= i <= k - 1:
            raise InvalidParameters("need 1 <= i <= k-1")
        if family == "lemma75":
            bound, prov = 1, "forests F^(t) over all t, pairwise disjoint supports (a=1)"
            ps = {"i": i, "k": k}
        else:
            r = params["r"]
            if r < k:
                raise InvalidParameters("need r >= k")
            bound = math.comb(r - k + i, i)
            prov = f"forests F^(t) over all t, (a+1)-wise disjoint supports with a=C({r - k + i},{i})"
            ps = {"i": i, "k": k, "r": r}
        desc = f"prod_(j<={i}) x_j/(x_{i + 1}-x_j) <= {bound}"
        return DerivedConstraint(family, ps, desc, prov + "; N -> infinity as a geometric series",
                                 lambda x: _ratio_product(x, i), bound, _guard_below(i),
                                 _lemma75_truncated(i))
    if family == "lemma84":
        i, j, k, r = params["i"], params["j"], params["k"], params["r"]
        s = params.get("s", k - i)
        if not (1 <= i <= k - s and i <= j < k and s < k <= r):
            raise InvalidParameters("need 1 <= i <= k-s, i <= j < k and s < k <= r")
        c = r - k + i

        def trunc(x, N):
            return sum(x[i - 1] * x[j - 1] ** (t - 1) / x[j] ** t for t in range(1, N + 1))

        # stated as x_i/(x_{j+1}-x_j) <= r-k+i so that the truncation matches
        return DerivedConstraint(
            family, {"i": i, "j": j, "k": k, "r": r, "s": s},
            f"x_{i}/({c}) <= x_{j + 1} - x_{j}",
            f"forests F^(1..N), (a+1)-wise disjoint supports with a={c}; N -> infinity",
            lambda x: x[i - 1] / (x[j] - x[j - 1]), c,
            lambda x, eps: x[j - 1] < x[j] - eps, trunc)
    raise InvalidParameters(f"unknown family {family!r}")


def family_inequality(fam: ForestFamily, x: Sequence) -> tuple:
    """Finite-N inequality behind a named family, normalised by ``2^(v(F) H(X_1))``.

    Left: ``sum over members of prod_i x_i^(n_{k+1-i})``. Right: ``a`` times the
    subadditivity bound on the mixture, using the same groupings as the
    proofs. Returns ``(lhs, rhs)``.
    """
    k = fam.k
    lhs = sum(_forest_weight(m, x) for m in fam.members)
    p = fam.params
    if fam.name == "lemma72":
        rhs = _prod(x[: k - 1]) * x[p["i"] + p["j"] - 1]
    elif fam.name in ("lemma75", "thm81"):
        i, N = p["i"], p["N"]
        rhs = _prod(x[i + 1:k]) * x[i] ** N
    elif fam.name == "lemma84":
        i, j, N = p["i"], p["j"], p["N"]
        rhs = _prod(x[i:k]) * x[j] ** N
    else:
        raise InvalidParameters(f"no grouping known for family {fam.name!r}")
    return lhs, fam.claimed_a * rhs


def _forest_weight(PF, x):
    k = PF.k
    out = 1
    for i in range(1, k + 1):
        out = out * x[i - 1] ** PF.forest_seq[k - i]
    return out


def _prod(vals):
    out = 1
    for v in vals:
        out = out * v
    return out


def complete_ratio_sequence(k: int, r: int) -> tuple:
    """Exact ratio sequence ``x_i = (r-k+i)/r`` of the uniform edge on ``K_r^(k)``."""
    return tuple(Fraction(r - k + i, r) for i in range(1, k + 1))
