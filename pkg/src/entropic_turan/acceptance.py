"""The fourteen acceptance criteria as callable checks.

Each ``criterion_N`` returns a ``CriterionResult``; ``run_all`` runs a
selection. ``scale="desk"`` uses the full instance counts, ``"quick"`` cuts
the randomized ones down for smoke runs (the exhaustive scans are kept).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .constructions import check_tent_freeness, find_G1, g1_iterated_density, intersection_design
from .entropy import (EdgeDistribution, FiniteDistribution, entropic_density, mixture_bound, ratio_sequence,
                      uniform_edge_distribution)
from .enumerate import clique_free_graphs, enumerate_hypergraphs, enumerate_trees, hom_free_hypergraphs, \
    is_complete_bipartite_balanced
from .forests import complete_ratio_sequence, derive_constraint, random_forest, sampled_hom_distribution
from .hypergraph import (Hypergraph, make_complete, make_complete_bipartite, make_cycle, make_path, make_star,
                         random_hypergraph, tent_family)
from .lagrangian import adjacency_spectral_radius, blowup_density, closed_form_complete, p_spectral
from .verify import (aux_ineq_72, aux_ineq_76, aux_ineq_85, check_entropic_turan, check_pspectral_turan,
                     check_spectral_turan, claim_86, random_76_instance, random_84_sequence, random_krs,
                     random_superadditive)
from .verify import appendix_r_star, appendix_s_star

SCALES = {"desk": 1.0, "quick": 0.05}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.title}: {self.summary}"

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "pass": self.passed, "summary": self.summary,
                "details": self.details, "seconds": self.seconds}


def _count(n, scale):
    return max(1, int(round(n * SCALES[scale])))


def _graph_corpus(max_n=7):
    """One representative per class on ``n`` vertices for ``n <= max_n``."""
    out = []
    for n in range(1, max_n + 1):
        out.extend(enumerate_hypergraphs(n, 2))
    return out


def _triangle_free_corpus(max_n=7):
    out = []
    for n in range(2, max_n + 1):
        out.extend(G for G in clique_free_graphs(n, 2) if G.num_edges)
    return out


# ---------------------------------------------------------------------------


def criterion_1(scale="desk", seed=0):
    worst, rows = 0.0, []
    for k in range(2, 5):
        for r in range(k, 9):
            val = blowup_density(make_complete(r, k), seed=seed).value
            want = closed_form_complete(r, k)
            err = abs(val - float(want))
            worst = max(worst, err)
            rows.append({"k": k, "r": r, "value": val, "closed_form": float(want), "error": err})
    return CriterionResult(1, "clique blowup densities", worst <= 1e-6,
                           f"{len(rows)} cliques, max error {worst:.2e} (tol 1e-6)", {"rows": rows})


def criterion_2(scale="desk", seed=0):
    rows = []
    for k in range(2, 7):
        val = blowup_density(Hypergraph(k, k, [tuple(range(k))]), seed=seed).value
        rows.append({"k": k, "value": val, "error": abs(val - factorial(k) / k ** k)})
    worst = max(r["error"] for r in rows)
    return CriterionResult(2, "single-edge density", worst <= 1e-8,
                           f"k=2..6, max error {worst:.2e} (tol 1e-8)", {"rows": rows})


def criterion_3(scale="desk", seed=0):
    rng = np.random.default_rng([seed, 3])
    worst, runs, rows = 0.0, 0, []
    for idx in range(_count(200, scale)):
        k = 2 if idx % 2 == 0 else 3
        n = int(rng.integers(k, 8))
        G = random_hypergraph(k, n, float(rng.uniform(0.2, 0.9)), rng)
        for p in sorted({1, 2, k}):
            a = entropic_density(G, p, seed=seed).value
            b = p_spectral(G, p, seed=seed).value
            worst = max(worst, abs(a - b))
            runs += 1
            rows.append({"instance": idx, "k": k, "n": n, "m": G.num_edges, "p": p, "entropic": a, "spectral": b})
    return CriterionResult(3, "entropic and polynomial optima agree", worst <= 1e-4,
                           f"{runs} (instance, p) runs, max gap {worst:.2e} (tol 1e-4)", {"rows": rows})


def _eight_vertex_graphs(rng, count):
    named = [make_cycle(8), make_path(8), make_complete(8, 2), make_complete_bipartite(4, 4),
             make_complete_bipartite(3, 5), make_star(7),
             Hypergraph(2, 8, [(a, b) for a in range(8) for b in range(a + 1, 8) if bin(a ^ b).count("1") == 1])]
    return named + [random_hypergraph(2, 8, float(rng.uniform(0.1, 0.9)), rng) for _ in range(count)]


def criterion_4(scale="desk", seed=0):
    rng = np.random.default_rng([seed, 4])
    corpus = [G for G in _graph_corpus(7) if G.num_edges] + _eight_vertex_graphs(rng, _count(200, scale))
    worst = 0.0
    for G in corpus:
        worst = max(worst, abs(p_spectral(G, 2, seed=seed).value - adjacency_spectral_radius(G)))
    return CriterionResult(4, "p=2 optimum equals adjacency spectral radius", worst <= 1e-8,
                           f"{len(corpus)} graphs (all classes n<=7, sampled n=8), max gap {worst:.2e} (tol 1e-8)",
                           {"graphs": len(corpus)})


def criterion_5(scale="desk", seed=0):
    corpus = _triangle_free_corpus(7)
    best, bip, bip_worst, failures = -math.inf, 0, 0.0, 0
    for G in corpus:
        res = entropic_density(G, 1, seed=seed)
        rep = check_entropic_turan(G, 2, res.distribution)
        gap = rep.lhs - 2 * rep.details["H_X"]
        best = max(best, gap)
        failures += gap > -1 + 1e-6
        if is_complete_bipartite_balanced(G):
            bip += 1
            bip_worst = max(bip_worst, abs(gap + 1))
    ok = failures == 0 and bip > 0 and bip_worst <= 1e-6
    return CriterionResult(5, "entropic Turan on triangle-free graphs", ok,
                           f"{len(corpus)} graphs, max H(X,Y)-2H(X) = {best:.12f} (bound -1), "
                           f"{bip} balanced complete bipartite within {bip_worst:.1e} of equality",
                           {"graphs": len(corpus), "max_gap": best, "violations": failures,
                            "balanced_bipartite": bip, "equality_error": bip_worst})


def criterion_6(scale="desk", seed=0):
    corpus = _triangle_free_corpus(7)
    trees = [T for l in range(3, 6) for T in enumerate_trees(l)]
    checked, bad = 0, []
    for G in corpus:
        rho = p_spectral(G, 2, seed=seed).value
        reps = check_spectral_turan(G, 2, trees, walks=(3, 4, 5), rho=rho)
        for p in (1, 1.5, 2, 3):
            val = rho if p == 2 else (blowup_density(G).value if p == 1 else p_spectral(G, p, seed=seed).value)
            reps += check_pspectral_turan(G, 2, p, value=val)
        checked += len(reps)
        bad += [r.to_dict() for r in reps if not r.passed]
    return CriterionResult(6, "spectral Turan forms", not bad,
                           f"{checked} inequalities on {len(corpus)} graphs, {len(bad)} violations",
                           {"checked": checked, "violations": bad[:20]})


def _random_symmetric(G, rng):
    w = [int(v) for v in rng.integers(1, 10, size=G.num_edges)]
    tot = sum(w)
    return EdgeDistribution(G, [Fraction(v, tot) for v in w])


def criterion_7(scale="desk", seed=0):
    rng = np.random.default_rng([seed, 7])
    worst, mismatches, rows = 0.0, 0, []
    for _ in range(_count(100, scale)):
        k = int(rng.integers(2, 4))
        nG = int(rng.integers(k + 1, 7))
        G = random_hypergraph(k, nG, float(rng.uniform(0.3, 0.9)), rng)
        vmax = int(math.floor(math.log(1e5) / math.log(nG) + 1e-12))
        vF = int(rng.integers(1, vmax + 1))
        PF = random_forest(k, vF, rng)
        res = sampled_hom_distribution(PF, _random_symmetric(G, rng))
        worst = max(worst, res.entropy_gap)
        mismatches += not res.faces_match
        rows.append({"k": k, "nG": nG, "vF": vF, "forest_seq": list(PF.forest_seq), "gap": res.entropy_gap})
    ok = worst <= 1e-9 and mismatches == 0
    return CriterionResult(7, "sampled homomorphism entropy", ok,
                           f"{len(rows)} pairs, max entropy gap {worst:.2e} (tol 1e-9), {mismatches} face mismatches",
                           {"rows": rows})


def _random_family(rng):
    a = int(rng.integers(1, 4))
    m = int(rng.integers(1, 7))
    supports = [[] for _ in range(m)]
    for o in range(int(rng.integers(2, 16))):
        size = int(rng.integers(0, min(a, m) + 1))
        for i in rng.choice(m, size=size, replace=False):
            supports[int(i)].append(o)
    fresh = 1000
    dists = []
    for sup in supports:
        if not sup:
            sup, fresh = [fresh], fresh + 1
        w = rng.dirichlet(np.ones(len(sup)))
        dists.append(FiniteDistribution(dict(zip(sup, w.tolist()))))
    return dists, a


def criterion_8(scale="desk", seed=0):
    rng = np.random.default_rng([seed, 8])
    worst = math.inf
    for _ in range(_count(1000, scale)):
        dists, a = _random_family(rng)
        worst = min(worst, mixture_bound(dists, a).slack)
    eq_worst = 0.0
    for _ in range(_count(100, scale)):
        m, size = int(rng.integers(1, 8)), int(rng.integers(1, 9))
        dists = [FiniteDistribution.uniform(range(i * size, (i + 1) * size)) for i in range(m)]
        eq_worst = max(eq_worst, abs(mixture_bound(dists, 1).slack))
    ok = worst >= -1e-9 and eq_worst <= 1e-9
    return CriterionResult(8, "mixture bound", ok,
                           f"min slack {worst:.2e} over random families, equality cases within {eq_worst:.1e}",
                           {"min_slack": worst, "equality_error": eq_worst})


def criterion_9(scale="desk", seed=0):
    target = 2 / 9
    family = tent_family(3, 2)
    graphs = [G for G in hom_free_hypergraphs(6, 3, family, max_edges=12) if G.num_edges]
    vals = [(blowup_density(G, seed=seed).value, G) for G in graphs]
    best = max(v for v, _ in vals)
    near = [{"n": G.n, "edges": [list(e) for e in G.edges], "value": v} for v, G in vals if abs(v - target) <= 1e-4]
    return CriterionResult(9, "tent-free 3-graphs on 6 vertices", abs(best - target) <= 1e-4,
                           f"{len(graphs)} hom-free classes, max blowup density {best:.10f} vs 2/9, "
                           f"{len(near)} at the bound",
                           {"classes": len(graphs), "max": best, "at_bound": near})


def criterion_10(scale="desk", seed=0):
    checked, bad = 0, []
    for k in range(2, 6):
        for r in range(k, 10):
            x = complete_ratio_sequence(k, r)
            for i in range(1, k):
                got = derive_constraint("thm81", k=k, r=r, i=i).evaluate(x).lhs
                checked += 1
                if not (isinstance(got, Fraction) and got == comb(r - k + i, i)):
                    bad.append((k, r, i, str(got)))
                if r == k:
                    got75 = derive_constraint("lemma75", k=k, i=i).evaluate(x).lhs
                    checked += 1
                    if got75 != 1:
                        bad.append(("unit", k, i, str(got75)))
    return CriterionResult(10, "derived constraints tight on cliques", not bad,
                           f"{checked} exact evaluations, {len(bad)} mismatches", {"mismatches": bad})


def criterion_11(scale="desk", seed=0):
    rng = np.random.default_rng([seed, 11])
    N = _count(10 ** 4, scale)
    viol = {"superadditive": 0, "ratio-products": 0, "weighted-amgm": 0, "fks-weighted-sum": 0}
    hyp_fail = dict.fromkeys(viol, 0)
    for _ in range(N):
        k = int(rng.integers(2, 9))
        r = aux_ineq_72(random_superadditive(k, rng))
        hyp_fail["superadditive"] += r.hypothesis != "ok"
        viol["superadditive"] += r.slack < -r.tolerance
        y, z = random_76_instance(k, rng)
        r = aux_ineq_76(y, z)
        hyp_fail["ratio-products"] += r.hypothesis != "ok"
        viol["ratio-products"] += bool(r.slack < -r.tolerance)
        t = int(rng.integers(1, 9))
        r = aux_ineq_85(rng.exponential(1.0, size=t).tolist(), float(rng.exponential(3.0)))
        viol["weighted-amgm"] += r.slack < -r.tolerance
        kk, rr, s = random_krs(rng)
        r = claim_86(random_84_sequence(kk, rr, s, rng), kk, rr, s)
        hyp_fail["fks-weighted-sum"] += r.hypothesis != "ok"
        viol["fks-weighted-sum"] += r.slack < -r.tolerance or not (r.details["identity"] and r.details["c_in_range"])
    eq = []
    for k in range(1, 11):
        eq.append(abs(aux_ineq_72([float(i) for i in range(1, k + 1)]).slack) / factorial(k))
        z = np.cumsum(rng.exponential(1.0, size=k) + 0.1).tolist()
        eq.append(abs(aux_ineq_76(z, z).slack))
    eq_worst = max(eq)
    ok = not any(viol.values()) and not any(hyp_fail.values()) and eq_worst <= 1e-12
    return CriterionResult(11, "auxiliary inequalities", ok,
                           f"{N} instances each, violations {viol}, equality witnesses within {eq_worst:.1e}",
                           {"violations": viol, "hypothesis_failures": hyp_fail, "equality_error": eq_worst})


def criterion_12(scale="desk", seed=0):
    res = find_G1()
    G = res.hypergraph
    x1 = ratio_sequence(uniform_edge_distribution(G)).x[0]
    power = [g1_iterated_density(m, "power") for m in (1, 2, 3)]
    binom = [g1_iterated_density(m, "binomial") for m in (1, 2, 3, 4)]
    target = Fraction(2, 7)
    checks = {"one_class": res.stats["isomorphism_classes"] == 1, "ten_edges": G.num_edges == 10,
              "pair_degrees": all(d == 2 for d in res.certificate["pair_degrees"].values())
              and len(res.certificate["pair_degrees"]) == 15,
              "x1": abs(x1 - 1 / 3) <= 1e-12, "series": abs(power[2] - target) <= Fraction(1, 1000),
              "k4_minus_free": res.certificate["k4_minus_free"]}
    return CriterionResult(12, "the design G_1", all(checks.values()),
                           f"{res.stats['labelled_designs']} labelled designs in "
                           f"{res.stats['isomorphism_classes']} class, x_1 = {x1!r}, "
                           f"3! e/n^3 at m=3 is {float(power[2]):.7f} (e/C(n,3): {float(binom[2]):.7f}) vs 2/7",
                           {"checks": checks, "power_series": [str(v) for v in power],
                            "binomial_series": [str(v) for v in binom]})


def criterion_13(scale="desk", seed=0):
    k = 1000
    s = appendix_s_star(k, k)
    rs = appendix_r_star(k, 1)
    a, b = s / k, rs * 2 / k ** 2
    ok = 0.61 <= a <= 0.66 and 0.95 <= b <= 1.05
    return CriterionResult(13, "threshold asymptotics", ok,
                           f"s*(1000,1000)/k = {a:.4f} (1-1/e = {1 - math.exp(-1):.4f}), r*(1000,1)*2/k^2 = {b:.4f}",
                           {"s_star": s, "r_star": rs})


def criterion_14(scale="desk", seed=0):
    alpha, rows, ok = 0.8, [], True
    for k in (4, 5, 6):
        res = intersection_design(k, alpha)
        hist = res.certificate["histogram"]
        small = all(size < alpha * k for size in hist)
        free = check_tent_freeness(res, alpha)
        good = small and all(w is None for w in free.values()) and res.verify()
        ok &= good
        rows.append({"k": k, "edges": res.hypergraph.num_edges, "max_intersection": max(hist),
                     "tents_checked": [list(l) for l in free], "tents_found": sum(w is not None for w in free.values()),
                     "density_ratio": res.stats["density_ratio"]})
    summ = "; ".join(f"k={r['k']}: {r['edges']} edges, ratio {r['density_ratio']:.3f}, "
                     f"{r['tents_found']} of {len(r['tents_checked'])} large-part tents embed" for r in rows)
    return CriterionResult(14, "small-intersection designs", ok, summ, {"rows": rows})


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 15)}


def run_criterion(i: int, scale: str = "desk", seed: int = 0) -> CriterionResult:
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    t0 = time.perf_counter()
    res = CRITERIA[i](scale=scale, seed=seed)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(scale: str = "desk", seed: int = 0, only=None, echo=None) -> list:
    out = []
    for i in sorted(only or CRITERIA):
        res = run_criterion(i, scale, seed)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
