"""
Two searched constructions
==========================

First, the 3-graph on six vertices in which every pair lies in exactly two
edges. It is unique up to isomorphism, has no K_4^-, and its iterated
blowups have density tending to 2/7.

Second, k-sets of a 2k-set with pairwise meets at most alpha*k, picked as
a greedy independent set in the conflict graph. Such a family cannot host
a tent whose large part exceeds alpha*k.
"""

from entropic_turan.constructions import (check_tent_freeness, find_G1, g1_iterated_density,
                                          intersection_design)

res = find_G1()
print(res.hypergraph)
print(res.stats)
for m in range(1, 6):
    print(m, float(g1_iterated_density(m, "power")), float(g1_iterated_density(m, "binomial")))
print("2/7 =", 2 / 7)

des = intersection_design(6, 0.8)
print(des.certificate["histogram"])
print({k: des.stats[k] for k in ("independent_set", "caro_wei_bound", "density_ratio")})
print("tent witnesses:", check_tent_freeness(des, 0.8))
