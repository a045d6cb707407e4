"""
Forests, sampled homomorphisms and the k!/k^k bound
===================================================

A partial forest can be sampled into any host by drawing one random edge
and then extending vertex by vertex along conditional marginals. The
entropy of the sample then splits as a sum over the forest sequence.
Families of forests whose pairwise unions contain a forbidden
configuration give disjoint supports, which turns into inequalities on
the ratio sequence x_1 <= ... <= x_k = 1.
"""

from math import factorial, prod

import numpy as np

from entropic_turan.entropy import uniform_edge_distribution
from entropic_turan.forests import (certify_disjointness, derive_constraint, lemma75_family, random_forest,
                                    sampled_hom_distribution)
from entropic_turan.hypergraph import Hypergraph, random_hypergraph
from entropic_turan.verify import random_superadditive, tent_density_bound

rng = np.random.default_rng(1)
G = random_hypergraph(3, 6, 0.5, rng)
F = random_forest(3, 4, rng)
s = sampled_hom_distribution(F, uniform_edge_distribution(G))
print("forest sequence", F.forest_seq, "entropy gap", s.entropy_gap, "faces match", s.faces_match)

# Multiplicity one: no homomorphism lands in two members at once.
fam = lemma75_family(1, 3, N=5)
print(len(fam.members), "members, certified a =", certify_disjointness(fam))

c = derive_constraint("lemma75", i=2, k=3)
print(c.description)
print(c.evaluate((1 / 3, 2 / 3, 1.0)))

# Superadditive sequences never beat the single edge.
for k in (3, 4, 5):
    y = random_superadditive(k, rng)
    x = [v / y[-1] for v in y]
    print(f"k={k}: prod x = {prod(x):.5f} <= {factorial(k) / k ** k:.5f}")

print(tent_density_bound(Hypergraph(3, 3, [(0, 1, 2)])))
