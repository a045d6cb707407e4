"""
Blowup densities and p-spectral radii
=====================================

The largest density of a blowup of G is the maximum of the edge polynomial
k! * sum_{e} prod_{v in e} x_v over the simplex. For graphs this is the
Motzkin-Straus value 1 - 1/omega, found exactly through a maximum clique.
For hypergraphs a multiplicative ascent plus a Newton polish does the job.
"""

import numpy as np

from entropic_turan.hypergraph import make_complete, make_cycle, random_hypergraph
from entropic_turan.lagrangian import blowup_density, closed_form_complete, p_spectral

print("C5 (exact):", blowup_density(make_cycle(5)).exact_value)

for r in range(3, 7):
    res = blowup_density(make_complete(r, 3))
    print(f"K_{r}^(3): numeric {res.value:.10f}  closed form {float(closed_form_complete(r, 3)):.10f}")

# Varying p interpolates between the blowup density (p = 1) and the
# adjacency spectral radius (p = 2 on graphs).
rng = np.random.default_rng(0)
G = random_hypergraph(3, 7, 0.4, rng)
for p in (1.0, 1.5, 2.0, 3.0):
    res = p_spectral(G, p)
    print(f"p = {p}: value {res.value:.8f}, KKT residual {res.kkt_residual:.1e}")
