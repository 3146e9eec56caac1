"""
Spectrum of one linear graph
============================

A regular rooted tree with branching factor b reduces, on radially symmetric
functions, to n edges in a row with weighted vertex conditions.  Its
eigenvalues fall into clusters just below each Dirichlet eigenvalue of the
edge, single intermediates near those Dirichlet values, and, for alpha < 0,
up to two rogue eigenvalues far below everything else.
"""

import numpy as np

from quantree import GraphParams, Potential, linear_spectrum

q = Potential.zero()
params = GraphParams(n=8, b=2, alpha=-20.0)

rep = linear_spectrum(params, q, None, 100.0)
print(f"{len(rep.eigenvalues)} eigenvalues in [{rep.lambda_min:.1f}, 100]")
for e in rep.eigenvalues:
    extra = e.kind or e.side or (f"#{e.position}" if e.position else "")
    print(f"  {e.lam:12.6f}  {e.tag:<15s} k={e.k:<2d} {extra}")

# the two rogues sit near -alpha^2 and -alpha^2 / b^2
print("rogue '=':", rep.rogue("=").lam, " vs", -params.alpha ** 2)
print("rogue '-':", rep.rogue("-").lam, " vs", -params.alpha ** 2 / params.b ** 2)

# as n grows the clusters fill out toward the bands of the infinite tree
for n in (8, 16, 32):
    r = linear_spectrum(params.with_(n=n, alpha=-5.0), q, None, 50.0)
    widths = {k: round(c.width, 6) for k, c in r.clusters().items()}
    print(f"n={n:2d} cluster widths", widths)

# the same graph with a potential well on the middle third of every edge
step = Potential.step(-16.0)
r = linear_spectrum(GraphParams(6, 2, -5.0), step, None, 120.0)
print("step potential:", np.round(r.values, 4))
