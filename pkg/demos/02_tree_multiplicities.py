"""
The full tree and its multiplicities
====================================

The spectrum of the whole finite tree is the union of the linear graph B_n and
the Dirichlet-root graphs with m = 1..n levels, the latter repeated
(b - 1) b^(n - m) times.  A finite-difference discretization of the whole tree
confirms the count.
"""

from quantree import GraphParams, Potential, decomposition_check, tree_spectrum

q = Potential.zero()
ts = tree_spectrum(GraphParams(3, 2, -5.0), q, None, 60.0)
for e in ts.entries:
    print(f"{e.lam:12.6f}  x{e.multiplicity}  from {e.origins}")

# at alpha = 0 two parts share eigenvalues, which are merged and flagged
ts0 = tree_spectrum(GraphParams(2, 2, 0.0), q, None, 100.0)
print("collisions at alpha = 0:", [(round(e.lam, 6), e.multiplicity) for e in ts0.collisions])

rep = decomposition_check(2, 2, -5.0, q, 12)
print("finite differences agree:", rep.ok, f"(max deviation {rep.max_deviation:.2e})")
