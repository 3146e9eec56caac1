"""
Rogue eigenvalues as alpha becomes very negative
================================================

For strongly attractive vertex conditions two eigenvalues separate from the
rest and follow -alpha^2 and -alpha^2 / b^2, while the lowest cluster gathers
around -alpha^2 / (b + 1)^2 and becomes exponentially narrow.
"""

from quantree import GraphParams, Potential, rogue_trajectory, width_bound

params = GraphParams(8, 2, -1.0)
rows = rogue_trajectory(params, Potential.zero(), [-5, -10, -20, -30, -40])
print(" alpha     lam_eq+a^2   lam_-+a^2/b^2   width      bound")
for r in rows:
    res = r.residuals(params.b)
    print(f"{r.alpha:6.0f}  {res['eq']:12.3e}  {res['minus']:12.3e}  {r.width:9.3e}  "
          f"{width_bound(params.b, r.alpha):9.3e}")
