"""
Checking against finite differences
===================================

An independent discretization of the edges gives eigenvalues with O(h^2)
error; one Richardson step improves them by several digits.
"""

import numpy as np

from quantree import GraphParams, Potential, fd_linear, linear_spectrum

p = GraphParams(4, 2, -5.0)
q = Potential.step(-16.0)
exact = linear_spectrum(p, q, None, 200.0).values[:8]
for h in (1 / 50, 1 / 100, 1 / 200):
    r = fd_linear(p, q, h, 8)
    print(f"h={h:.4f}  raw error {np.max(np.abs(r.raw - exact)):.2e}  "
          f"extrapolated {np.max(np.abs(r.extrapolated - exact)):.2e}")
