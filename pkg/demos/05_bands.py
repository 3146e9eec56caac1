"""
The semi-infinite tree
======================

Letting n go to infinity, clusters widen into bands where |v| <= 2 sqrt(b).
Outside the bands only roots whose compatible solution decays survive as
eigenvalues.
"""

import numpy as np
from scipy.integrate import quad

from quantree import Potential, density_of_states, infinite_bands, infinite_point_spectrum

q = Potential.zero()
bs = infinite_bands(2.0, -5.0, q, 200.0)
for band in bs.bands:
    print(f"band [{band.lo:10.5f}, {band.hi:10.5f}]")

for g in infinite_point_spectrum(2.0, -5.0, q, 200.0, candidates=True):
    print(f"gap {g.gap}: root {g.lam:10.5f}  |c|/sqrt(b) = {g.decay_ratio:.3f}  "
          f"{'eigenvalue' if g.eigenvalue else 'not square summable'}")

band = bs.bands[1]
mass, _ = quad(lambda x: density_of_states(2.0, -5.0, q, x, normalized=True),
               band.lo, band.hi, limit=200)
print("normalized mass of band 2:", round(mass, 6))

# with a potential well the picture is similar, but gap states are rare
step = Potential.step(-16.0)
cands = infinite_point_spectrum(2.0, -5.0, step, 700.0, candidates=True)
print("step potential decay ratios:", np.round([c.decay_ratio for c in cands], 2))
