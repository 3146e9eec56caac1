"""
Zero sets and the spiral
========================

Eigenvalues are the points where the spiral lambda -> (c(lambda), s(lambda))
crosses the zero set of the secular polynomial in the (y, z) plane.  This
writes the picture as an SVG next to the script.
"""

from pathlib import Path

from quantree import GraphParams, Potential, linear_spectrum, mirror_index
from quantree.plotting import save_svg, zero_set_figure

params = GraphParams(11, 3, -2.0)
q = Potential.zero()
rep = linear_spectrum(params, q, None, 150.0)

fig = zero_set_figure(params, q, eigenvalues=rep.values)
out = Path(__file__).with_suffix(".svg")
save_svg(fig, out)
print("wrote", out)

# the zero set is symmetric under (y, z) -> (-y, -z), which swaps components
print({k: mirror_index(params, k) for k in range(params.n + 1)})
