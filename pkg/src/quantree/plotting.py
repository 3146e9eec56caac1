"""SVG figures: zero sets over the spiral, eigenvalues against alpha, eigenfunctions.

Figures are built on a bare ``matplotlib.figure.Figure`` (no pyplot state)
and saved with a fixed hash salt and no date, so identical inputs give
identical files.  Every layer carries a ``gid`` for structural checks, e.g.
``component-3`` for the zero-set component with index 3.
"""

from __future__ import annotations

import math

import numpy as np
from matplotlib import rcParams
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .determinants import GraphParams, y_roots
from .eigenfunctions import sample_eigenfunction
from .orthopoly import PolyParams, pq_roots
from .potential import Potential, dirichlet_spectrum, from_mu, sample_spiral, transfer_at

STYLE = {
    "figsize": (7.0, 5.0),
    "component": "#1f4e9c",
    "rogue": "#1f4e9c",
    "spiral": "#c8102e",
    "shade": "#cfe6f7",
    "p_line": (0, (8, 4)),
    "q_line": (0, (2, 3)),
    "strip_color": "#555555",
    "dirichlet": "#f28e2b",
    "marker": "#000000",
    "linewidth": 1.2,
    "hashsalt": "quantree",
}


def _new_figure(figsize=None) -> Figure:
    fig = Figure(figsize=figsize or STYLE["figsize"])
    FigureCanvasSVG(fig)
    return fig


def save_svg(fig: Figure, path) -> None:
    """Write SVG 1.1 with a fixed id salt and no creation date."""
    old = rcParams["svg.hashsalt"]
    rcParams["svg.hashsalt"] = STYLE["hashsalt"]
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        rcParams["svg.hashsalt"] = old


def _clip(y: np.ndarray, z: np.ndarray, yr, zr):
    y = np.array(y, dtype=float)
    z = np.array(z, dtype=float)
    bad = (y < yr[0]) | (y > yr[1]) | (z < zr[0]) | (z > zr[1]) | ~np.isfinite(y) | ~np.isfinite(z)
    y[bad] = np.nan
    z[bad] = np.nan
    return y, z


def zero_set_figure(params: GraphParams, q: Potential, y_range=(-3.0, 3.0), z_range=(-1.5, 1.5),
                    mu_range=(-8.0, 12.0), npts: int = 801, strips: bool = True,
                    eigenvalues=None) -> Figure:
    """Zero-set components, the spiral S, the strip lines and the oscillatory shading.

    ``eigenvalues`` (optional) are marked at (c(lambda), s(lambda)).
    """
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    zs = np.linspace(z_range[0], z_range[1], npts)

    # oscillatory region |(b+1) y + alpha z| < 2 sqrt(b)
    w = 2.0 * math.sqrt(b)
    ylo = (-w - alpha * zs) / (b + 1.0)
    yhi = (w - alpha * zs) / (b + 1.0)
    ax.fill_betweenx(zs, ylo, yhi, color=STYLE["shade"], linewidth=0, gid="oscillatory-region")

    if strips:
        vr, wr = pq_roots(PolyParams(b, n))
        for name, roots, ls in (("P", vr, STYLE["p_line"]), ("Q", wr, STYLE["q_line"])):
            for j, v in enumerate(roots, start=1):
                ys, zz = _clip((v - alpha * zs) / (b + 1.0), zs, y_range, z_range)
                ax.plot(ys, zz, linestyle=ls, color=STYLE["strip_color"], linewidth=0.7,
                        gid=f"strip-{name}-{j}")

    table = np.array([y_roots(params, z) for z in zs])
    first = 1 if params.dirichlet_root else 0
    for i in range(table.shape[1]):
        k = first + i
        ys, zz = _clip(table[:, i], zs, y_range, z_range)
        ax.plot(ys, zz, color=STYLE["component"], linewidth=STYLE["linewidth"], gid=f"component-{k}")

    sp = sample_spiral(q, mu_range[0], mu_range[1], 4 * npts)
    ys, zz = _clip(sp.y, sp.z, y_range, z_range)
    ax.plot(ys, zz, color=STYLE["spiral"], linewidth=STYLE["linewidth"], gid="spiral")

    if eigenvalues is not None and len(eigenvalues):
        pts = [transfer_at(q, float(lam)) for lam in eigenvalues]
        ey, ez = _clip([p.c for p in pts], [p.s for p in pts], y_range, z_range)
        ax.plot(ey, ez, linestyle="none", marker="o", markersize=3, color=STYLE["marker"], gid="eigenvalues")

    ax.set_xlim(*y_range)
    ax.set_ylim(*z_range)
    ax.set_xlabel("y = c(λ)")
    ax.set_ylabel("z = s(λ)")
    root = "Dirichlet root" if params.dirichlet_root else "Robin root"
    ax.set_title(f"n={n}, b={b:g}, α={alpha:g}, {root}")
    return fig


def alpha_panel_figure(n: int, b: float, q: Potential, alphas, mu_range=(-8.0, 12.0),
                       root_condition: str = "robin", workers=None) -> Figure:
    """Eigenvalues in mu = sgn(lambda) sqrt|lambda| against alpha, with Dirichlet lines."""
    from .spectra import linear_spectrum

    fig = _new_figure()
    ax = fig.add_subplot(1, 1, 1)
    lam_lo, lam_hi = float(from_mu(mu_range[0])), float(from_mu(mu_range[1]))
    for lam in dirichlet_spectrum(q, max(lam_hi, 1e-9)).values:
        mu = math.copysign(math.sqrt(abs(lam)), lam)
        ax.axvline(mu, color=STYLE["dirichlet"], linewidth=0.8, gid="dirichlet")
    for a in alphas:
        p = GraphParams(n, b, float(a), root_condition)
        rep = linear_spectrum(p, q, lam_lo, lam_hi, workers=workers)
        mus = np.array([math.copysign(math.sqrt(abs(e.lam)), e.lam) for e in rep.eigenvalues])
        mus = mus[(mus >= mu_range[0]) & (mus <= mu_range[1])]
        ax.plot(mus, np.full(len(mus), float(a)), linestyle="none", marker="|", markersize=6,
                color=STYLE["component"], gid=f"alpha-{a:g}")
    ax.set_xlim(*mu_range)
    ax.set_xlabel("μ = sgn(λ) √|λ|")
    ax.set_ylabel("α")
    ax.set_title(f"n={n}, b={b:g}")
    return fig


def eigenfunction_figure(params: GraphParams, q: Potential, lambdas, per_edge: int = 41) -> Figure:
    """Eigenfunctions laid out along [0, n], one panel per eigenvalue."""
    lambdas = list(lambdas)
    fig = _new_figure((7.0, 1.6 * max(1, len(lambdas))))
    for i, lam in enumerate(lambdas):
        ax = fig.add_subplot(len(lambdas), 1, i + 1)
        smp = sample_eigenfunction(params, q, float(lam), per_edge)
        for k in range(1, int(params.n) + 1):
            sel = smp["edge"] == k
            ax.plot(smp["x"][sel], smp["u"][sel], color=STYLE["component"], linewidth=1.0,
                    gid=f"eigenfunction-{i}-edge-{k}")
        ax.axhline(0.0, color="#999999", linewidth=0.5)
        ax.set_ylabel(f"λ={lam:.4g}", fontsize=7)
        ax.tick_params(labelsize=6)
    return fig


__all__ = ["STYLE", "save_svg", "zero_set_figure", "alpha_panel_figure", "eigenfunction_figure"]
