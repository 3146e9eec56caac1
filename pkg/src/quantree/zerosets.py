"""Components of the zero sets of D_n and of the Dirichlet-root determinant.

Each zero set is a union of disjoint monotone graphs y = g^k(z), and the
whole set is invariant under (y, z) -> (-y, -z).
At fixed z the roots in y come from a symmetric tridiagonal pencil, so the
k-th component is simply the k-th smallest root.  For alpha < 0 and z > 0 the
components lie in slanted strips bounded by the lines v = const, with
v = (b+1) y + alpha z, set by the roots v_nj of P_n and w_nj of Q_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .determinants import GraphParams, y_roots, z_roots
from .orthopoly import PolyParams, pq_roots

CONSTRAINED = "constrained-strip"
ROGUE = "rogue"

ROGUE_OUTER = "C_n^n"
ROGUE_INNER = "C_n^{n-1}"
ROGUE_DIRICHLET = "Cring_n^n"


@dataclass(frozen=True)
class CurveComponent:
    k: int
    z: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    kind: str = CONSTRAINED
    truncated: bool = False

    def v(self, params: GraphParams) -> np.ndarray:
        return (params.b + 1.0) * self.y + params.alpha * self.z

    def is_strictly_monotone(self) -> bool:
        d = np.diff(self.y)
        return bool(np.all(d > 0) or np.all(d < 0))


def _index_range(params: GraphParams) -> range:
    n = int(params.n)
    return range(1, n + 1) if params.dirichlet_root else range(0, n + 1)


def _check_index(params: GraphParams, k: int):
    if k not in _index_range(params):
        r = _index_range(params)
        raise ValueError(f"component index must lie in [{r.start}, {r.stop - 1}], got {k}")


def mirror_index(params: GraphParams, k: int) -> int:
    """Index of the component containing (-y, -z) whenever (y, z) lies on component k.

    The zero set is odd, and ranking the roots in y at fixed z turns the
    point reflection into k -> n - k (Robin) or k -> n + 1 - k (Dirichlet root).
    """
    _check_index(params, k)
    n = int(params.n)
    return n + 1 - k if params.dirichlet_root else n - k


def component_kind(params: GraphParams, k: int) -> str:
    n = int(params.n)
    if params.dirichlet_root:
        return ROGUE if k == n else CONSTRAINED
    return ROGUE if k >= n - 1 else CONSTRAINED


def component_y_at(params: GraphParams, k: int, z: float) -> float:
    """g^k(z): the ordinate of component k above the abscissa z."""
    _check_index(params, k)
    off = 1 if params.dirichlet_root else 0
    return float(y_roots(params, z)[k - off])


def component_z_at(params: GraphParams, k: int, y: float) -> float:
    """The z with g^k(z) = y (each component is a bijection between z and y)."""
    _check_index(params, k)
    zs = z_roots(params, y)
    off = 1 if params.dirichlet_root else 0
    idx = k - off
    # increasing graphs (alpha < 0) reverse the order in z at fixed y
    if params.alpha < 0:
        idx = len(zs) - 1 - idx
    return float(zs[idx])


def trace_component(params: GraphParams, k: int, z_range: tuple, npts: int) -> CurveComponent:
    """Sample component k as y = g^k(z) on ``npts`` points of ``z_range``."""
    _check_index(params, k)
    if npts < 2:
        raise ValueError("need at least two samples")
    z0, z1 = float(z_range[0]), float(z_range[1])
    if not z0 < z1:
        raise ValueError("need an increasing z range")
    zs = np.linspace(z0, z1, int(npts))
    off = 1 if params.dirichlet_root else 0
    ys = np.array([y_roots(params, z)[k - off] for z in zs])
    ok = np.isfinite(ys)
    truncated = not bool(np.all(ok))
    return CurveComponent(k, zs[ok], ys[ok], component_kind(params, k), truncated)


def trace_all(params: GraphParams, z_range: tuple, npts: int) -> list[CurveComponent]:
    """Every component on a shared z grid (one eigenvalue problem per sample)."""
    z0, z1 = float(z_range[0]), float(z_range[1])
    zs = np.linspace(z0, z1, int(npts))
    table = np.array([y_roots(params, z) for z in zs])
    return [CurveComponent(k, zs, table[:, i], component_kind(params, k))
            for i, k in enumerate(_index_range(params))]


# ---------------------------------------------------------------------------
# strips


@dataclass(frozen=True)
class StripResult:
    inside: bool
    v: float
    lower: float
    upper: float
    inequality: str


def strip_bounds(params: GraphParams, k: int, y: float) -> tuple[float, float, str]:
    """Bounds (lower, upper) on v for component k at height y (alpha < 0, z > 0)."""
    _check_index(params, k)
    n, b = int(params.n), float(params.b)
    vr, wr = pq_roots(PolyParams(b, n))
    v = lambda j: float(vr[j - 1])
    w = lambda j: float(wr[j - 1])
    inf = math.inf
    if params.dirichlet_root:
        if y == 0.0:
            raise ValueError("the strips switch at y = 0; the point lies on the boundary")
        low = y < 0.0
        if k == 1 and n == 1:
            lo, hi = (-(b + 1.0), v(1)) if low else (v(1), inf)
        elif k == 1:
            lo, hi = (-(b + 1.0), v(1)) if low else (v(1), w(1))
        elif k < n:
            lo, hi = (w(k - 1), v(k)) if low else (v(k), w(k))
        else:
            lo, hi = (w(n - 1), v(n)) if low else (v(n), inf)
        region = "y < 0" if low else "0 < y"
    else:
        if abs(y) == 1.0:
            raise ValueError("the strips switch at y = 1; the point lies on the boundary")
        if y < -1.0:
            raise ValueError("no strip is stated for y < -1 (z > 0 keeps y above -1)")
        low = y < 1.0
        if k == n:
            if low:
                raise ValueError("component n has y > 1 for z > 0")
            lo, hi = b + 1.0, inf
        elif k == 0:
            lo, hi = (-(b + 1.0), v(1)) if low else (v(1), w(1) if n > 1 else inf)
        elif k < n - 1:
            lo, hi = (w(k), v(k + 1)) if low else (v(k + 1), w(k + 1))
        else:
            lo, hi = (w(n - 1), v(n)) if low else (v(n), inf)
        region = "-1 < y < 1" if low else "1 < y"
    text = f"{lo:.6g} < (b+1)y + alpha z" + ("" if hi == inf else f" < {hi:.6g}") + f" for {region}"
    return lo, hi, text


def strip_membership(params: GraphParams, k: int, point: tuple) -> StripResult:
    """Check the slanted-strip inequality for component k at ``point = (y, z)``.

    The inequalities are stated for alpha < 0 and z > 0; other sign cases
    follow from the symmetries of the determinants and are rejected here.
    """
    y, z = float(point[0]), float(point[1])
    if not params.alpha < 0:
        raise ValueError("strip inequalities need alpha < 0")
    if not z > 0:
        raise ValueError("strip inequalities need z > 0")
    lo, hi, text = strip_bounds(params, k, y)
    v = (params.b + 1.0) * y + params.alpha * z
    return StripResult(bool(lo < v < hi), v, lo, hi, text)


# ---------------------------------------------------------------------------
# rogue asymptotes


def rogue_slope(kind: str, b: float) -> float:
    if kind in (ROGUE_OUTER, ROGUE_DIRICHLET):
        return 1.0
    if kind == ROGUE_INNER:
        return float(b)
    raise ValueError(f"unknown rogue curve {kind!r}")


def rogue_asymptote(kind: str, b: float, alpha: float, y: float) -> float:
    """z on the straight-line asymptote alpha z + beta (y - 1/y) = 0.

    beta = 1 for the outer Robin curve and the Dirichlet-root curve, beta = b
    for the inner Robin curve.  Valid for y > 1 as y grows.
    """
    if alpha == 0:
        raise ValueError("for alpha = 0 the rogue curves are vertical lines")
    if not b > 1:
        raise ValueError("the two rogue slopes coincide unless b > 1")
    if not y > 1:
        raise ValueError("the asymptote is stated for y > 1")
    beta = rogue_slope(kind, b)
    return -beta * (y - 1.0 / y) / alpha


def rogue_component(params: GraphParams, kind: str) -> int:
    n = int(params.n)
    if kind == ROGUE_DIRICHLET:
        if not params.dirichlet_root:
            raise ValueError("this curve belongs to the Dirichlet-root determinant")
        return n
    if params.dirichlet_root:
        raise ValueError("this curve belongs to the Robin-root determinant")
    return n if kind == ROGUE_OUTER else n - 1


def asymptote_errors(params: GraphParams, kind: str, ys) -> np.ndarray:
    """|z_traced - z_asymptote| on the rogue curve at the heights ``ys``."""
    k = rogue_component(params, kind)
    return np.array([abs(component_z_at(params, k, y)
                         - rogue_asymptote(kind, params.b, params.alpha, y)) for y in ys])
