"""Eigenvectors of the discrete vertex system and their edge reconstruction.

The interior rows u_{k-1} - v u_k + b u_{k+1} = 0 have the modes
(b^{-1/2} xi)^k and (b^{-1/2} / xi)^k with xi + 1/xi = b^{-1/2} v, and the
root row fixes their combination:

    Robin root      u_k = (b^{1/2} xi - c)(b^{-1/2} xi)^k - (b^{1/2}/xi - c)(b^{-1/2}/xi)^k
    Dirichlet root  u_k = (b^{-1/2} xi)^k - (b^{-1/2}/xi)^k

In the oscillatory regime xi = exp(i theta) and both become real sine
combinations.  In the exponential regime |xi| > 1 is real and the terms are
scaled to unit maximum so that neither mode overflows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .determinants import GraphParams, secular_matrix
from .potential import Potential, TransferValues, fundamental_solutions, transfer_at
from .spectra import BOUNDARY, EXPONENTIAL, OSCILLATORY, regime_of

# |s| below this fraction of |c| is treated as a Dirichlet point
_DIRICHLET_S_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteEigenvector:
    """Vertex values u_0..u_n normalized to max |u_k| = 1.

    ``a1`` and ``a2`` are the coefficients of the growing and decaying modes
    (b^{1/2} xi - c and -(b^{1/2}/xi - c) for the Robin root); ``kernel`` marks
    vectors taken from the kernel of the coefficient matrix at a Dirichlet point.
    """

    lam: float
    u: np.ndarray = field(repr=False)
    xi: complex
    regime: str
    a1: complex
    a2: complex
    v: float
    kernel: bool = False

    @property
    def coefficient_ratio(self) -> complex:
        """(b^{1/2} xi - c) / (b^{1/2}/xi - c), i.e. -a1/a2."""
        return -self.a1 / self.a2

    def rescaled(self, b: float) -> np.ndarray:
        k = np.arange(len(self.u))
        return self.u * b ** (0.5 * k)

    def recurrence_defect(self, b: float) -> float:
        """max_k |u~_{k-1} + u~_{k+1} - b^{-1/2} v u~_k| / max |u~| over interior k."""
        ut = self.rescaled(b)
        if len(ut) < 3:
            return 0.0
        t = self.v / math.sqrt(b)
        d = ut[:-2] + ut[2:] - t * ut[1:-1]
        ref = np.max(np.abs(ut)) * max(1.0, abs(t))
        return float(np.max(np.abs(d)) / ref)

    def nodal_count(self) -> int:
        """Sign changes of the vertex values (informational only)."""
        s = np.sign(self.u[np.abs(self.u) > 1e-14])
        return int(np.sum(s[:-1] * s[1:] < 0))


def _xi(b: float, v: float) -> complex:
    t = v / math.sqrt(b)
    if abs(t) <= 2.0:
        return cmath.exp(1j * math.acos(max(-1.0, min(1.0, 0.5 * t))))
    return 0.5 * (t + math.copysign(math.sqrt(t * t - 4.0), t))


def regime(params: GraphParams, q: Potential, lam: float) -> str:
    """Oscillatory, exponential or boundary, by |b^{-1/2} v(lambda)| against 2."""
    tv = transfer_at(q, lam)
    if tv.log_scale > 700.0:
        return EXPONENTIAL
    v = (params.b + 1.0) * tv.c + params.alpha * tv.s
    return regime_of(params.b, v)


def _scaled_matrix(params: GraphParams, tv) -> np.ndarray:
    """The coefficient matrix divided by exp(log_scale), safe from overflow."""
    m = secular_matrix(params, tv.c_hat, tv.s_hat)
    off = math.exp(-tv.log_scale)
    n = int(params.n)
    for i in range(n + 1):
        for j in (i - 1, i + 1):
            if 0 <= j <= n:
                m[i, j] *= off
    return m


def _boundary_fit(params: GraphParams, tv, r1: float, r2: float) -> np.ndarray:
    """Combine the modes r1^k and r2^k so that the root and leaf rows hold best.

    Any combination satisfies the interior rows.  Fixing it from the root row
    alone leaves the leaf row to absorb the error in lambda, magnified by the
    ratio of the modes; a least-squares fit of both boundary rows on modes
    scaled to unit maximum avoids that.
    """
    n = int(params.n)
    k = np.arange(n + 1)
    modes = []
    for r in (r1, r2):
        lr = math.log(abs(r))
        sg = np.where(k % 2 == 1, math.copysign(1.0, r), 1.0)
        modes.append(sg * np.exp(k * lr - max(0.0, n * lr)))
    m = _scaled_matrix(params, tv)
    rows = m[[0, n]]
    rows = rows / np.sum(np.abs(rows), axis=1, keepdims=True)
    a = np.column_stack([rows @ modes[0], rows @ modes[1]])
    _, _, vt = np.linalg.svd(a)
    x = vt[-1]
    u = x[0] * modes[0] + x[1] * modes[1]
    if params.dirichlet_root:
        u[0] = 0.0
    return u


def vertex_values(params: GraphParams, q: Potential, lam: float) -> DiscreteEigenvector:
    """Vertex values of the eigenvector at the eigenvalue ``lam``.

    At a Dirichlet point (s = 0, possible only for tangential Robin-root
    eigenvalues) the kernel vector u_k = c^k of the coefficient matrix is returned.
    """
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    tv = transfer_at(q, lam)
    c, s = tv.c, tv.s
    v = (b + 1.0) * c + alpha * s
    reg = regime_of(b, v)
    rb = math.sqrt(b)
    if abs(s) <= _DIRICHLET_S_TOL * max(1.0, abs(c)):
        if params.dirichlet_root:
            raise ValueError("Dirichlet points are never eigenvalues with the Dirichlet root")
        cd = math.copysign(1.0, c)
        u = cd ** np.arange(n + 1)
        return DiscreteEigenvector(lam, u, _xi(b, v), reg, 0.0, 0.0, v, kernel=True)
    xi = _xi(b, v)
    k = np.arange(n + 1)
    if reg != EXPONENTIAL:
        theta = cmath.phase(xi) if isinstance(xi, complex) else 0.0
        if abs(math.sin(theta)) < 1e-12:
            # boundary: the two modes merge into k (b^{-1/2} xi)^k
            sgn = 1.0 if v > 0 else -1.0
            if params.dirichlet_root:
                u = k * sgn ** k * b ** (-0.5 * k)
            else:
                u = sgn ** k * b ** (-0.5 * k) * (rb * (k + 1) * sgn - c * k)
            a1, a2 = complex(rb * xi - c), complex(-(rb / xi - c))
        else:
            if params.dirichlet_root:
                u = b ** (-0.5 * k) * np.sin(k * theta)
                a1, a2 = 1.0, -1.0
            else:
                u = b ** (-0.5 * k) * (rb * np.sin((k + 1) * theta) - c * np.sin(k * theta))
                a1, a2 = rb * xi - c, -(rb / xi - c)
    else:
        xi = float(xi.real) if isinstance(xi, complex) else float(xi)
        r1, r2 = xi / rb, 1.0 / (xi * rb)
        if params.dirichlet_root:
            a1, a2 = 1.0, -1.0
        else:
            a1 = rb * xi - c
            bb = rb / xi - c
            # a1 * bb = -s (b c' + alpha c); use it for whichever factor cancels
            prod = -s * (b * tv.cprime + alpha * c)
            if abs(a1) < abs(bb):
                a1 = prod / bb
            else:
                bb = prod / a1
            a2 = -bb
        u = _boundary_fit(params, tv, r1, r2)
    u = np.asarray(np.real(u), dtype=float)
    big = np.max(np.abs(u))
    if big > 0:
        u = u / big
        # fix the overall sign so that the first nonzero entry is positive
        nz = np.nonzero(np.abs(u) > 1e-14)[0]
        if len(nz) and u[nz[0]] < 0:
            u = -u
    return DiscreteEigenvector(lam, u, complex(xi), reg, complex(a1), complex(a2), v)


def coefficient_ratio(params: GraphParams, q: Potential, lam: float) -> float:
    """(b^{1/2} xi - c) / (b^{1/2}/xi - c) at ``lam`` (exponential regime, real)."""
    ev = vertex_values(params, q, lam)
    return float(ev.coefficient_ratio.real)


def residual(params: GraphParams, q: Potential, lam: float, u) -> float:
    """Largest row residual of the vertex system, relative to max|u| and the row norm.

    The row norm adds the sizes of the c and alpha s contributions separately,
    so a diagonal entry that is small only through cancellation does not
    inflate the relative residual.
    """
    tv = transfer_at(q, lam)
    m = _scaled_matrix(params, tv)
    # row norms count |c| and |alpha s| separately, before they cancel
    absm = np.abs(_scaled_matrix(params.with_(alpha=abs(params.alpha)),
                                 TransferValues(lam, abs(tv.c_hat), abs(tv.s_hat), 0.0, tv.log_scale)))
    u = np.asarray(u, dtype=float)
    r = np.abs(m @ u)
    norms = np.sum(absm, axis=1)
    return float(np.max(r / norms) / np.max(np.abs(u)))


def _tangential_slopes(params: GraphParams, tv, u: np.ndarray) -> np.ndarray:
    """Initial slopes A_k on edges 1..n at a Dirichlet point, from the derivative rows."""
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    cd, cpd = math.copysign(1.0, tv.c), tv.cprime
    # unknowns A_1..A_n; rows: root, interior vertices 1..n-1, leaf
    rows, rhs = [], []
    if not params.dirichlet_root:
        r = np.zeros(n)
        r[0] = b
        rows.append(r)
        rhs.append(alpha * u[0])
    for k in range(1, n):
        r = np.zeros(n)
        r[k - 1] = -cd
        r[k] = b
        rows.append(r)
        rhs.append(u[k - 1] * cpd + alpha * u[k])
    r = np.zeros(n)
    r[n - 1] = cd
    rows.append(r)
    rhs.append(-u[n - 1] * cpd - alpha * u[n])
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return sol


def edge_function(params: GraphParams, q: Potential, lam: float, k: int, x_samples,
                  u=None) -> np.ndarray:
    """u(x) on edge k (joining vertices k-1 and k), for x in [0, 1].

    u(x) = u_{k-1} c(x) + A s(x) with A = (u_k - u_{k-1} c) / s.  At a Dirichlet
    point A is fixed by the derivative conditions instead.
    """
    n = int(params.n)
    if not 1 <= k <= n:
        raise ValueError(f"edge index must lie in [1, {n}]")
    if u is None:
        u = vertex_values(params, q, lam).u
    u = np.asarray(u, dtype=float)
    tv = transfer_at(q, lam)
    cx, sx = fundamental_solutions(q, lam, x_samples)
    if abs(tv.s) <= _DIRICHLET_S_TOL * max(1.0, abs(tv.c)):
        slope = _tangential_slopes(params, tv, u)[k - 1]
    else:
        slope = (u[k] - u[k - 1] * tv.c) / tv.s
    return u[k - 1] * cx + slope * sx


def edge_energies(params: GraphParams, q: Potential, lam: float, u=None,
                  npts: int = 201) -> np.ndarray:
    """b^k times the integral of u_k(x)^2 over edge k, for k = 1..n."""
    if u is None:
        u = vertex_values(params, q, lam).u
    xs = np.linspace(0.0, 1.0, npts)
    out = []
    for k in range(1, int(params.n) + 1):
        f = edge_function(params, q, lam, k, xs, u)
        out.append(params.b ** k * simpson(f * f, x=xs))
    return np.array(out)


def weighted_norm(params: GraphParams, q: Potential, lam: float, u=None) -> float:
    """sqrt of sum_k b^k int |u_k|^2, the norm of the symmetric reduction."""
    return float(math.sqrt(np.sum(edge_energies(params, q, lam, u))))


def sample_eigenfunction(params: GraphParams, q: Potential, lam: float,
                         per_edge: int = 41) -> dict:
    """Samples of the eigenfunction on every edge, laid out along [0, n]."""
    ev = vertex_values(params, q, lam)
    xs = np.linspace(0.0, 1.0, per_edge)
    pos, val, edge = [], [], []
    for k in range(1, int(params.n) + 1):
        f = edge_function(params, q, lam, k, xs, ev.u)
        pos.extend(k - 1 + xs)
        val.extend(f)
        edge.extend([k] * len(xs))
    return {"x": np.array(pos), "u": np.array(val), "edge": np.array(edge),
            "vertex_values": ev.u, "regime": ev.regime, "nodal_count": ev.nodal_count()}


__all__ = ["DiscreteEigenvector", "vertex_values", "regime", "residual", "edge_function",
           "edge_energies", "weighted_norm", "coefficient_ratio", "sample_eigenfunction",
           "OSCILLATORY", "EXPONENTIAL", "BOUNDARY"]
