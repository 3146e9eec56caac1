"""Small independent reference computations shared by the tests."""

import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from quantree import Potential


def ivp_transfer(q: Potential, lam: float):
    """c(1), s(1), c'(1) by a plain RK45 run, independent of the package's own paths."""
    y = np.array([1.0, 0.0, 0.0, 1.0])
    for a, b, v in q.pieces():
        sol = solve_ivp(lambda x, w: [w[1], (v - lam) * w[0], w[3], (v - lam) * w[2]],
                        (a, b), y, method="RK45", rtol=1e-12, atol=1e-14)
        y = sol.y[:, -1]
    return y[0], y[2], y[1]


def fd_dirichlet_interval(q: Potential, cells: int, count: int) -> np.ndarray:
    """Lowest Dirichlet eigenvalues of -u'' + q u on [0, 1] by three-point differences.

    The potential at a node is the mean of the two adjacent cell midpoints,
    which keeps the scheme second order when jumps sit on nodes.
    """
    h = 1.0 / cells
    mids = (np.arange(cells) + 0.5) * h
    qc = np.asarray(q(mids), dtype=float)
    qn = 0.5 * (qc[:-1] + qc[1:])
    w = eigh_tridiagonal(2.0 / h ** 2 + qn, -np.ones(cells - 2) / h ** 2, eigvals_only=True,
                         select="i", select_range=(0, count - 1))
    return w


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


PI2 = math.pi ** 2
