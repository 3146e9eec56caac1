"""Secular determinants D_n(y, z) and their Dirichlet-root variant.

With y = c(lambda), z = s(lambda) and v = (b+1) y + alpha z, both
determinants follow X_n = v X_{n-1} - b X_{n-2}; only the initial data
differ:

    Robin root      D_0 = alpha z,   D_{-1} = 1 - y^2
    Dirichlet root  D_0 = 1,         D_{-1} = y

Three evaluation paths are provided (renormalized recurrence, P/Q
composition, dense matrix determinant) and are cross-checked in the tests.
For fixed z the roots in y are eigenvalues of a symmetric tridiagonal pencil,
which is how the zero-set components are separated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, eigh_tridiagonal, lu_factor

from .orthopoly import pq_recurrence
from .potential import LN2, Potential, TransferValues, transfer_at

ROBIN = "robin"
DIRICHLET = "dirichlet"

MATRIX_DET_MAX_N = 30


@dataclass(frozen=True)
class GraphParams:
    """Level count ``n``, branching ``b``, Robin parameter ``alpha`` and root condition."""

    n: int
    b: float
    alpha: float
    root_condition: str = ROBIN

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"need an integer n >= 1, got {self.n}")
        if not self.b > 1:
            raise ValueError(f"branching factor must exceed 1, got {self.b}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.root_condition not in (ROBIN, DIRICHLET):
            raise ValueError(f"root condition must be {ROBIN!r} or {DIRICHLET!r}")

    @property
    def dirichlet_root(self) -> bool:
        return self.root_condition == DIRICHLET

    def with_(self, **kw) -> "GraphParams":
        data = dict(n=self.n, b=self.b, alpha=self.alpha, root_condition=self.root_condition)
        data.update(kw)
        return GraphParams(**data)

    def to_dict(self) -> dict:
        return {"n": int(self.n), "b": float(self.b), "alpha": float(self.alpha),
                "root_condition": self.root_condition}

    @classmethod
    def from_dict(cls, data: dict) -> "GraphParams":
        return cls(int(data["n"]), float(data["b"]), float(data["alpha"]),
                   data.get("root_condition", ROBIN))


@dataclass(frozen=True)
class SecularValue:
    """Overflow-safe determinant value ``value_hat * exp(log_scale)``."""

    value_hat: float
    log_scale: float = 0.0

    @property
    def sign(self) -> int:
        return int(np.sign(self.value_hat))

    @property
    def value(self) -> float:
        if self.value_hat == 0.0:
            return 0.0
        if self.log_scale > 700.0:
            return math.copysign(math.inf, self.value_hat)
        return self.value_hat * math.exp(self.log_scale)

    @property
    def log_abs(self) -> float:
        return -math.inf if self.value_hat == 0.0 else math.log(abs(self.value_hat)) + self.log_scale


def _normalized(x: float, y: float, log_scale: float):
    big = max(abs(x), abs(y))
    if big == 0.0 or not math.isfinite(big):
        return x, y, log_scale
    e = math.frexp(big)[1]
    return math.ldexp(x, -e), math.ldexp(y, -e), log_scale + e * LN2


def _finish(value: float, log_scale: float) -> SecularValue:
    if value == 0.0 or not math.isfinite(value):
        return SecularValue(value, log_scale)
    m, e = math.frexp(value)
    return SecularValue(m, log_scale + e * LN2)


def dd_eval_scaled(params: GraphParams, y_hat: float, z_hat: float,
                   log_scale: float = 0.0) -> SecularValue:
    """D_n at y = y_hat e^L, z = z_hat e^L with L = ``log_scale``.

    The recurrence is run on D_k / e^{(k+1) L} (Robin) or D_k / e^{k L}
    (Dirichlet root); both obey X_k = v_hat X_{k-1} - b e^{-2L} X_{k-2}.
    """
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    L = float(log_scale)
    damp = math.exp(-2.0 * L) if L < 350.0 else 0.0
    v_hat = (b + 1.0) * y_hat + alpha * z_hat
    if params.dirichlet_root:
        prev = 1.0                                       # D_0
        cur = v_hat - b * y_hat                          # D_1 / e^L
        acc = n * L
    else:
        prev = alpha * z_hat                             # D_0 / e^L
        cur = v_hat * alpha * z_hat + b * y_hat * y_hat - b * damp  # D_1 / e^{2L}
        acc = (n + 1) * L
    # carry the pair (prev, cur) with a shared scale; each step multiplies by e^L
    scale = 0.0
    for _ in range(n - 1):
        prev, cur = cur, v_hat * cur - b * damp * prev
        prev, cur, scale = _normalized(prev, cur, scale)
    return _finish(cur, acc + scale)


def dd_eval(params: GraphParams, y: float, z: float) -> SecularValue:
    """D_n(y, z) (or the Dirichlet-root determinant) by the renormalized recurrence."""
    return dd_eval_scaled(params, float(y), float(z), 0.0)


def dd_value(params: GraphParams, y: float, z: float) -> float:
    return dd_eval(params, y, z).value


def dd_via_pq(params: GraphParams, y: float, z: float) -> float:
    """D_n = alpha z P_n(v) + (1 - y^2) Q_n(v) or D_n = P_n(v) + y Q_n(v)."""
    v = (params.b + 1.0) * y + params.alpha * z
    p, q = pq_recurrence(int(params.n), float(params.b), v)
    if params.dirichlet_root:
        return p + y * q
    return params.alpha * z * p + (1.0 - y * y) * q


def secular_matrix(params: GraphParams, y: float, z: float) -> np.ndarray:
    """The (n+1) x (n+1) coefficient matrix of the discrete vertex system."""
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    m = np.zeros((n + 1, n + 1))
    inner = y * (b + 1.0) + z * alpha
    for i in range(1, n):
        m[i, i] = inner
        m[i, i - 1] = -1.0
        m[i, i + 1] = -b
    m[n, n - 1] = -1.0
    m[n, n] = y + z * alpha
    if params.dirichlet_root:
        m[0, 0] = 1.0
    else:
        m[0, 0] = y * b + z * alpha
        m[0, 1] = -b
    return m


def dd_matrix_det(params: GraphParams, y: float, z: float) -> float:
    """Determinant of the coefficient matrix via LU with partial pivoting (oracle)."""
    if params.n > MATRIX_DET_MAX_N:
        raise ValueError(f"matrix determinant is an oracle for n <= {MATRIX_DET_MAX_N}")
    with warnings.catch_warnings():
        # an exactly singular matrix is a legitimate answer here (determinant 0)
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(secular_matrix(params, y, z), check_finite=True)
    swaps = int(np.sum(piv != np.arange(len(piv))))
    return float((-1) ** swaps * np.prod(np.diag(lu)))


def secular_at(params: GraphParams, q: Potential, lam: float,
               tv: TransferValues | None = None) -> SecularValue:
    """D_n(c(lambda), s(lambda)) with the transfer and determinant scales combined."""
    if tv is None:
        tv = transfer_at(q, lam)
    return dd_eval_scaled(params, tv.c_hat, tv.s_hat, tv.log_scale)


# ---------------------------------------------------------------------------
# pencils for the zero-set components


def pencil_diagonal(params: GraphParams) -> np.ndarray:
    """Coefficients of y on the diagonal of the (reduced) coefficient matrix."""
    n, b = int(params.n), float(params.b)
    if params.dirichlet_root:
        return np.array([b + 1.0] * (n - 1) + [1.0])
    return np.array([b] + [b + 1.0] * (n - 1) + [1.0])


def y_roots(params: GraphParams, z: float) -> np.ndarray:
    """All roots in y of D_n(., z), increasing (n+1 for Robin, n for Dirichlet root).

    det(alpha z I + y diag(dg) + offdiag) = 0 is a symmetric-definite pencil,
    so the roots are eigenvalues of a symmetric tridiagonal matrix.
    """
    dg = pencil_diagonal(params)
    d = -params.alpha * z / dg
    if len(dg) == 1:
        return d.copy()
    e = np.sqrt(params.b / (dg[:-1] * dg[1:]))
    return eigh_tridiagonal(d, e, eigvals_only=True)


def y_roots_many(params: GraphParams, zs) -> np.ndarray:
    """Row i holds y_roots at zs[i]."""
    zs = np.atleast_1d(np.asarray(zs, dtype=float))
    return np.array([y_roots(params, z) for z in zs])


def z_roots(params: GraphParams, y: float) -> np.ndarray:
    """All roots in z of D_n(y, .), increasing; requires alpha != 0."""
    if params.alpha == 0.0:
        raise ValueError("for alpha = 0 the zero set consists of vertical lines")
    dg = pencil_diagonal(params)
    d = -y * dg
    if len(dg) == 1:
        w = d.copy()
    else:
        w = eigh_tridiagonal(d, np.full(len(dg) - 1, math.sqrt(params.b)), eigvals_only=True)
    return np.sort(w / params.alpha)


def leading_factor(params: GraphParams) -> float:
    """The product of the pencil diagonal, so D_n = factor * prod_k (y - g^k(z))."""
    return float(np.prod(pencil_diagonal(params)))
