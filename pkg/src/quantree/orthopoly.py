"""Constant-coefficient orthogonal polynomials P_n, Q_n in v.

Both families obey X_n = v X_{n-1} - b X_{n-2}, with P_0 = 1, P_{-1} = 0 and
Q_0 = 0, Q_{-1} = 1, so that Q_{n+1} = -b P_n.  Their Jacobi matrix has zero
diagonal and constant off-diagonal sqrt(b), which makes the roots, Gaussian
weights and moments cheap to compute from a symmetric tridiagonal eigenproblem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

# distance from |v| = 2 sqrt(b) inside which the closed form is avoided
_XI_GUARD = 1e-6


@dataclass(frozen=True)
class PolyParams:
    b: float
    n: int

    def __post_init__(self):
        if not self.b > 1:
            raise ValueError(f"branching factor must exceed 1, got {self.b}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"degree index must be a nonnegative integer, got {self.n}")

    def to_dict(self) -> dict:
        return {"b": float(self.b), "n": int(self.n)}


@dataclass(frozen=True)
class QuadratureMeasure:
    """Gaussian nodes and weights of psi_n, with moments mu_k^(n), k < 2n."""

    params: PolyParams
    nodes: np.ndarray
    weights: np.ndarray
    moments: np.ndarray

    def moment(self, k: int) -> float:
        return float(np.sum(self.weights * self.nodes ** k))


def _recurrence(n: int, b: float, v: float, x0: float, xm1: float) -> float:
    prev, cur = xm1, x0
    for _ in range(n):
        prev, cur = cur, v * cur - b * prev
    return cur


def pq_recurrence(n: int, b: float, v: float) -> tuple[float, float]:
    """(P_n(v), Q_n(v)) straight from the three-term recurrence."""
    if n == -1:
        return 0.0, 1.0
    return _recurrence(n, b, v, 1.0, 0.0), _recurrence(n, b, v, 0.0, 1.0)


def pq_closed_form(n: int, b: float, v: float) -> tuple[float, float]:
    """(P_n, Q_n) through xi + 1/xi = v / sqrt(b), valid for |v| != 2 sqrt(b).

    Outside the root region xi is real with |xi| > 1; inside it xi = exp(i theta)
    and the ratios become sin((n+1) theta) / sin(theta).
    """
    rb = math.sqrt(b)
    t = v / rb
    if abs(t) > 2.0:
        xi = 0.5 * (t + math.copysign(math.sqrt(t * t - 4.0), t))
        # ratio (xi^m - xi^-m)/(xi - 1/xi) written to avoid overflow in xi^-m
        def u(m):
            if m == 0:
                return 0.0
            return (xi ** m - xi ** (-m)) / (xi - 1.0 / xi)
    else:
        theta = math.acos(max(-1.0, min(1.0, 0.5 * t)))
        st = math.sin(theta)

        def u(m):
            return math.sin(m * theta) / st
    p = b ** (0.5 * n) * u(n + 1)
    q = -(b ** (0.5 * (n + 1))) * u(n)
    return p, q


def pq_eval(params: PolyParams, v: float, method: str = "recurrence") -> tuple[float, float]:
    """Evaluate (P_n(v), Q_n(v)).

    ``method="closed"`` uses the xi representation except within 1e-6 of
    |v| = 2 sqrt(b), where the recurrence is used instead.
    """
    n, b = int(params.n), float(params.b)
    v = float(v)
    if method == "closed" and abs(abs(v) - 2.0 * math.sqrt(b)) > _XI_GUARD:
        return pq_closed_form(n, b, v)
    if method not in ("recurrence", "closed"):
        raise ValueError(f"unknown method {method!r}")
    return pq_recurrence(n, b, v)


def pq_values(n: int, b: float, v) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized recurrence for arrays of v."""
    v = np.asarray(v, dtype=float)
    p_prev, p = np.zeros_like(v), np.ones_like(v)
    q_prev, q = np.ones_like(v), np.zeros_like(v)
    for _ in range(n):
        p_prev, p = p, v * p - b * p_prev
        q_prev, q = q, v * q - b * q_prev
    return p, q


def jacobi_roots(n: int, b: float) -> np.ndarray:
    """Roots of P_n: eigenvalues of the n x n tridiagonal with off-diagonal sqrt(b)."""
    if n <= 0:
        return np.empty(0)
    if n == 1:
        return np.zeros(1)
    w = eigh_tridiagonal(np.zeros(n), np.full(n - 1, math.sqrt(b)), eigvals_only=True)
    w = np.sort(w)
    return 0.5 * (w - w[::-1])  # exact odd symmetry


def pq_roots(params: PolyParams) -> tuple[np.ndarray, np.ndarray]:
    """Roots (increasing) of P_n and of Q_n = -b P_{n-1}."""
    if params.n < 1:
        raise ValueError("need n >= 1")
    return jacobi_roots(params.n, params.b), jacobi_roots(params.n - 1, params.b)


def quadrature_measure(params: PolyParams) -> QuadratureMeasure:
    """Golub-Welsch nodes and weights for psi_n, normalized to total mass 1."""
    n, b = int(params.n), float(params.b)
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        nodes, weights = np.zeros(1), np.ones(1)
    else:
        nodes, vecs = eigh_tridiagonal(np.zeros(n), np.full(n - 1, math.sqrt(b)))
        weights = vecs[0, :] ** 2
        weights = weights / weights.sum()
        # symmetrize: the measure is even
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
    ks = np.arange(2 * n)
    # pair each node with its mirror image so odd moments cancel exactly
    moments = np.array([np.sum(0.5 * (t + t[::-1])) for t in (weights * nodes ** k for k in ks)])
    return QuadratureMeasure(params, nodes, weights, moments)


def raw_moments(params: PolyParams, kmax: int) -> np.ndarray:
    """Moments mu_k^(n) of psi_n for k = 0..kmax, without forcing odd ones to zero."""
    qm = quadrature_measure(params)
    return np.array([np.sum(qm.weights * qm.nodes ** k) for k in range(kmax + 1)])


def limiting_root_density(b: float, v):
    """2 sqrt(b) / (pi sqrt(4b - v^2)) on |v| < 2 sqrt(b).

    Note this integrates to 2 sqrt(b), not 1, over the root interval.
    """
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) >= 2.0 * math.sqrt(b)):
        raise ValueError("density is only defined for |v| < 2 sqrt(b)")
    out = 2.0 * math.sqrt(b) / (math.pi * np.sqrt(4.0 * b - v * v))
    return float(out) if out.ndim == 0 else out


def leading_coefficients(params: PolyParams, num_terms: int = 2) -> dict:
    """Leading coefficients of P_n and Q_n, highest power first.

    The j-th term of P_n is (-b)^j C(n-j, j) v^(n-2j); Q_n = -b P_{n-1}.
    Only the polynomial part (nonnegative powers) is returned.
    """
    if num_terms > 4:
        raise ValueError("at most four leading terms are supported")
    if num_terms < 1:
        raise ValueError("need at least one term")
    n, b = int(params.n), float(params.b)
    if n < 1:
        raise ValueError("need n >= 1")
    p_pow, p_coef, q_pow, q_coef = [], [], [], []
    for j in range(num_terms):
        if n - 2 * j >= 0:
            p_pow.append(n - 2 * j)
            p_coef.append((-b) ** j * math.comb(n - j, j))
        if n - 1 - 2 * j >= 0:
            q_pow.append(n - 1 - 2 * j)
            q_coef.append(-b * (-b) ** j * math.comb(n - 1 - j, j))
    return {"P": {"powers": p_pow, "coefficients": p_coef},
            "Q": {"powers": q_pow, "coefficients": q_coef}}


def ratio_expansion_check(params: PolyParams, v: float, truncation: int) -> tuple[float, float]:
    """Both sides of the moment expansion of -b P_{n+1}(v) / (v Q_{n+1}(v)).

    With psi_n normalized to unit mass the series reads
    1 - b v^-2 sum_{j <= truncation} v^-j mu_j^(n).
    """
    n, b = int(params.n), float(params.b)
    if n < 1:
        raise ValueError("need n >= 1")
    if abs(v) <= 2.0 * math.sqrt(b):
        raise ValueError("v must lie outside the root interval |v| <= 2 sqrt(b)")
    if truncation < 0 or truncation > 2 * n - 1:
        raise ValueError("truncation must be between 0 and 2n - 1")
    p1, q1 = pq_recurrence(n + 1, b, v)
    lhs = -b * p1 / (v * q1)
    mu = quadrature_measure(params).moments
    series = sum(mu[j] * v ** (-j) for j in range(truncation + 1))
    rhs = 1.0 - b * series / (v * v)
    return lhs, rhs
