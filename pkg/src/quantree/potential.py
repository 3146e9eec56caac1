"""Symmetric edge potentials and the transfer functions c(lambda), s(lambda).

For the edge operator -u'' + q u = lambda u on [0, 1], ``c(x, lambda)`` and
``s(x, lambda)`` are the solutions with (c, c')(0) = (1, 0) and
(s, s')(0) = (0, 1).  Every spectral quantity in this package is driven by
the endpoint values c(lambda) = c(1, lambda) and s(lambda) = s(1, lambda),
together with c'(1, lambda) which enters the Wronskian identity
c^2 - s c' = 1 (valid because q is symmetric about x = 1/2).

Values are carried with a shared logarithmic scale so that the very large
numbers met at strongly negative energies never overflow.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import CountMismatchError, IntegrationError

LN2 = math.log(2.0)

ZERO = "zero"
PIECEWISE_CONSTANT = "piecewise_constant"
SAMPLED = "sampled"

_SYM_TOL = 1e-12


@dataclass(frozen=True)
class Potential:
    """A bounded potential on [0, 1] with q(1 - x) = q(x).

    Use the constructors :meth:`zero`, :meth:`piecewise_constant`,
    :meth:`step` and :meth:`sampled` rather than building instances directly.
    For ``piecewise_constant`` the value ``values[i]`` holds on the interval
    between ``breakpoints[i-1]`` and ``breakpoints[i]`` (with 0 and 1 as the
    outer ends).  ``sampled`` values live on a uniform grid including both
    endpoints and are interpolated linearly.
    """

    kind: str
    breakpoints: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind == ZERO:
            if self.breakpoints or self.values:
                raise ValueError("the zero potential takes no data")
        elif self.kind == PIECEWISE_CONSTANT:
            bps, vals = self.breakpoints, self.values
            if len(vals) != len(bps) + 1:
                raise ValueError("need exactly one more value than breakpoints")
            if any(not (0.0 < x < 1.0) for x in bps):
                raise ValueError("breakpoints must lie strictly inside (0, 1)")
            if any(b <= a for a, b in zip(bps, bps[1:])):
                raise ValueError("breakpoints must be strictly increasing")
            if not all(math.isfinite(v) for v in vals):
                raise ValueError("potential values must be finite")
            mirrored = [1.0 - x for x in reversed(bps)]
            if any(abs(a - b) > _SYM_TOL for a, b in zip(bps, mirrored)) or any(
                abs(a - b) > _SYM_TOL for a, b in zip(vals, reversed(vals))
            ):
                raise ValueError("potential is not symmetric about x = 1/2")
        elif self.kind == SAMPLED:
            if len(self.values) < 2:
                raise ValueError("a sampled potential needs at least two samples")
            if not all(math.isfinite(v) for v in self.values):
                raise ValueError("potential values must be finite")
            vals = self.values
            if any(abs(a - b) > _SYM_TOL for a, b in zip(vals, reversed(vals))):
                raise ValueError("sampled potential is not palindromic")
        else:
            raise ValueError(f"unknown potential kind {self.kind!r}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Potential":
        return cls(ZERO)

    @classmethod
    def piecewise_constant(cls, breakpoints: Sequence[float], values: Sequence[float]) -> "Potential":
        return cls(PIECEWISE_CONSTANT, tuple(float(x) for x in breakpoints),
                   tuple(float(v) for v in values))

    @classmethod
    def step(cls, height: float, left: float = 1.0 / 3.0, right: float = 2.0 / 3.0) -> "Potential":
        """``height`` times the indicator of [left, right], e.g. -16 on [1/3, 2/3]."""
        if not math.isclose(left + right, 1.0, abs_tol=_SYM_TOL):
            raise ValueError("step must be centred at x = 1/2")
        return cls.piecewise_constant([left, right], [0.0, height, 0.0])

    @classmethod
    def constant(cls, value: float) -> "Potential":
        return cls.piecewise_constant([], [value])

    @classmethod
    def sampled(cls, values: Sequence[float], symmetrize: bool = True) -> "Potential":
        """Samples on the uniform grid x_i = i / (len(values) - 1).

        The samples are averaged with their mirror image; a warning is issued
        when the input deviates from symmetry by more than 1e-8.
        """
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("sampled potential must be one-dimensional")
        if symmetrize:
            dev = float(np.max(np.abs(arr - arr[::-1]))) if arr.size else 0.0
            if dev > 1e-8:
                warnings.warn(f"sampled potential asymmetric by {dev:.3g}; symmetrizing",
                              stacklevel=2)
            arr = 0.5 * (arr + arr[::-1])
        return cls(SAMPLED, (), tuple(float(v) for v in arr))

    # -- evaluation ---------------------------------------------------------

    @cached_property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, len(self.values)) if self.kind == SAMPLED else np.empty(0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == ZERO:
            return np.zeros_like(x)
        if self.kind == PIECEWISE_CONSTANT:
            idx = np.searchsorted(np.asarray(self.breakpoints), x, side="right")
            return np.asarray(self.values)[idx]
        return np.interp(x, self.grid, np.asarray(self.values))

    def pieces(self) -> list[tuple[float, float, float]]:
        """Constant pieces ``(x0, x1, value)``; only for zero/piecewise-constant kinds."""
        if self.kind == ZERO:
            return [(0.0, 1.0, 0.0)]
        if self.kind == PIECEWISE_CONSTANT:
            edges = (0.0,) + self.breakpoints + (1.0,)
            return [(edges[i], edges[i + 1], self.values[i]) for i in range(len(self.values))]
        raise TypeError("sampled potentials have no constant pieces")

    @property
    def discontinuities(self) -> tuple:
        return self.breakpoints if self.kind == PIECEWISE_CONSTANT else ()

    def bounds(self) -> tuple[float, float]:
        if self.kind == ZERO:
            return 0.0, 0.0
        return float(min(self.values)), float(max(self.values))

    def integral(self) -> float:
        """The integral of q over [0, 1]."""
        if self.kind == ZERO:
            return 0.0
        if self.kind == PIECEWISE_CONSTANT:
            return float(sum((x1 - x0) * v for x0, x1, v in self.pieces()))
        return float(np.trapezoid(np.asarray(self.values), self.grid))

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == PIECEWISE_CONSTANT:
            out["breakpoints"] = list(self.breakpoints)
            out["values"] = list(self.values)
        elif self.kind == SAMPLED:
            out["values"] = list(self.values)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Potential":
        kind = data.get("kind")
        if kind == ZERO:
            return cls.zero()
        if kind == PIECEWISE_CONSTANT:
            return cls.piecewise_constant(data.get("breakpoints", []), data["values"])
        if kind == SAMPLED:
            return cls.sampled(data["values"])
        raise ValueError(f"unknown potential kind {kind!r}")


# ---------------------------------------------------------------------------
# transfer matrices


@dataclass(frozen=True)
class TransferValues:
    """c(lambda), s(lambda) and c'(1, lambda) sharing one log scale.

    The true values are ``c_hat * exp(log_scale)`` etc.; ``max(|c_hat|, |s_hat|)``
    is kept in [1/2, 1).
    """

    lam: float
    c_hat: float
    s_hat: float
    cp_hat: float
    log_scale: float = 0.0

    @property
    def scale(self) -> float:
        return math.exp(self.log_scale)

    @property
    def c(self) -> float:
        return self.c_hat * math.exp(self.log_scale)

    @property
    def s(self) -> float:
        return self.s_hat * math.exp(self.log_scale)

    @property
    def cprime(self) -> float:
        return self.cp_hat * math.exp(self.log_scale)

    def wronskian_defect(self) -> float:
        """Relative defect of c^2 - s c' = 1."""
        lhs = self.c_hat ** 2 - self.s_hat * self.cp_hat
        rhs = math.exp(-2.0 * self.log_scale)
        ref = max(self.c_hat ** 2, abs(self.s_hat * self.cp_hat), rhs)
        return abs(lhs - rhs) / ref


def _sinc(x: float) -> float:
    return 1.0 - x * x / 6.0 if abs(x) < 1e-6 else math.sin(x) / x


def _sinhc(x: float) -> float:
    return 1.0 + x * x / 6.0 if abs(x) < 1e-6 else math.sinh(x) / x


def _piece_matrix(value: float, lam: float, length: float):
    """Transfer matrix of -u'' + value*u = lam*u across ``length``.

    Returns ``((m00, m01, m10, m11), log_scale)``.
    """
    kappa2 = value - lam
    if kappa2 > 0.0:
        kappa = math.sqrt(kappa2)
        x = kappa * length
        if x < 20.0:
            ch = math.cosh(x)
            return (ch, length * _sinhc(x), kappa * math.sinh(x), ch), 0.0
        e = math.exp(-2.0 * x)
        p, m = 0.5 * (1.0 + e), 0.5 * (1.0 - e)
        return (p, m / kappa, kappa * m, p), x
    k = math.sqrt(-kappa2)
    x = k * length
    cs = math.cos(x)
    return (cs, length * _sinc(x), -k * math.sin(x), cs), 0.0


def _renormalize(m, log_scale):
    big = max(abs(v) for v in m)
    if big == 0.0 or not math.isfinite(big):
        return m, log_scale
    e = math.frexp(big)[1]
    return tuple(math.ldexp(v, -e) for v in m), log_scale + e * LN2


def _compose(second, first):
    """Matrix product second @ first for 2x2 tuples."""
    a, b, c, d = second
    p, q, r, s = first
    return (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)


def _matrix_exact(q: Potential, lam: float, x0: float = 0.0, x1: float = 1.0):
    m, log_scale = (1.0, 0.0, 0.0, 1.0), 0.0
    for a, b, value in q.pieces():
        lo, hi = max(a, x0), min(b, x1)
        if hi <= lo:
            continue
        pm, pl = _piece_matrix(value, lam, hi - lo)
        m, log_scale = _renormalize(_compose(pm, m), log_scale + pl)
    return m, log_scale


def _rhs(q: Potential, lam: float):
    if q.kind == PIECEWISE_CONSTANT:
        bps = np.asarray(q.breakpoints)
        vals = q.values

        def qx(x):
            return vals[int(np.searchsorted(bps, x, side="right"))]
    elif q.kind == SAMPLED:
        grid, vals = q.grid, np.asarray(q.values)

        def qx(x):
            return float(np.interp(x, grid, vals))
    else:
        def qx(x):
            return 0.0

    def f(x, y):
        w = qx(x) - lam
        return (y[2], y[3], w * y[0], w * y[1])

    return f


def _matrix_integrated(q: Potential, lam: float, x0: float = 0.0, x1: float = 1.0,
                       rtol: float = 1e-12):
    """Fundamental matrix by adaptive 8(5,3) Runge-Kutta, piece by piece."""
    knots = [x0] + [x for x in q.discontinuities if x0 < x < x1] + [x1]
    growth = math.sqrt(max(q.bounds()[1] - lam, 0.0))
    rhs = _rhs(q, lam)
    m, log_scale = (1.0, 0.0, 0.0, 1.0), 0.0
    for a, b in zip(knots, knots[1:]):
        nseg = max(1, math.ceil(growth * (b - a) / 30.0))
        edges = np.linspace(a, b, nseg + 1)
        for lo, hi in zip(edges, edges[1:]):
            sol = solve_ivp(rhs, (lo, hi), [1.0, 0.0, 0.0, 1.0], method="DOP853",
                            rtol=rtol, atol=rtol * 1e-2)
            if not sol.success:
                raise IntegrationError(f"integration failed on [{lo}, {hi}]: {sol.message}")
            u1, u2, p1, p2 = sol.y[:, -1]
            seg = (u1, u2, p1, p2)
            # relative to the products, which cancel when the solutions grow
            defect = abs(u1 * p2 - u2 * p1 - 1.0) / max(1.0, abs(u1 * p2), abs(u2 * p1))
            if defect > 1e-6:
                raise IntegrationError(
                    f"Wronskian drift {defect:.2e} on [{lo}, {hi}]", achieved_tolerance=defect)
            m, log_scale = _renormalize(_compose(seg, m), log_scale)
    return m, log_scale


def transfer_matrix(q: Potential, lam: float, x0: float = 0.0, x1: float = 1.0,
                    method: str = "auto"):
    """Scaled fundamental matrix ``((u1, u2, u1', u2'), log_scale)`` from x0 to x1."""
    if method == "auto":
        method = "integrate" if q.kind == SAMPLED else "exact"
    if method == "exact":
        return _matrix_exact(q, lam, x0, x1)
    if method == "integrate":
        return _matrix_integrated(q, lam, x0, x1)
    raise ValueError(f"unknown method {method!r}")


def transfer_at(q: Potential, lam: float, method: str = "auto") -> TransferValues:
    """c(lambda), s(lambda) and c'(1, lambda) for the potential ``q``.

    ``method="exact"`` multiplies closed-form interval matrices (zero and
    piecewise-constant potentials); ``"integrate"`` runs an adaptive
    high-order integrator and works for every kind.
    """
    lam = float(lam)
    (c, s, cp, _), log_scale = transfer_matrix(q, lam, method=method)
    big = max(abs(c), abs(s))
    e = math.frexp(big)[1]
    return TransferValues(lam, math.ldexp(c, -e), math.ldexp(s, -e), math.ldexp(cp, -e),
                          log_scale + e * LN2)


def fundamental_solutions(q: Potential, lam: float, xs) -> tuple[np.ndarray, np.ndarray]:
    """Unscaled samples of c(x, lambda) and s(x, lambda) at the points ``xs``."""
    xs = np.asarray(xs, dtype=float)
    cvals = np.empty_like(xs)
    svals = np.empty_like(xs)
    for i, x in enumerate(xs):
        (c, s, _, _), log_scale = transfer_matrix(q, lam, 0.0, float(x))
        f = math.exp(log_scale)
        cvals[i], svals[i] = c * f, s * f
    return cvals, svals


# ---------------------------------------------------------------------------
# Dirichlet spectrum


@dataclass(frozen=True)
class DirichletSpectrum:
    """Dirichlet eigenvalues lambda_D^1 < lambda_D^2 < ... up to ``lambda_max``."""

    values: tuple
    lambda_max: float

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def kth(self, k: int) -> float:
        """The k-th Dirichlet eigenvalue, counting from k = 1."""
        return self.values[k - 1]


def to_mu(lam):
    lam = np.asarray(lam, dtype=float)
    return np.sign(lam) * np.sqrt(np.abs(lam))


def from_mu(mu):
    mu = np.asarray(mu, dtype=float)
    return np.abs(mu) * mu


def _s_value(q: Potential, lam: float) -> float:
    tv = transfer_at(q, lam)
    return tv.s_hat * math.exp(min(tv.log_scale, 700.0))


def _roots_in_group(q: Potential, lo: float, hi: float, expected: int,
                    max_doublings: int = 10) -> list[float]:
    npts = max(16, 8 * expected)
    mu_lo, mu_hi = float(to_mu(lo)), float(to_mu(hi))
    for _ in range(max_doublings + 1):
        lams = from_mu(np.linspace(mu_lo, mu_hi, npts + 1))
        vals = np.array([_s_value(q, x) for x in lams])
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if len(idx) == expected:
            return [brentq(lambda x: _s_value(q, x), lams[i], lams[i + 1],
                           xtol=1e-14, rtol=1e-13) for i in idx]
        npts *= 2
    raise CountMismatchError(
        f"found {len(idx)} Dirichlet eigenvalues in [{lo}, {hi}], expected {expected}",
        window=(lo, hi), expected=expected, found=len(idx))


@lru_cache(maxsize=256)
def _dirichlet_cached(q: Potential, lambda_max: float) -> tuple:
    qmin, qmax = q.bounds()
    # min-max comparison: lambda_D^k lies in [k^2 pi^2 + qmin, k^2 pi^2 + qmax]
    windows = []
    k = 1
    while k * k * math.pi ** 2 + qmin <= lambda_max:
        centre = k * k * math.pi ** 2
        pad = 1e-6 * max(1.0, abs(centre)) + 1e-9
        windows.append([centre + qmin - pad, centre + qmax + pad])
        k += 1
    groups = []
    for w in windows:
        if groups and w[0] <= groups[-1][1]:
            groups[-1][1] = w[1]
            groups[-1][2] += 1
        else:
            groups.append([w[0], w[1], 1])
    roots = []
    for lo, hi, count in groups:
        roots.extend(_roots_in_group(q, lo, hi, count))
    return tuple(r for r in roots if r <= lambda_max)


def dirichlet_spectrum(q: Potential, lambda_max: float) -> DirichletSpectrum:
    """All roots of s(lambda) up to ``lambda_max``."""
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    return DirichletSpectrum(_dirichlet_cached(q, float(lambda_max)), float(lambda_max))


def dirichlet_eigenvalues(q: Potential, count: int) -> tuple:
    """The first ``count`` Dirichlet eigenvalues."""
    qmin, qmax = q.bounds()
    lam_max = (count + 0.5) ** 2 * math.pi ** 2 + qmin
    vals = dirichlet_spectrum(q, lam_max).values
    if len(vals) < count:
        raise CountMismatchError(f"expected {count} Dirichlet eigenvalues, got {len(vals)}")
    return vals[:count]


# ---------------------------------------------------------------------------
# spiral curve


@dataclass(frozen=True)
class SpiralSample:
    """Samples of the curve (y, z) = (c(lambda), s(lambda)), uniform in mu."""

    mu: np.ndarray = field(repr=False)
    lam: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)


def sample_spiral(q: Potential, mu_min: float, mu_max: float, npts: int) -> SpiralSample:
    """Sample the spiral at ``npts`` points uniform in mu = sgn(lambda) sqrt|lambda|."""
    if not mu_min < mu_max:
        raise ValueError("need mu_min < mu_max")
    if npts < 2:
        raise ValueError("need at least two points")
    mu = np.linspace(mu_min, mu_max, int(npts))
    lam = from_mu(mu)
    y = np.empty_like(mu)
    z = np.empty_like(mu)
    with np.errstate(over="ignore"):
        for i, x in enumerate(lam):
            tv = transfer_at(q, float(x))
            f = math.exp(tv.log_scale) if tv.log_scale < 709 else math.inf
            y[i], z[i] = tv.c_hat * f, tv.s_hat * f
    return SpiralSample(mu, lam, y, z)
