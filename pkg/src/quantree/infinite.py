"""Bands, gap eigenvalues and density of states of the semi-infinite tree.

The absolutely continuous spectrum is the closure of the oscillatory regime
|b^{-1/2} v(lambda)| <= 2 with v = (b+1) c + alpha s.  With the Dirichlet root
the point spectrum is the Dirichlet spectrum of the edge; with the Robin root
an energy outside the bands is an eigenvalue when the growing mode of the
vertex recurrence is absent, i.e. b (c - 1/c) + alpha s = 0 together with
|c| > sqrt(b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .determinants import DIRICHLET, ROBIN
from .potential import Potential, dirichlet_spectrum, from_mu, to_mu, transfer_at

_SAMPLES_PER_UNIT_MU = 200


@dataclass(frozen=True)
class Band:
    lo: float
    hi: float
    truncated: bool = False

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, lam: float) -> bool:
        return self.lo <= lam <= self.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "truncated": self.truncated}


@dataclass(frozen=True)
class BandStructure:
    b: float
    alpha: float
    lambda_max: float
    bands: tuple
    beta: float

    def gaps(self) -> list[tuple[float, float]]:
        """Bounded gaps between consecutive bands."""
        return [(a.hi, c.lo) for a, c in zip(self.bands, self.bands[1:])]

    def band_of(self, lam: float):
        for i, band in enumerate(self.bands):
            if band.contains(lam):
                return i
        return None

    def to_dict(self) -> dict:
        return {"b": self.b, "alpha": self.alpha, "lambda_max": self.lambda_max,
                "beta": self.beta, "bands": [x.to_dict() for x in self.bands]}


def band_beta(b: float) -> float:
    """beta = arccos(2 / (b^{-1/2} + b^{1/2}))."""
    return math.acos(2.0 / (b ** -0.5 + b ** 0.5))


def v_function(b: float, alpha: float, q: Potential, lam: float) -> float:
    """v(lambda) = (b+1) c(lambda) + alpha s(lambda), clamped to +-inf far below."""
    tv = transfer_at(q, lam)
    with np.errstate(over="ignore"):
        return float(((b + 1.0) * tv.c_hat + alpha * tv.s_hat) * math.exp(min(tv.log_scale, 700.0)))


def _lower_limit(b: float, alpha: float, q: Potential) -> float:
    """An energy below which v(lambda) > 2 sqrt(b) (no bands, no gap states)."""
    qmin, _ = q.bounds()
    lo = qmin - 1.5 * alpha * alpha - 10.0
    while v_function(b, alpha, q, lo) <= 4.0 * math.sqrt(b):
        lo = float(from_mu(2.0 * to_mu(lo) - 1.0))
    return lo


def _scan_roots(f, lo: float, hi: float, per_unit: int = _SAMPLES_PER_UNIT_MU) -> list[float]:
    mu_lo, mu_hi = float(to_mu(lo)), float(to_mu(hi))
    npts = max(64, int(per_unit * (mu_hi - mu_lo)) + 1)
    lams = from_mu(np.linspace(mu_lo, mu_hi, npts))
    vals = np.array([f(float(x)) for x in lams])
    sg = np.sign(vals)
    roots = []
    for i in np.nonzero(sg[:-1] * sg[1:] < 0)[0]:
        a, c = float(lams[i]), float(lams[i + 1])
        roots.append(brentq(f, a, c, xtol=1e-14 * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps))
    roots.extend(float(lams[i]) for i in np.nonzero(vals == 0.0)[0])
    return sorted(roots)


def infinite_bands(b: float, alpha: float, q: Potential, lambda_max: float) -> BandStructure:
    """Band intervals |v(lambda)| <= 2 sqrt(b) up to ``lambda_max``.

    Edges are roots of v - 2 sqrt(b) and v + 2 sqrt(b), refined by Brent's
    method; a band still open at ``lambda_max`` is marked truncated.
    """
    if not b > 1:
        raise ValueError("branching factor must exceed 1")
    if not math.isfinite(lambda_max):
        raise ValueError("lambda_max must be finite")
    rb2 = 2.0 * math.sqrt(b)
    lo = _lower_limit(b, alpha, q)
    if lo >= lambda_max:
        return BandStructure(b, alpha, lambda_max, (), band_beta(b))
    edges = _scan_roots(lambda x: v_function(b, alpha, q, x) - rb2, lo, lambda_max)
    edges += _scan_roots(lambda x: v_function(b, alpha, q, x) + rb2, lo, lambda_max)
    edges.sort()
    bands = []
    start = None
    for e in edges:
        if start is None:
            start = e
        else:
            bands.append(Band(start, e))
            start = None
    if start is not None:
        bands.append(Band(start, float(lambda_max), truncated=True))
    return BandStructure(b, alpha, float(lambda_max), tuple(bands), band_beta(b))


@dataclass(frozen=True)
class GapEigenvalue:
    lam: float
    gap: int              # 0 = below the first band, i = between bands i and i+1
    decay_ratio: float    # |c| / sqrt(b); an eigenvalue needs > 1
    eigenvalue: bool

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "gap": self.gap, "decay_ratio": self.decay_ratio,
                "eigenvalue": self.eigenvalue}


def gap_function(b: float, alpha: float, q: Potential, lam: float) -> float:
    """b (c - 1/c) + alpha s, whose roots outside the Dirichlet set are gap-state candidates."""
    tv = transfer_at(q, lam)
    return b * (tv.c - 1.0 / tv.c) + alpha * tv.s


def _gap_numerator(b: float, alpha: float, q: Potential, lam: float) -> float:
    # b (c - 1/c) + alpha s = s (b c' + alpha c) / c, by c^2 - s c' = 1;
    # the second factor has no poles and drops the Dirichlet roots
    tv = transfer_at(q, lam)
    return (b * tv.cp_hat + alpha * tv.c_hat) * math.exp(min(tv.log_scale, 700.0))


def infinite_point_spectrum(b: float, alpha: float, q: Potential, lambda_max: float,
                            root_condition: str = ROBIN, candidates: bool = False) -> list:
    """Eigenvalues of the semi-infinite linear graph outside the bands.

    Robin root: the roots of b(c - 1/c) + alpha s off the Dirichlet set with
    |c| > sqrt(b); ``candidates=True`` also returns the roots failing the decay
    test.  Dirichlet root: the Dirichlet eigenvalues themselves.
    """
    if root_condition == DIRICHLET:
        return [GapEigenvalue(x, -1, 1.0 / math.sqrt(b), True)
                for x in dirichlet_spectrum(q, max(lambda_max, 1e-9)).values]
    if root_condition != ROBIN:
        raise ValueError(f"unknown root condition {root_condition!r}")
    bs = infinite_bands(b, alpha, q, lambda_max)
    lo = _lower_limit(b, alpha, q)
    roots = _scan_roots(lambda x: _gap_numerator(b, alpha, q, x), lo, lambda_max)
    out = []
    for r in roots:
        if bs.band_of(r) is not None:
            continue
        gap = sum(1 for band in bs.bands if band.hi < r)
        ratio = abs(transfer_at(q, r).c) / math.sqrt(b)
        ev = ratio > 1.0
        if ev or candidates:
            out.append(GapEigenvalue(r, gap, ratio, ev))
    return out


def density_of_states(b: float, alpha: float, q: Potential, lam: float,
                      normalized: bool = False) -> float:
    """2 sqrt(b) / (pi sqrt(4b - v^2)) |dv/dlambda| inside a band.

    The derivative is a central difference with relative step 1e-6.  The raw
    density integrates to 2 sqrt(b) over a band; ``normalized=True`` divides by
    that so each band carries unit mass.
    """
    v = v_function(b, alpha, q, lam)
    if not abs(v) < 2.0 * math.sqrt(b):
        raise ValueError(f"lambda = {lam} is not inside a band")
    h = 1e-6 * max(1.0, abs(lam))
    dv = (v_function(b, alpha, q, lam + h) - v_function(b, alpha, q, lam - h)) / (2.0 * h)
    rho = 2.0 * math.sqrt(b) / (math.pi * math.sqrt(4.0 * b - v * v)) * abs(dv)
    return rho / (2.0 * math.sqrt(b)) if normalized else rho
