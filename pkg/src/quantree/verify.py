"""Invariant suites behind ``quantree verify``.

Each suite returns a list of :class:`Check` records; randomized samples are
drawn from ``numpy.random.default_rng(seed)`` so a seed fixes the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .determinants import GraphParams, dd_matrix_det, dd_value, dd_via_pq
from .eigenfunctions import residual, vertex_values
from .infinite import band_beta, infinite_bands
from .oracle import fd_linear
from .orthopoly import PolyParams, pq_closed_form, pq_recurrence, quadrature_measure
from .potential import Potential, transfer_at
from .spectra import linear_spectrum
from .zerosets import component_y_at, mirror_index, strip_membership, trace_all


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def _random_step(rng) -> Potential:
    """A symmetric three-piece potential with random breakpoint and values."""
    a = float(rng.uniform(0.05, 0.45))
    outer, inner = (float(x) for x in rng.uniform(-20, 20, 2))
    return Potential.piecewise_constant([a, 1.0 - a], [outer, inner, outer])


def suite_potential(rng) -> list[Check]:
    out = []
    worst_w, worst_x = 0.0, 0.0
    for _ in range(20):
        q = _random_step(rng)
        lam = float(rng.uniform(-200, 400))
        tv = transfer_at(q, lam)
        worst_w = max(worst_w, tv.wronskian_defect())
        ti = transfer_at(q, lam, method="integrate")
        scale = max(abs(tv.c), abs(tv.s), 1e-300)
        worst_x = max(worst_x, abs(tv.c - ti.c) / scale, abs(tv.s - ti.s) / scale)
    out.append(Check("potential", "wronskian", worst_w < 1e-10, f"max defect {worst_w:.2e}"))
    out.append(Check("potential", "exact-vs-integrated", worst_x < 1e-9, f"max relative gap {worst_x:.2e}"))
    return out


def suite_orthopoly(rng) -> list[Check]:
    out = []
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(0, 15))
        b = float(rng.choice([2.0, 3.0, 1.5]))
        v = float(rng.uniform(-6, 6))
        if abs(abs(v) - 2.0 * math.sqrt(b)) < 1e-3:
            continue
        p1, q1 = pq_recurrence(n, b, v)
        p2, q2 = pq_closed_form(n, b, v)
        sc = max(1.0, abs(p1), abs(q1))
        worst = max(worst, abs(p1 - p2) / sc, abs(q1 - q2) / sc)
    out.append(Check("orthopoly", "closed-form", worst < 1e-9, f"max relative gap {worst:.2e}"))
    for b in (2.0, 3.0, 4.0):
        ref = quadrature_measure(PolyParams(b, 10)).moments[:10]
        dev = max(float(np.max(np.abs(quadrature_measure(PolyParams(b, n)).moments[:10] - ref)
                               / np.maximum(1.0, np.abs(ref)))) for n in range(5, 10))
        odd = float(np.max(np.abs(ref[1::2])))
        ok = dev < 1e-10 and odd < 1e-12 and abs(ref[2] / ref[0] - b) < 1e-12
        out.append(Check("orthopoly", f"moments b={b:g}", ok, f"spread {dev:.2e}, odd {odd:.2e}, mu2={ref[2]:.12g}"))
    return out


def suite_determinants(rng, samples: int = 300) -> list[Check]:
    worst = 0.0
    for _ in range(samples):
        p = GraphParams(int(rng.integers(1, 13)), int(rng.choice([2, 3])), float(rng.uniform(-10, 10)),
                        str(rng.choice(["robin", "dirichlet"])))
        y, z = (float(x) for x in rng.uniform(-3, 3, 2))
        d1, d2, d3 = dd_value(p, y, z), dd_via_pq(p, y, z), dd_matrix_det(p, y, z)
        sc = max(abs(d1), abs(d2), abs(d3), 1e-300)
        worst = max(worst, abs(d1 - d2) / sc, abs(d1 - d3) / sc)
    return [Check("determinants", "three-way", worst < 1e-9, f"max relative gap {worst:.2e} over {samples}")]


def suite_spectra(rng) -> list[Check]:
    out = []
    z = Potential.zero()
    vals = linear_spectrum(GraphParams(1, 2, 0.0), z, None, 90.0).values
    exact = np.array([0.0, 1.0, 4.0, 9.0]) * math.pi ** 2
    ok = len(vals) == 4 and np.all(np.abs(np.array(vals) - exact) <= 1e-8 * np.maximum(1.0, exact))
    out.append(Check("spectra", "neumann-baseline", bool(ok), f"{np.round(vals, 10).tolist()}"))
    cases = [GraphParams(8, 2, -20.0), GraphParams(4, 3, 3.0), GraphParams(12, 2, -5.0, "dirichlet")]
    cases.append(GraphParams(int(rng.integers(3, 10)), int(rng.choice([2, 3])), float(rng.uniform(-15, 5))))
    for p in cases:
        for q in (z, Potential.step(-16.0)):
            rep = linear_spectrum(p, q, None, (6.5 * math.pi) ** 2)
            problems = rep.check_structure()
            out.append(Check("spectra", f"structure {p.n},{p.b:g},{p.alpha:g},{p.root_condition},"
                                        f"{'zero' if q is z else 'step'}",
                             not problems, "; ".join(problems[:3]) or f"{len(rep.eigenvalues)} eigenvalues"))
    return out


def suite_zerosets(rng) -> list[Check]:
    out = []
    for rc in ("robin", "dirichlet"):
        p = GraphParams(6, 2, -3.0, rc)
        comps = trace_all(p, (-4.0, 4.0), 161)
        mono = all(c.is_strictly_monotone() for c in comps)
        sym = 0.0
        for c in comps:
            j = mirror_index(p, c.k)
            for zz, yy in zip(c.z[::20], c.y[::20]):
                sym = max(sym, abs(component_y_at(p, j, -zz) + yy))
        bad = 0
        for c in comps:
            for zz, yy in zip(c.z, c.y):
                if zz <= 0 or abs(yy - (0.0 if p.dirichlet_root else 1.0)) < 1e-9 or (not p.dirichlet_root and yy < -1):
                    continue
                try:
                    if not strip_membership(p, c.k, (yy, zz)).inside:
                        bad += 1
                except ValueError:
                    pass
        out.append(Check("zerosets", f"monotone {rc}", mono, f"{len(comps)} components"))
        out.append(Check("zerosets", f"odd symmetry {rc}", sym < 1e-9, f"max gap {sym:.2e}"))
        out.append(Check("zerosets", f"strips {rc}", bad == 0, f"{bad} violations"))
    return out


def suite_eigenfunctions(rng) -> list[Check]:
    z = Potential.zero()
    worst = 0.0
    for p in (GraphParams(8, 2, -20.0), GraphParams(8, 2, -5.0), GraphParams(6, 3, 2.0, "dirichlet")):
        for e in linear_spectrum(p, z, None, 100.0).eigenvalues:
            worst = max(worst, residual(p, z, e.lam, vertex_values(p, z, e.lam).u))
    return [Check("eigenfunctions", "residuals", worst < 1e-7, f"max residual {worst:.2e}")]


def suite_infinite(rng) -> list[Check]:
    bs = infinite_bands(2.0, 0.0, Potential.zero(), (10.5 * math.pi) ** 2)
    beta = band_beta(2.0)
    worst = 0.0
    for k, band in enumerate(bs.bands[:10]):
        worst = max(worst, abs(math.sqrt(band.lo) - (k * math.pi + beta)),
                    abs(math.sqrt(band.hi) - (k * math.pi + math.pi - beta)))
    return [Check("infinite", "band edges alpha=0", worst < 1e-9, f"max gap in mu {worst:.2e}")]


def suite_oracle(rng) -> list[Check]:
    p = GraphParams(4, 2, -5.0)
    z = Potential.zero()
    fd = fd_linear(p, z, 1.0 / 200.0, 8).extrapolated
    ref = np.array(linear_spectrum(p, z, None, float(fd[-1]) + 1.0).values[:8])
    dev = float(np.max(np.abs(fd - ref)))
    return [Check("oracle", "fd-vs-analytic", dev < 1e-4, f"max deviation {dev:.2e}")]


SUITES = {
    "potential": suite_potential,
    "orthopoly": suite_orthopoly,
    "determinants": suite_determinants,
    "spectra": suite_spectra,
    "zerosets": suite_zerosets,
    "eigenfunctions": suite_eigenfunctions,
    "infinite": suite_infinite,
    "oracle": suite_oracle,
}


def run_suites(names, seed: int = 0) -> list[Check]:
    """Run the named suites (or every suite for ``"all"``) with one shared generator."""
    if isinstance(names, str):
        names = [names]
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
    rng = np.random.default_rng(seed)
    out = []
    for name in names:
        out.extend(SUITES[name](rng))
    return out


__all__ = ["Check", "SUITES", "run_suites"]
