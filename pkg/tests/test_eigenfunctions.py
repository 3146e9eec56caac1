import math

import numpy as np
import pytest

from oracles import PI2
from quantree import GraphParams, Potential, linear_spectrum, transfer_at
from quantree.eigenfunctions import (BOUNDARY, EXPONENTIAL, OSCILLATORY, coefficient_ratio,
                                     edge_energies, edge_function, regime, residual,
                                     sample_eigenfunction, vertex_values, weighted_norm)
from quantree.spectra import regime_of


def test_regime_classification():
    assert regime_of(2, 0.0) == OSCILLATORY
    assert regime_of(2, 3 * math.sqrt(2)) == EXPONENTIAL
    assert regime_of(2, 2 * math.sqrt(2)) == BOUNDARY
    assert regime_of(2, -2 * math.sqrt(2) * (1 + 1e-12)) == BOUNDARY


def test_regime_at_band_center(zero):
    # v = 3 cos(mu) vanishes at mu = pi/2
    assert regime(GraphParams(4, 2, 0.0), zero, (math.pi / 2) ** 2) == OSCILLATORY
    assert regime(GraphParams(4, 2, -20.0), zero, -400.0) == EXPONENTIAL


def test_xi_relation(zero, step):
    for q in (zero, step):
        rep = linear_spectrum(GraphParams(6, 2, -5.0), q, None, 200.0)
        for e in rep.eigenvalues:
            ev = vertex_values(GraphParams(6, 2, -5.0), q, e.lam)
            if ev.kernel:
                continue
            assert abs(ev.xi + 1 / ev.xi - ev.v / math.sqrt(2)) < 1e-10 * max(1.0, abs(ev.v))


@pytest.mark.parametrize("p", [GraphParams(8, 2, -5.0), GraphParams(6, 3, 2.0),
                               GraphParams(8, 2, -20.0), GraphParams(7, 2, -5.0, "dirichlet")])
def test_eigenpairs_have_small_residual(p, zero, step):
    for q in (zero, step):
        rep = linear_spectrum(p, q, None, 250.0)
        for e in rep.eigenvalues:
            ev = vertex_values(p, q, e.lam)
            assert residual(p, q, e.lam, ev.u) < 1e-7, e
            assert ev.recurrence_defect(p.b) < 1e-8, e
            assert np.max(np.abs(ev.u)) == pytest.approx(1.0)


def test_dirichlet_root_vanishes_at_root(zero, step):
    p = GraphParams(6, 2, -3.0, "dirichlet")
    for q in (zero, step):
        for e in linear_spectrum(p, q, None, 150.0).eigenvalues:
            assert vertex_values(p, q, e.lam).u[0] == 0.0


def test_perturbed_lambda_is_detected(zero):
    p = GraphParams(8, 2, -5.0)
    rep = linear_spectrum(p, zero, None, 150.0)
    for e in rep.eigenvalues:
        if e.tag not in ("cluster", "intermediate"):
            continue
        ev = vertex_values(p, zero, e.lam + 1e-3)
        assert residual(p, zero, e.lam + 1e-3, ev.u) > 1e-5, e


def test_kernel_vector_at_dirichlet_point(zero):
    p = GraphParams(1, 2, 0.0)
    ev = vertex_values(p, zero, PI2)
    assert ev.kernel
    assert np.allclose(ev.u, [1.0, -1.0])
    assert residual(p, zero, PI2, ev.u) < 1e-10


def test_kernel_vector_on_longer_graph(zero):
    # c = 1 at 4 pi^2, so u_k = c^k is constant
    p = GraphParams(3, 2, 0.0)
    ev = vertex_values(p, zero, 4 * PI2)
    assert ev.kernel and np.allclose(ev.u, 1.0)
    assert residual(p, zero, 4 * PI2, ev.u) < 1e-10


def test_coefficient_ratio_limits(zero):
    p = GraphParams(8, 2, -20.0)
    rep = linear_spectrum(p, zero, None, 1.0)
    lam_eq, lam_minus = rep.rogue("=").lam, rep.rogue("-").lam
    assert coefficient_ratio(p, zero, lam_eq) == pytest.approx(1 - 2, rel=0.05)
    c = transfer_at(zero, lam_minus).c
    assert abs(coefficient_ratio(p, zero, lam_minus)) <= 10 / c ** 2


def test_rogue_eigenvectors_localize(zero):
    p = GraphParams(8, 2, -20.0)
    rep = linear_spectrum(p, zero, None, 1.0)
    u = vertex_values(p, zero, rep.rogue("-").lam).u
    # decaying from the root
    assert abs(u[0]) == 1.0 and np.all(np.abs(u[3:]) < 1e-3)


def test_edge_function_neumann_mode(zero):
    p = GraphParams(1, 2, 0.0)
    xs = np.linspace(0.0, 1.0, 51)
    f = edge_function(p, zero, 4 * PI2, 1, xs)
    ref = np.cos(2 * math.pi * xs)
    assert np.allclose(f / f[0], ref, atol=1e-10)


def test_edge_function_endpoints(zero, step):
    p = GraphParams(6, 2, -5.0)
    for q in (zero, step):
        for e in linear_spectrum(p, q, None, 120.0).eigenvalues:
            u = vertex_values(p, q, e.lam).u
            for k in range(1, 7):
                f = edge_function(p, q, e.lam, k, [0.0, 1.0], u)
                assert abs(f[0] - u[k - 1]) < 1e-10 and abs(f[1] - u[k]) < 1e-10
    with pytest.raises(ValueError):
        edge_function(p, zero, 1.0, 0, [0.5])


def test_oscillatory_envelope(zero):
    p = GraphParams(8, 2, -5.0)
    rep = linear_spectrum(p, zero, None, 120.0)
    for e in rep.eigenvalues:
        if e.regime != OSCILLATORY:
            continue
        en = edge_energies(p, zero, e.lam)
        # b^k int u_k^2 of comparable size: the vertex values follow b^{-k/2}
        assert en.max() <= 10 * np.median(en)
        ut = vertex_values(p, zero, e.lam).rescaled(2)
        assert np.max(np.abs(ut)) / np.median(np.abs(ut)) < 20


def test_weighted_norm(zero):
    p = GraphParams(1, 2, 0.0)
    # cos(2 pi x) on one edge of weight b: 2 * 1/2
    assert weighted_norm(p, zero, 4 * PI2) == pytest.approx(1.0, rel=1e-6)


def test_sampled_eigenfunction_layout(zero):
    p = GraphParams(4, 2, -5.0)
    lam = linear_spectrum(p, zero, None, 50.0).values[3]
    d = sample_eigenfunction(p, zero, lam, per_edge=11)
    assert len(d["x"]) == 44 and d["x"][0] == 0.0 and d["x"][-1] == 4.0
    assert set(d["edge"]) == {1, 2, 3, 4}
    assert isinstance(d["nodal_count"], int)


def test_dirichlet_root_rejects_dirichlet_point(zero):
    with pytest.raises(ValueError):
        vertex_values(GraphParams(3, 2, 0.0, "dirichlet"), zero, PI2)


def test_boundary_regime_vector(zero):
    p = GraphParams(5, 2, 0.0)
    # v = 3 cos(mu) = 2 sqrt(2) at a band edge
    mu = math.acos(2 * math.sqrt(2) / 3)
    ev = vertex_values(p, zero, mu * mu)
    assert ev.regime == BOUNDARY
    assert ev.recurrence_defect(2) < 1e-8
