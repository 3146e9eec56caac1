import math

import numpy as np
import pytest
from scipy.linalg import eigh

from oracles import PI2
from quantree import GraphParams, Potential, linear_spectrum, tree_spectrum
from quantree.oracle import (assemble_linear, assemble_tree, convergence_order, decomposition_check,
                             fd_linear, fd_tree, group_values, lowest_eigenvalues, richardson,
                             tree_size)

NEUMANN = np.array([0.0, 1.0, 4.0, 9.0]) * PI2


def test_neumann_interval(zero):
    r = fd_linear(GraphParams(1, 2, 0.0), zero, 1 / 400, 4)
    # the raw error is about lambda^2 h^2 / 12, so 1e-4 holds relative to lambda
    assert np.all(np.abs(r.raw - NEUMANN) <= 1e-4 * np.maximum(1.0, NEUMANN))
    assert np.max(np.abs(r.extrapolated - NEUMANN)) < 1e-7


def test_second_order_convergence(zero, step):
    cases = [(GraphParams(1, 2, 0.0), zero, NEUMANN[1:]),
             (GraphParams(3, 2, -4.0), step, None)]
    for p, q, exact in cases:
        if exact is None:
            exact = linear_spectrum(p, q, None, 100.0).values[1:4]
        r = fd_linear(p, q, 1 / 100, 4)
        e1 = np.abs(r.raw[1:] - exact)
        e2 = np.abs(r.fine[1:] - exact)
        for a, b in zip(e1, e2):
            assert 1.7 <= convergence_order(a, b) <= 2.3


def test_matches_linear_spectrum(zero):
    p = GraphParams(4, 2, -5.0)
    r = fd_linear(p, zero, 1 / 400, 10)
    exact = linear_spectrum(p, zero, None, 200.0).values[:10]
    assert np.max(np.abs(r.extrapolated - exact)) < 1e-5


def test_matches_dirichlet_root_spectrum(step):
    p = GraphParams(4, 2, -3.0, "dirichlet")
    r = fd_linear(p, step, 1 / 200, 8)
    exact = linear_spectrum(p, step, None, 400.0).values[:8]
    assert np.max(np.abs(r.extrapolated - exact)) < 1e-4


def test_boundary_layer_rogue(zero):
    r = fd_linear(GraphParams(2, 2, -20.0), zero, 1 / 400, 3)
    assert r.extrapolated[0] == pytest.approx(-400.0, rel=1e-5)
    exact = linear_spectrum(GraphParams(2, 2, -20.0), zero, None, 10.0).values[:3]
    assert np.max(np.abs(r.extrapolated - exact)) < 1e-3


def test_assembly_structure(step):
    op = assemble_linear(GraphParams(3, 2, -4.0), step, 1 / 30)
    k = op.stiffness.toarray()
    assert np.allclose(k, k.T)
    assert np.all(op.mass > 0)
    assert op.size == 3 * op.cells + 1
    opd = assemble_linear(GraphParams(3, 2, -4.0, "dirichlet"), step, 1 / 30)
    assert opd.size == op.size - 1
    # the breakpoints 1/3 and 2/3 fall on nodes
    assert op.cells % 3 == 0


def test_eigenvectors_mass_orthogonal(zero):
    op = assemble_linear(GraphParams(3, 2, -2.0), zero, 1 / 20)
    w, v = eigh(op.stiffness.toarray(), np.diag(op.mass))
    g = v.T @ np.diag(op.mass) @ v
    assert np.allclose(g, np.eye(len(w)), atol=1e-10)
    assert np.allclose(lowest_eigenvalues(op, 5), w[:5], rtol=1e-10, atol=1e-10)


def test_star_graph_lowest_zero(zero):
    r = fd_tree(1, 2, 0.0, zero, 1 / 96, 3)
    assert abs(r.extrapolated[0]) < 1e-9
    # a star of two edges is the interval [-1, 1]: eigenvalues (k pi / 2)^2
    assert np.allclose(r.extrapolated[1:], [PI2 / 4, PI2], atol=1e-6)


def test_tree_multiplicity_from_fd(zero):
    r = fd_tree(2, 3, -5.0, zero, 1 / 96, 24)
    groups = group_values(r.extrapolated, 1e-4)
    d1 = [g for g in groups if abs(g[0] - 14.365785676909494) < 1e-4]
    assert d1 and d1[0][1] == 6
    pred = tree_spectrum(GraphParams(2, 3, -5.0), zero, None, 20.0)
    assert [e.multiplicity for e in pred.entries if ("D", 1) in e.origins] == [6, 6]


def test_tree_union_of_linear_spectra(zero):
    h, m = 1 / 96, 12
    full = fd_tree(2, 2, 0.0, zero, h, m).extrapolated
    parts = [fd_linear(GraphParams(2, 2, 0.0), zero, h, m).extrapolated,
             np.repeat(fd_linear(GraphParams(1, 2, 0.0, "dirichlet"), zero, h, m).extrapolated, 2),
             fd_linear(GraphParams(2, 2, 0.0, "dirichlet"), zero, h, m).extrapolated]
    union = np.sort(np.concatenate(parts))[:m]
    assert np.max(np.abs(full - union)) < 1e-5


@pytest.mark.parametrize("args, dev", [((2, 2, 0.0, Potential.zero(), 12), 1e-5),
                                       ((2, 2, -5.0, Potential.zero(), 12), 1e-4),
                                       ((3, 2, -2.0, Potential.step(-16.0), 15), 1e-4)])
def test_decomposition_check(args, dev):
    rep = decomposition_check(*args)
    assert rep.ok, rep.multiplicity_mismatches
    assert rep.max_deviation < dev
    assert rep.predicted_multiplicities == rep.fd_multiplicities


def test_decomposition_multiplicities_at_negative_alpha():
    rep = decomposition_check(2, 2, -5.0, Potential.zero(), 12)
    assert set(rep.predicted_multiplicities) == {1, 2}


def test_tree_size_cap(zero):
    assert tree_size(2, 2, 10) == 6 * 10 + 1
    with pytest.raises(ValueError):
        assemble_tree(4, 2, 0.0, zero, 1 / 10)
    with pytest.raises(ValueError):
        assemble_tree(3, 3, 0.0, zero, 1 / 10000)


def test_helpers():
    assert richardson(np.array([1.0]), np.array([2.0]))[0] == pytest.approx(7 / 3)
    assert convergence_order(4e-4, 1e-4) == pytest.approx(2.0)
    assert group_values([1.0, 1.0 + 1e-7, 2.0], 1e-5) == [(pytest.approx(1.0), 2), (2.0, 1)]


def test_dump_format(tmp_path, zero):
    op = assemble_linear(GraphParams(1, 2, -1.0), zero, 1 / 16)
    op.dump(tmp_path / "op.txt")
    lines = (tmp_path / "op.txt").read_text().splitlines()
    assert lines[0].startswith("# geometry linear n 1")
    body = [ln for ln in lines if not ln.startswith("#")]
    assert len(body) == op.stiffness.nnz + op.size
    i, j, v = body[0].split()
    assert float(v) == op.stiffness.tocoo().data[0]
    assert lines[-1] == f"{op.size - 1} {op.size - 1} {float(op.mass[-1])!r}"
