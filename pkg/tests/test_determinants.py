import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import PI2
from quantree import GraphParams, dd_eval, dd_matrix_det, dd_value, dd_via_pq, secular_at, z_roots


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_one_level_examples():
    assert dd_value(GraphParams(1, 2, 0.0), 2.0, 0.3) == pytest.approx(6.0, rel=1e-14)
    assert dd_matrix_det(GraphParams(1, 2, 0.0), 2.0, 0.3) == pytest.approx(6.0, rel=1e-14)
    p = GraphParams(1, 2, -3.0, "dirichlet")
    assert dd_value(p, 2.0, 1.0) == pytest.approx(-1.0, rel=1e-14)
    assert dd_matrix_det(p, 2.0, 1.0) == pytest.approx(-1.0, rel=1e-14)


def test_secular_value_representation():
    sv = dd_eval(GraphParams(40, 3, -4.0), 50.0, 7.0)
    assert sv.sign in (-1, 1)
    assert 0.5 <= abs(sv.value_hat) <= 2.0
    assert math.isfinite(sv.log_scale) and sv.log_scale > 100


def test_points_on_zero_set():
    assert dd_via_pq(GraphParams(2, 2, 1.0), 1.0, 0.0) == 0.0
    assert dd_via_pq(GraphParams(3, 2, -2.0, "dirichlet"), 1.0, 0.0) == pytest.approx(1.0, abs=1e-14)
    for n in range(1, 10):
        assert dd_value(GraphParams(n, 3, -4.0, "dirichlet"), 1.0, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert dd_value(GraphParams(n, 3, -4.0), -1.0, 0.0) == 0.0


@pytest.mark.parametrize("n, b, alpha, rc", [(9, 3, -4.0, "robin"), (12, 2, -5.0, "robin"),
                                             (7, 3, -4.0, "robin"), (7, 3, -4.0, "dirichlet")])
def test_three_way_agreement_examples(n, b, alpha, rc):
    rng = np.random.default_rng(11)
    p = GraphParams(n, b, alpha, rc)
    for y, z in rng.uniform(-3, 3, (100, 2)):
        d1, d2, d3 = dd_value(p, y, z), dd_via_pq(p, y, z), dd_matrix_det(p, y, z)
        assert _rel(d1, d2) < 1e-9
        assert _rel(d1, d3) < 1e-9


@settings(max_examples=300, deadline=None)
@given(n=st.integers(1, 12), b=st.sampled_from([2, 3]), alpha=st.floats(-10, 10),
       rc=st.sampled_from(["robin", "dirichlet"]), y=st.floats(-3, 3), z=st.floats(-3, 3))
def test_symmetries(n, b, alpha, rc, y, z):
    p = GraphParams(n, b, alpha, rc)
    m = p.with_(alpha=-alpha)
    d = dd_value(p, y, z)
    tol = 1e-9 * max(1.0, abs(d), abs(dd_matrix_det(p, y, z)))
    if rc == "robin":
        assert abs(dd_value(p, -y, -z) - (-1) ** (n + 1) * d) <= tol
        assert abs(dd_value(m, -y, z) - (-1) ** (n + 1) * d) <= tol
    else:
        assert abs(dd_value(p, -y, -z) - (-1) ** n * d) <= tol
        assert abs(dd_value(m, -y, z) - (-1) ** n * d) <= tol


def _interlace(a, b):
    merged = np.empty(len(a) + len(b))
    merged[0::2], merged[1::2] = b, a
    return len(b) == len(a) + 1 and bool(np.all(np.diff(merged) > 0))


@pytest.mark.parametrize("y", [-0.95, -0.4, 0.0, 0.3, 0.9])
def test_interlacing_in_n_at_fixed_y(y):
    # Christoffel-Darboux in z: every term carries the sign of alpha while (1 - y^2) > 0
    for n in range(1, 8):
        a = np.sort(z_roots(GraphParams(n, 2, -3.0), y))
        b = np.sort(z_roots(GraphParams(n + 1, 2, -3.0), y))
        assert _interlace(a, b)


def test_interlacing_needs_small_height():
    # for |y| > 1 the boundary term of the Christoffel-Darboux sum flips sign
    a = np.sort(z_roots(GraphParams(1, 2, -3.0), 1.7))
    b = np.sort(z_roots(GraphParams(2, 2, -3.0), 1.7))
    assert not _interlace(a, b)


def test_secular_at_examples(zero):
    p = GraphParams(1, 2, 0.0)
    assert secular_at(p, zero, PI2).value == pytest.approx(0.0, abs=1e-14)
    assert secular_at(p, zero, 4.0).value == pytest.approx(-2 * math.sin(2.0) ** 2, rel=1e-12)
    p = GraphParams(5, 2, -20.0)
    assert secular_at(p, zero, -399.0).sign * secular_at(p, zero, -401.0).sign == -1


def test_secular_at_far_below_does_not_overflow(zero):
    sv = secular_at(GraphParams(12, 3, -40.0), zero, -1e5)
    assert sv.sign != 0 and math.isfinite(sv.log_scale)


def test_params_validation():
    with pytest.raises(ValueError):
        GraphParams(0, 2, 0.0)
    with pytest.raises(ValueError):
        GraphParams(3, 1, 0.0)
    with pytest.raises(ValueError):
        GraphParams(3, 2, 0.0, "neumann")
    p = GraphParams(3, 2, -1.0, "dirichlet")
    assert GraphParams.from_dict(p.to_dict()) == p


def test_matrix_size_cap():
    with pytest.raises(ValueError):
        dd_matrix_det(GraphParams(31, 2, 0.0), 0.1, 0.1)
