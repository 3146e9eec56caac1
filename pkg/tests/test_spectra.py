import math

import numpy as np
import pytest

from oracles import PI2
from quantree import (GraphParams, Potential, TaggedEigenvalue, dirichlet_multiplicity,
                      linear_spectrum, rogue_trajectory, to_mu, tree_spectrum, width_bound)
from quantree.spectra import tree_multiplicity


def test_neumann_interval(zero):
    vals = linear_spectrum(GraphParams(1, 2, 0.0), zero, -1.0, 100.0).values
    assert np.allclose(vals, [0.0, PI2, 4 * PI2, 9 * PI2], rtol=1e-8, atol=1e-10)


def test_mixed_interval(zero):
    vals = linear_spectrum(GraphParams(1, 2, 0.0, "dirichlet"), zero, 0.0, 300.0).values
    expected = [((k + 0.5) * math.pi) ** 2 for k in range(6)]
    assert np.allclose(vals, expected, rtol=1e-10)


def test_rogues_at_large_negative_alpha(zero):
    rep = linear_spectrum(GraphParams(8, 2, -20.0), zero, None, 1.0)
    assert -405 <= rep.rogue("=").lam <= -395
    assert -105 <= rep.rogue("-").lam <= -95
    c0 = rep.clusters()[0]
    assert c0.count == 6
    assert c0.center == pytest.approx(-400 / 9, abs=0.5)
    # frozen root values
    assert rep.rogue("=").lam == pytest.approx(-400.0, abs=1e-9)
    assert rep.rogue("-").lam == pytest.approx(-100.00000082446138, abs=1e-8)
    assert c0.lo == pytest.approx(-44.63899914423138, abs=1e-8)
    assert c0.hi == pytest.approx(-44.2919022622836, abs=1e-8)


def test_rogue_values_are_sign_changes(zero):
    from quantree import secular_at
    p = GraphParams(8, 2, -20.0)
    rep = linear_spectrum(p, zero, None, 1.0)
    for e in rep.eigenvalues:
        h = 1e-7 * max(1.0, abs(e.lam))
        assert secular_at(p, zero, e.lam - h).sign * secular_at(p, zero, e.lam + h).sign == -1


@pytest.mark.parametrize("p", [GraphParams(4, 2, -5.0), GraphParams(8, 3, 3.0),
                               GraphParams(6, 2, -20.0, "dirichlet"), GraphParams(5, 3, 0.0)])
def test_structure(p, zero, step):
    for q in (zero, step):
        rep = linear_spectrum(p, q, None, (6.5 * math.pi) ** 2)
        assert rep.check_structure() == []
        assert rep.complete_windows >= 5


def test_window_tags(zero):
    rep = linear_spectrum(GraphParams(6, 2, -5.0), zero, None, 200.0)
    for e in rep.eigenvalues:
        if e.tag == "cluster" and e.k >= 1:
            assert rep.lambda_d(e.k) < e.lam < rep.lambda_d(e.k + 1)
        if e.tag == "intermediate":
            assert e.component in (0, 6)
        if e.tag == "rogue":
            assert e.regime == "exponential"


def test_small_n_raw_roots(zero):
    # n <= 2: no count assertions, but every value is a root
    rep = linear_spectrum(GraphParams(2, 2, -3.0), zero, None, 150.0)
    assert rep.check_structure() == []
    from quantree import secular_at
    for lam in rep.values:
        assert abs(secular_at(GraphParams(2, 2, -3.0), zero, lam).value) < 1e-8


def test_robin_and_dirichlet_clusters_alternate(zero, step):
    for q in (zero, step):
        r = linear_spectrum(GraphParams(5, 2, -5.0), q, None, 400.0)
        d = linear_spectrum(GraphParams(5, 2, -5.0, "dirichlet"), q, None, 400.0)
        for k in range(1, min(r.complete_windows, d.complete_windows) + 1):
            a = sorted(e.lam for e in r.cluster(k))
            b = sorted(e.lam for e in d.cluster(k))
            merged = np.empty(len(a) + len(b))
            merged[0::2], merged[1::2] = a, b
            assert len(a) == len(b) + 1 and np.all(np.diff(merged) > 0)


@pytest.mark.parametrize("p", [GraphParams(4, 2, -5.0), GraphParams(6, 3, 3.0), GraphParams(8, 2, -20.0)])
def test_intermediates_approach_dirichlet_points(p, zero):
    # the distance shrinks in mu = sqrt(lambda); in lambda it tends to a constant
    rep = linear_spectrum(p, zero, None, (10.6 * math.pi) ** 2)
    inter = sorted(rep.intermediates(), key=lambda e: e.k)[:10]
    assert [e.k for e in inter] == list(range(1, 11))
    dmu = [abs(to_mu(e.lam) - to_mu(rep.lambda_d(e.k))) for e in inter]
    assert all(b < a for a, b in zip(dmu, dmu[1:]))
    dlam = [abs(e.lam - rep.lambda_d(e.k)) for e in inter]
    assert max(dlam[5:]) / min(dlam[5:]) < 1.2


def test_intermediates_approach_dirichlet_points_step(step):
    rep = linear_spectrum(GraphParams(4, 2, -5.0), step, None, (12.6 * math.pi) ** 2)
    inter = sorted(rep.intermediates(), key=lambda e: e.k)
    dmu = [abs(to_mu(e.lam) - to_mu(rep.lambda_d(e.k))) for e in inter]
    assert dmu[11] < 0.5 * max(dmu[:3])


def test_no_collisions_under_alpha_deformation(zero):
    counts = None
    for a in np.linspace(4.0, -12.0, 17):
        rep = linear_spectrum(GraphParams(5, 2, float(a)), zero, None, 250.0)
        vals = rep.values
        assert np.all(np.diff(vals) > 1e-9)
        window = [sum(1 for e in rep.eigenvalues if e.k == k and e.tag == "cluster") for k in (1, 2)]
        counts = counts or window
        assert window == counts


def test_workers_give_identical_reports(zero, step):
    p = GraphParams(6, 2, -7.0)
    a = linear_spectrum(p, step, None, 300.0)
    b = linear_spectrum(p, step, None, 300.0, workers=4)
    assert a.eigenvalues == b.eigenvalues


def test_lambda_window_respected(zero):
    rep = linear_spectrum(GraphParams(4, 2, 1.0), zero, 30.0, 200.0)
    assert np.all((rep.values >= 30.0) & (rep.values <= 200.0))
    with pytest.raises(ValueError):
        linear_spectrum(GraphParams(4, 2, 1.0), zero, 200.0, 30.0)


def test_report_round_trip(zero):
    rep = linear_spectrum(GraphParams(4, 2, -5.0), zero, None, 100.0)
    d = rep.to_dict()
    back = [TaggedEigenvalue.from_dict(e) for e in d["eigenvalues"]]
    assert back == rep.eigenvalues
    assert {c["k"] for c in d["clusters"]} == set(rep.clusters())


# ---------------------------------------------------------------------------
# Dirichlet points


def test_dirichlet_point_double_root(zero):
    r = dirichlet_multiplicity(GraphParams(1, 2, 0.0), zero, 1)
    assert r.eigenvalue and r.tangential and not r.indeterminate
    assert r.lam == pytest.approx(PI2)


def test_dirichlet_point_transversal(zero):
    r = dirichlet_multiplicity(GraphParams(3, 2, -5.0), zero, 1)
    assert not r.eigenvalue
    assert r.limit == pytest.approx(r.closed_form, rel=1e-5)


def test_dirichlet_point_sweep(zero):
    alphas = np.linspace(-10, 10, 41)
    res = [dirichlet_multiplicity(GraphParams(1, 2, float(a)), zero, 1) for a in alphas]
    hits = [a for a, r in zip(alphas, res) if r.eigenvalue]
    assert hits == [0.0]
    # the limit changes sign exactly there
    lim = np.array([r.limit for r in res])
    i = int(np.nonzero(alphas == 0.0)[0][0])
    assert lim[i - 1] * lim[i + 1] < 0
    assert np.all(lim[:i] * lim[i - 1] > 0) and np.all(lim[i + 1:] * lim[i + 1] > 0)


def test_tangential_point_in_report(zero):
    rep = linear_spectrum(GraphParams(1, 2, 0.0), zero, -1.0, 100.0)
    tagged = [e for e in rep.eigenvalues if e.tag == "dirichlet_point"]
    assert np.allclose([e.lam for e in tagged], [PI2, 4 * PI2, 9 * PI2], rtol=1e-10)
    assert all(e.tangential for e in tagged)


def test_dirichlet_root_never_tangential(zero):
    r = dirichlet_multiplicity(GraphParams(4, 2, 0.0, "dirichlet"), zero, 2)
    assert not r.eigenvalue


# ---------------------------------------------------------------------------
# full tree


def test_tree_multiplicities(zero):
    ts = tree_spectrum(GraphParams(2, 2, 0.0), zero, 0.0, 100.0)
    for k in range(3):
        lam = ((k + 0.5) * math.pi) ** 2
        hit = [e for e in ts.entries if abs(e.lam - lam) < 1e-8]
        assert len(hit) == 1
        # (b-1) b^(n-1) = 2 from the one-level part, plus a collision with B_2 at alpha = 0
        assert ("D", 1) in hit[0].origins and hit[0].multiplicity == 3
    assert len(ts.collisions) == 3
    assert tree_multiplicity(2, 2, 1) == 2 and tree_multiplicity(3, 2, 1) == 6


def test_tree_without_collisions(zero):
    ts = tree_spectrum(GraphParams(2, 2, -5.0), zero, None, 100.0)
    assert ts.collisions == []
    mults = {e.origins[0]: e.multiplicity for e in ts.entries}
    assert mults[("D", 1)] == 2 and mults[("D", 2)] == 1 and mults[("B", 2)] == 1


def test_tree_counts_add_up(zero):
    ts = tree_spectrum(GraphParams(3, 3, -1.0), zero, None, 200.0)
    total = sum(len(r.eigenvalues) * (1 if o[0] == "B" else tree_multiplicity(3, 3, o[1]))
                for o, r in ts.parts.items())
    assert len(ts.expanded()) == total


def test_tree_requires_integer_b(zero):
    with pytest.raises(ValueError):
        tree_spectrum(GraphParams(2, 1.5, 0.0), zero, 0.0, 10.0)
    with pytest.raises(ValueError):
        tree_spectrum(GraphParams(2, 2, 0.0, "dirichlet"), zero, 0.0, 10.0)


# ---------------------------------------------------------------------------
# rogue trajectory


def test_rogue_trajectory_examples(zero):
    row, = rogue_trajectory(GraphParams(8, 2, -1.0), zero, [-20.0])
    res = row.residuals(2)
    assert res["eq"] <= 2 and res["minus"] <= 2 and res["center"] <= 2
    assert row.width <= width_bound(2, -20.0)
    assert width_bound(2, -20.0) == pytest.approx(0.452, abs=1e-3)


def test_rogue_trajectory_dirichlet_root(zero):
    row, = rogue_trajectory(GraphParams(8, 2, -1.0, "dirichlet"), zero, [-20.0])
    assert row.lam_minus is None
    assert abs(row.lam_eq + 400) <= 2


def test_rogue_trajectory_rejects_positive(zero):
    with pytest.raises(ValueError):
        rogue_trajectory(GraphParams(8, 2, -1.0), zero, [-3.0, 2.0])


def test_width_bound_formula():
    assert width_bound(2, -30.0) == pytest.approx(8 * 900 / 9 * math.exp(-10.0))
