"""Spectra of the linear graphs B_n, B-ring_n and of the full tree.

Eigenvalues are the intersections of the spiral (c(lambda), s(lambda)) with the
zero set of D_n.  At fixed z the zero set splits into curves y = g^j(z),
j ranked by height, so every eigenvalue is a root of one of the component
functions

    f_j(lambda) = c(lambda) - g^j(s(lambda)).

Between consecutive Dirichlet points s keeps its sign and c moves between
+1 and -1, which pins down which f_j must change sign in which window.  The
window counts of the structure theorems follow, and every root comes with a
guaranteed bracket.  The two outer Robin components pass through (-1, 0) and
(1, 0); their extra crossing near a Dirichlet point is the intermediate
eigenvalue, found from the divided difference of f_0 or f_n.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .determinants import GraphParams, pencil_diagonal, secular_at
from .errors import CountMismatchError
from .orthopoly import pq_recurrence
from .potential import Potential, TransferValues, dirichlet_spectrum, from_mu, to_mu, transfer_at

OSCILLATORY = "oscillatory"
EXPONENTIAL = "exponential"
BOUNDARY = "boundary"

CLUSTER = "cluster"
INTERMEDIATE = "intermediate"
ROGUE = "rogue"
DIRICHLET_POINT = "dirichlet_point"
UNCONSTRAINED = "unconstrained"

TOL_TAN = 1e-6
COLLISION_TOL = 1e-8
BOUNDARY_BAND = 1e-9
MAX_DOUBLINGS = 10
_RICHARDSON_STEPS = (1e-4, 1e-5, 1e-6)


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class TaggedEigenvalue:
    """One eigenvalue with its classification.

    ``k`` is the window or Dirichlet index, ``position`` the 1-based rank
    inside a cluster, ``side`` is ``"-"`` / ``"+"`` for intermediates below or
    above lambda_D^k, and ``kind`` is ``"="`` or ``"-"`` for rogues.
    ``component`` is the index j of the curve the point lies on.
    """

    lam: float
    tag: str
    k: int
    component: int | None = None
    position: int | None = None
    side: str | None = None
    kind: str | None = None
    regime: str = OSCILLATORY
    tangential: bool = False

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "tag": self.tag, "k": self.k, "component": self.component,
                "position": self.position, "side": self.side, "kind": self.kind,
                "regime": self.regime, "tangential": self.tangential}

    @classmethod
    def from_dict(cls, d: dict) -> "TaggedEigenvalue":
        return cls(float(d["lambda"]), d["tag"], int(d["k"]), d.get("component"),
                   d.get("position"), d.get("side"), d.get("kind"),
                   d.get("regime", OSCILLATORY), bool(d.get("tangential", False)))


@dataclass(frozen=True)
class DirichletPointResult:
    """Outcome of the multiple-root test at lambda_D^k.

    ``limit`` is the Richardson estimate of F(lambda_D^k) with F = D_n / s;
    ``closed_form`` is alpha P_n(v) - c' Q_n(v) evaluated there directly.
    """

    k: int
    lam: float
    eigenvalue: bool
    tangential: bool
    indeterminate: bool
    limit: float
    estimates: tuple
    closed_form: float
    scale: float

    def to_dict(self) -> dict:
        return {"k": self.k, "lambda": self.lam, "eigenvalue": self.eigenvalue,
                "tangential": self.tangential, "indeterminate": self.indeterminate,
                "limit": self.limit, "estimates": list(self.estimates),
                "closed_form": self.closed_form, "scale": self.scale}


@dataclass(frozen=True)
class ClusterSummary:
    k: int
    count: int
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def to_dict(self) -> dict:
        return {"k": self.k, "count": self.count, "min": self.lo, "max": self.hi,
                "width": self.width, "center": self.center}


@dataclass
class SpectrumReport:
    params: GraphParams
    potential: Potential
    lambda_min: float
    lambda_max: float
    dirichlet: tuple
    eigenvalues: list
    dirichlet_points: list = field(default_factory=list)
    complete_windows: int = 0

    @property
    def values(self) -> np.ndarray:
        return np.array([e.lam for e in self.eigenvalues])

    def with_tag(self, tag: str) -> list:
        return [e for e in self.eigenvalues if e.tag == tag]

    def cluster(self, k: int) -> list:
        return [e for e in self.eigenvalues if e.tag == CLUSTER and e.k == k]

    def intermediates(self) -> list:
        return [e for e in self.eigenvalues if e.tag in (INTERMEDIATE, DIRICHLET_POINT)]

    def rogue(self, kind: str):
        for e in self.eigenvalues:
            if e.tag == ROGUE and e.kind == kind:
                return e
        return None

    def clusters(self) -> dict:
        out = {}
        for e in self.eigenvalues:
            if e.tag == CLUSTER:
                out.setdefault(e.k, []).append(e.lam)
        return {k: ClusterSummary(k, len(v), min(v), max(v)) for k, v in sorted(out.items())}

    def lambda_d(self, k: int) -> float:
        return self.dirichlet[k - 1]

    def check_structure(self) -> list[str]:
        """Violations of the window counts, containment and interlacing (empty if none)."""
        p = self.params
        n = int(p.n)
        problems = []
        clusters = {k: sorted(e.lam for e in self.cluster(k))
                    for k in range(self.complete_windows + 1)}
        for k in range(1, self.complete_windows + 1):
            lo, hi = self.dirichlet[k - 1], self.dirichlet[k]
            expected = n - 2 if p.dirichlet_root else n - 1
            if n >= 3 and len(clusters[k]) != expected:
                problems.append(f"cluster {k} has {len(clusters[k])} values, expected {expected}")
            for x in clusters[k]:
                if not lo < x < hi:
                    problems.append(f"cluster {k} value {x} outside ({lo}, {hi})")
        if n >= 3:
            expected0 = n - 2
            if len(clusters[0]) != expected0:
                problems.append(f"cluster 0 has {len(clusters[0])} values, expected {expected0}")
        if p.alpha < 0 and n >= 3:
            kinds = ["="] if p.dirichlet_root else ["=", "-"]
            for kind in kinds:
                if self.rogue(kind) is None:
                    problems.append(f"missing rogue {kind}")
        inter = {}
        for e in self.intermediates():
            inter.setdefault(e.k, []).append(e)
        for k in range(1, self.complete_windows + 1):
            below = clusters.get(k - 1, [])
            above = clusters.get(k, [])
            lam_d = self.dirichlet[k - 1]
            items = inter.get(k, [])
            if p.dirichlet_root:
                minus = [e.lam for e in items if e.side == "-"]
                plus = [e.lam for e in items if e.side == "+"]
                if n >= 3 and (len(minus) != 1 or len(plus) != 1):
                    problems.append(f"Dirichlet-root intermediates at k={k}: {len(minus)} below, "
                                    f"{len(plus)} above")
                    continue
                chain = below[-1:] + minus + [lam_d] + plus + above[:1]
            else:
                if n >= 2 and len(items) != 1:
                    problems.append(f"{len(items)} intermediate values at k={k}")
                    continue
                chain = below[-1:] + [e.lam for e in items] + above[:1]
            if any(b <= a for a, b in zip(chain, chain[1:])):
                problems.append(f"interlacing fails at k={k}: {chain}")
        return problems

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "potential": self.potential.to_dict(),
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "dirichlet": list(self.dirichlet),
            "eigenvalues": [e.to_dict() for e in self.eigenvalues],
            "clusters": [c.to_dict() for c in self.clusters().values()],
            "dirichlet_points": [d.to_dict() for d in self.dirichlet_points],
        }


# ---------------------------------------------------------------------------
# component functions


def _component_hats(params: GraphParams, tv: TransferValues) -> np.ndarray:
    """f_j(lambda) * exp(-log_scale) for every component j, lowest curve first."""
    dg = pencil_diagonal(params)
    d = -params.alpha * tv.s_hat / dg
    if len(dg) == 1:
        g = d
    else:
        damp = math.exp(-tv.log_scale) if tv.log_scale < 700.0 else 0.0
        e = np.sqrt(params.b / (dg[:-1] * dg[1:])) * damp
        g = eigh_tridiagonal(d, e, eigvals_only=True)
    return tv.c_hat - g


def _unscale(hat, log_scale: float):
    with np.errstate(over="ignore"):
        return hat * math.exp(min(log_scale, 700.0))


def component_values(params: GraphParams, q: Potential, lam: float) -> np.ndarray:
    """All f_j(lambda); Robin components are j = 0..n, Dirichlet-root ones j = 1..n."""
    tv = transfer_at(q, lam)
    return _unscale(_component_hats(params, tv), tv.log_scale)


def _first_component(params: GraphParams) -> int:
    return 1 if params.dirichlet_root else 0


def _f_single(params: GraphParams, q: Potential, j: int):
    off = _first_component(params)

    def f(lam):
        tv = transfer_at(q, lam)
        return float(_unscale(_component_hats(params, tv)[j - off], tv.log_scale))
    return f


def v_of_lambda(params: GraphParams, q: Potential, lam: float, tv=None) -> float:
    """v(lambda) = (b+1) c(lambda) + alpha s(lambda) (may be +-inf far below)."""
    if tv is None:
        tv = transfer_at(q, lam)
    vh = (params.b + 1.0) * tv.c_hat + params.alpha * tv.s_hat
    return float(_unscale(vh, tv.log_scale))


def regime_of(b: float, v: float) -> str:
    t = abs(v) / math.sqrt(b)
    if abs(t - 2.0) <= BOUNDARY_BAND:
        return BOUNDARY
    return OSCILLATORY if t < 2.0 else EXPONENTIAL


def _mu_grid(lo: float, hi: float, intervals: int) -> np.ndarray:
    return from_mu(np.linspace(float(to_mu(lo)), float(to_mu(hi)), intervals + 1))


def _sign_changes(vals: np.ndarray) -> np.ndarray:
    sg = np.sign(vals)
    return np.nonzero(sg[:-1] * sg[1:] < 0)[0]


def _polish(f, a: float, b: float) -> float:
    scale = max(1.0, abs(a), abs(b))
    return brentq(f, a, b, xtol=1e-13 * scale, rtol=4 * np.finfo(float).eps, maxiter=200)


def _window_roots(params: GraphParams, q: Potential, lo: float, hi: float,
                  comps: list[int], window: int) -> dict:
    """One root per listed component in (lo, hi), found by bracketing on a mu grid."""
    n = int(params.n)
    off = _first_component(params)
    base = 8 * (n + 1)
    found = {}
    for i in range(MAX_DOUBLINGS + 1):
        lams = _mu_grid(lo, hi, base * 2 ** i + 1)
        vals = np.empty((len(lams), len(pencil_diagonal(params))))
        for r, x in enumerate(lams):
            tv = transfer_at(q, float(x))
            vals[r] = np.sign(_component_hats(params, tv))
        found = {j: _sign_changes(vals[:, j - off]) for j in comps}
        if all(len(idx) == 1 for idx in found.values()):
            break
    else:
        bad = {j: len(idx) for j, idx in found.items() if len(idx) != 1}
        if n >= 3:
            raise CountMismatchError(
                f"window {window} ({lo}, {hi}): components {sorted(bad)} have root counts "
                f"{[bad[j] for j in sorted(bad)]}, expected 1 each",
                window=(lo, hi), expected=len(comps),
                found=sum(len(v) for v in found.values()))
    roots = {}
    for j, idx in found.items():
        f = _f_single(params, q, j)
        roots[j] = [_polish(f, float(lams[t]), float(lams[t + 1])) for t in idx]
    return roots


def _intermediate_root(params: GraphParams, q: Potential, j: int, lam_d: float,
                       lo: float, hi: float, k: int) -> list[float]:
    """Roots of (f_j(lambda) - f_j(lambda_D)) / (lambda - lambda_D) on (lo, hi)."""
    n = int(params.n)
    f = _f_single(params, q, j)
    f_d = f(lam_d)
    hstep = 1e-7 * max(1.0, abs(lam_d))

    def h(lam):
        d = lam - lam_d
        if abs(d) < hstep:
            return (f(lam_d + hstep) - f(lam_d - hstep)) / (2.0 * hstep)
        return (f(lam) - f_d) / d

    base = 16 * (n + 1)
    for i in range(MAX_DOUBLINGS + 1):
        lams = _mu_grid(lo, hi, base * 2 ** i + 1)
        vals = np.array([h(float(x)) for x in lams])
        idx = _sign_changes(vals)
        if len(idx) == 1:
            break
    else:
        if n >= 3:
            raise CountMismatchError(
                f"intermediate {k}: {len(idx)} sign changes of the divided difference on "
                f"({lo}, {hi}), expected 1", window=(lo, hi), expected=1, found=len(idx))
    return [_polish(h, float(lams[t]), float(lams[t + 1])) for t in idx]


# ---------------------------------------------------------------------------
# Dirichlet points


def dirichlet_multiplicity(params: GraphParams, q: Potential, k: int,
                           lam_d: float | None = None) -> DirichletPointResult:
    """Decide whether lambda_D^k is an eigenvalue, i.e. a multiple root of D_n(c, s).

    F = D_n / s has a removable singularity at lambda_D^k.  It is sampled
    symmetrically at lambda_D^k +- h for the three steps 1e-4, 1e-5, 1e-6 (scaled
    by max(1, |lambda_D^k|)), and the h^2 error term is removed by Richardson
    extrapolation.  The Dirichlet-root determinant never vanishes at (+-1, 0),
    so there the answer is always negative.
    """
    if lam_d is None:
        lam_d = _dirichlet_values(q, k)[k - 1]
    tv = transfer_at(q, lam_d)
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    c_d = math.copysign(1.0, tv.c)
    v_d = (b + 1.0) * c_d
    p, qq = pq_recurrence(n, b, v_d)
    if params.dirichlet_root:
        value = p + c_d * qq
        return DirichletPointResult(k, lam_d, False, False, False, value, (value,), value,
                                    abs(p) + abs(qq))
    closed = alpha * p - tv.cprime * qq
    scale = abs(alpha) * abs(p) + max(1.0, math.sqrt(abs(lam_d))) * abs(qq)

    def F(lam):
        t = transfer_at(q, lam)
        return secular_at(params, q, lam, t).value / t.s

    unit = max(1.0, abs(lam_d))
    a = [0.5 * (F(lam_d + h * unit) + F(lam_d - h * unit)) for h in _RICHARDSON_STEPS]
    r1 = (100.0 * a[1] - a[0]) / 99.0
    r2 = (100.0 * a[2] - a[1]) / 99.0
    indeterminate = abs(r1 - r2) > TOL_TAN * scale
    eigen = (not indeterminate) and abs(r2) < TOL_TAN * scale
    return DirichletPointResult(k, lam_d, eigen, eigen, indeterminate, r2, (r1, r2),
                                closed, scale)


def _dirichlet_values(q: Potential, count: int) -> tuple:
    qmin, _ = q.bounds()
    top = max(1.0, (count + 1.0) ** 2 * math.pi ** 2 + abs(qmin) + 1.0)
    while True:
        vals = dirichlet_spectrum(q, top).values
        if len(vals) >= count:
            return vals
        top *= 1.5


def _dirichlet_through(q: Potential, lambda_max: float, extra: int = 2) -> tuple:
    """Dirichlet values up to lambda_max plus ``extra`` beyond it."""
    top = max(1.0, lambda_max)
    while True:
        vals = dirichlet_spectrum(q, top).values
        if sum(1 for x in vals if x > lambda_max) >= extra:
            below = sum(1 for x in vals if x <= lambda_max)
            return vals[:below + extra]
        top = 1.5 * top + 20.0


# ---------------------------------------------------------------------------
# linear graphs


def _lower_end(params: GraphParams, q: Potential, lambda_min: float) -> float:
    qmin, _ = q.bounds()
    if params.alpha < 0:
        lo = min(lambda_min, qmin - 1.5 * params.alpha ** 2 - 10.0)
    else:
        lo = qmin - 1.0
    for _ in range(60):
        if np.all(component_values(params, q, lo) > 0):
            return lo
        lo = from_mu(2.0 * to_mu(lo) - 1.0)
    raise CountMismatchError(f"no lower bound found for the spectrum of {params}")


def _regime_at(params: GraphParams, q: Potential, lam: float) -> str:
    return regime_of(params.b, v_of_lambda(params, q, lam))


def linear_spectrum(params: GraphParams, q: Potential, lambda_min: float | None,
                    lambda_max: float, workers: int | None = None) -> SpectrumReport:
    """Tagged eigenvalues of B_n (or the Dirichlet-root graph) in [lambda_min, lambda_max].

    ``lambda_min=None`` reports from the bottom of the spectrum.  For
    alpha < 0 the lower end is always extended to cover the rogue eigenvalues.
    Windows between Dirichlet points are independent; ``workers`` > 1 runs
    them in a thread pool.
    """
    n, alpha = int(params.n), float(params.alpha)
    lam_lo = _lower_end(params, q, lambda_max if lambda_min is None else lambda_min)
    if lambda_min is None:
        lambda_min = lam_lo
    if not lambda_min < lambda_max:
        raise ValueError("need lambda_min < lambda_max")
    report_min = min(lambda_min, lam_lo) if alpha < 0 else lambda_min
    dvals = _dirichlet_through(q, lambda_max, extra=2)
    K = len(dvals) - 2                       # windows W_0..W_K reach past lambda_max
    edges = [lam_lo] + list(dvals)
    comps = list(range(1, n + 1))
    cluster_comps = comps if params.dirichlet_root else list(range(1, n))

    jobs = []
    for k in range(K + 1):
        jobs.append(("window", k, edges[k], edges[k + 1], comps if k == 0 else cluster_comps))
    if not params.dirichlet_root:
        for k in range(1, K + 2):
            jobs.append(("intermediate", k, edges[k - 1], edges[k + 1], None))

    def run(job):
        what, k, lo, hi, cs = job
        if what == "window":
            return job, _window_roots(params, q, lo, hi, cs, k) if cs else {}
        lam_d = dvals[k - 1]
        dp = dirichlet_multiplicity(params, q, k, lam_d)
        if dp.eigenvalue:
            return job, (dp, [lam_d])
        j = 0 if k % 2 == 1 else n
        return job, (dp, _intermediate_root(params, q, j, lam_d, lo, hi, k))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    tagged, dpoints = [], []
    for (what, k, lo, hi, cs), out in results:
        if what == "window":
            tagged.extend(_tag_window(params, k, out))
        else:
            dp, roots = out
            dpoints.append(dp)
            lam_d = dvals[k - 1]
            j = 0 if k % 2 == 1 else n
            for r in roots:
                if dp.eigenvalue:
                    tagged.append(TaggedEigenvalue(lam_d, DIRICHLET_POINT, k, j, side="0",
                                                   tangential=True))
                else:
                    side = "-" if r < lam_d else "+"
                    tagged.append(TaggedEigenvalue(r, INTERMEDIATE, k, j, side=side))
    tagged = [e for e in tagged if report_min <= e.lam <= lambda_max]
    tagged = [_with_regime(params, q, e) for e in tagged]
    tagged.sort(key=lambda e: e.lam)
    complete = sum(1 for k in range(1, len(dvals)) if dvals[k] <= lambda_max)
    if complete > 0 and dvals[0] > lambda_max:
        complete = 0
    return SpectrumReport(params, q, report_min, lambda_max, tuple(dvals), tagged,
                          [d for d in dpoints if d.lam <= lambda_max], complete)


def _with_regime(params, q, e: TaggedEigenvalue) -> TaggedEigenvalue:
    return TaggedEigenvalue(e.lam, e.tag, e.k, e.component, e.position, e.side, e.kind,
                            _regime_at(params, q, e.lam), e.tangential)


def _tag_window(params: GraphParams, k: int, roots: dict) -> list:
    n, alpha = int(params.n), float(params.alpha)
    flat = sorted((r, j) for j, rs in roots.items() for r in rs)
    out = []
    if params.dirichlet_root:
        if k == 0:
            low_tag = ROGUE if alpha < 0 else UNCONSTRAINED
            for i, (r, j) in enumerate(flat):
                if i == 0 and (n >= 2 or alpha < 0):
                    out.append(TaggedEigenvalue(r, low_tag, 0, j, kind="="))
                elif i == len(flat) - 1:
                    out.append(TaggedEigenvalue(r, INTERMEDIATE, 1, j, side="-"))
                else:
                    out.append(TaggedEigenvalue(r, CLUSTER, 0, j, position=i))
            return out
        for i, (r, j) in enumerate(flat):
            if i == 0:
                out.append(TaggedEigenvalue(r, INTERMEDIATE, k, j, side="+"))
            elif i == len(flat) - 1:
                out.append(TaggedEigenvalue(r, INTERMEDIATE, k + 1, j, side="-"))
            else:
                out.append(TaggedEigenvalue(r, CLUSTER, k, j, position=i))
        return out
    pos = 0
    for r, j in flat:
        if k == 0 and j == n:
            out.append(TaggedEigenvalue(r, ROGUE if alpha < 0 else UNCONSTRAINED, 0, j, kind="="))
        elif k == 0 and j == n - 1:
            out.append(TaggedEigenvalue(r, ROGUE if alpha < 0 else UNCONSTRAINED, 0, j, kind="-"))
        else:
            pos += 1
            out.append(TaggedEigenvalue(r, CLUSTER, k, j, position=pos))
    return out


# ---------------------------------------------------------------------------
# the full tree


@dataclass(frozen=True)
class TreeEntry:
    lam: float
    multiplicity: int
    origins: tuple          # e.g. ("B", 2) for B_n, ("D", m) for the Dirichlet-root graph of m levels

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "multiplicity": self.multiplicity,
                "origins": [list(o) for o in self.origins]}


@dataclass
class TreeSpectrum:
    params: GraphParams
    lambda_min: float
    lambda_max: float
    entries: list
    collisions: list
    parts: dict = field(default_factory=dict, repr=False)

    def expanded(self) -> np.ndarray:
        """Eigenvalues repeated according to multiplicity."""
        return np.array([e.lam for e in self.entries for _ in range(e.multiplicity)])

    def count_below(self, lam: float) -> int:
        return sum(e.multiplicity for e in self.entries if e.lam < lam)

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "lambda_min": self.lambda_min,
                "lambda_max": self.lambda_max,
                "entries": [e.to_dict() for e in self.entries],
                "collisions": [e.to_dict() for e in self.collisions]}


def tree_multiplicity(b: int, n: int, m: int) -> int:
    """Multiplicity (b-1) b^(n-m) carried by the Dirichlet-root graph with m levels."""
    return int((b - 1) * b ** (n - m))


def tree_spectrum(params: GraphParams, q: Potential, lambda_min: float, lambda_max: float,
                  workers: int | None = None) -> TreeSpectrum:
    """Spectrum of the full tree assembled from B_n and the Dirichlet-root graphs.

    Values from different parts closer than 1e-8 are merged into one entry
    with combined multiplicity and listed in ``collisions``.
    """
    if params.dirichlet_root:
        raise ValueError("the tree spectrum needs the Robin root condition")
    if int(params.b) != params.b or params.b < 2:
        raise ValueError("tree semantics need an integer branching factor b >= 2")
    n, b = int(params.n), int(params.b)
    specs = [(("B", n), params, 1)]
    specs += [(("D", m), params.with_(n=m, root_condition="dirichlet"), tree_multiplicity(b, n, m))
              for m in range(1, n + 1)]

    def run(spec):
        origin, p, mult = spec
        return origin, mult, linear_spectrum(p, q, lambda_min, lambda_max)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, specs))
    else:
        results = [run(s) for s in specs]
    lo = min(r.lambda_min for _, _, r in results)
    raw = sorted((e.lam, mult, origin) for origin, mult, r in results for e in r.eigenvalues
                 if e.lam >= lo)
    entries, collisions = [], []
    i = 0
    while i < len(raw):
        group = [raw[i]]
        while i + 1 < len(raw) and raw[i + 1][0] - group[-1][0] <= COLLISION_TOL:
            i += 1
            group.append(raw[i])
        i += 1
        lam = float(np.mean([g[0] for g in group]))
        entry = TreeEntry(lam, sum(g[1] for g in group), tuple(g[2] for g in group))
        entries.append(entry)
        if len({g[2] for g in group}) > 1:
            collisions.append(entry)
    return TreeSpectrum(params, lo, lambda_max, entries, collisions,
                        {origin: r for origin, _, r in results})


# ---------------------------------------------------------------------------
# rogue asymptotics


@dataclass(frozen=True)
class RogueRow:
    alpha: float
    lam_eq: float | None
    lam_minus: float | None
    center: float | None
    width: float | None

    def residuals(self, b: float) -> dict:
        a2 = self.alpha ** 2
        out = {"eq": None if self.lam_eq is None else abs(self.lam_eq + a2),
               "minus": None if self.lam_minus is None else abs(self.lam_minus + a2 / b ** 2),
               "center": None if self.center is None else abs(self.center + a2 / (b + 1.0) ** 2)}
        return out

    def to_dict(self, b: float) -> dict:
        return {"alpha": self.alpha, "lambda_eq": self.lam_eq, "lambda_minus": self.lam_minus,
                "cluster_center": self.center, "cluster_width": self.width,
                "residuals": self.residuals(b)}


def width_bound(b: float, alpha: float) -> float:
    """8 alpha^2 (b+1)^-2 exp(-|alpha| / (b+1)), the bound on the width of the lowest cluster."""
    return 8.0 * alpha ** 2 / (b + 1.0) ** 2 * math.exp(-abs(alpha) / (b + 1.0))


def rogue_trajectory(params: GraphParams, q: Potential, alphas, workers: int | None = None) -> list:
    """Rogue eigenvalues and the lowest cluster as alpha varies (all alpha < 0)."""
    alphas = [float(a) for a in alphas]
    if any(a >= 0 for a in alphas):
        raise ValueError("rogue trajectories need alpha < 0")
    qmin, _ = q.bounds()

    def one(a):
        p = params.with_(alpha=a)
        # everything of interest lies below lambda_D^1
        lam_d1 = _dirichlet_values(q, 1)[0]
        rep = linear_spectrum(p, q, qmin - 1.5 * a * a - 10.0, lam_d1 - 1e-9 * max(1.0, lam_d1))
        eq = rep.rogue("=")
        minus = rep.rogue("-")
        cl = rep.clusters().get(0)
        return RogueRow(a, eq.lam if eq else None, minus.lam if minus else None,
                        cl.center if cl else None, cl.width if cl else None)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, alphas))
    return [one(a) for a in alphas]
