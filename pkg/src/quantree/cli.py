"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import io
from .errors import NumericalError

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated run settings; embedded in every artifact for provenance."""

    command: str
    n: int | None = None
    b: float | None = None
    alpha: float | None = None
    root: str = "robin"
    q: str = "zero"
    potential: dict = field(default_factory=dict)
    lambda_min: float | None = None
    lambda_max: float | None = None
    mu_range: list | None = None
    alphas: list | None = None
    out: str | None = None
    format: str = "json"
    workers: int | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quantree", description="Spectra of regular rooted quantum trees.")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph(p, need_n=True):
        p.add_argument("--n", type=int, required=need_n, help="number of levels")
        p.add_argument("--b", type=float, required=True, help="branching factor")
        p.add_argument("--alpha", type=float, default=0.0, help="Robin parameter")
        p.add_argument("--q", default="zero", help="zero | step:V | const:V | inline JSON | JSON file")

    def output(p, formats=("json", "csv")):
        p.add_argument("--out", help="output file (stdout when omitted)")
        p.add_argument("--format", choices=formats, default=formats[0])

    def common(p):
        p.add_argument("--workers", type=int, default=None, help="threads for parameter sweeps")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("spectrum", help="tagged spectrum of one linear graph")
    graph(p)
    p.add_argument("--root", choices=["robin", "dirichlet"], default="robin")
    p.add_argument("--lambda-min", type=float, default=None, help="default: bottom of the spectrum")
    p.add_argument("--lambda-max", type=float, default=100.0)
    output(p)
    common(p)

    p = sub.add_parser("tree", help="spectrum of the full tree with multiplicities")
    graph(p)
    p.add_argument("--lambda-min", type=float, default=None)
    p.add_argument("--lambda-max", type=float, default=100.0)
    output(p)
    common(p)

    p = sub.add_parser("plot", help="SVG figures")
    graph(p)
    p.add_argument("--root", choices=["robin", "dirichlet"], default="robin")
    p.add_argument("--kind", choices=["zeroset", "alpha", "eigenfunction"], default="zeroset")
    p.add_argument("--y-range", default="-3,3")
    p.add_argument("--z-range", default="-1.5,1.5")
    p.add_argument("--mu-range", default="-8,12")
    p.add_argument("--alphas", default="-20,-10,-5,-2,0,2,5")
    p.add_argument("--no-strips", action="store_true")
    p.add_argument("--out", help="SVG path (stdout when omitted)")
    common(p)

    p = sub.add_parser("bands", help="bands and density of states of the semi-infinite tree")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--q", default="zero")
    p.add_argument("--lambda-max", type=float, default=400.0)
    p.add_argument("--samples", type=int, default=9, help="density samples per band")
    output(p)
    common(p)

    p = sub.add_parser("rogue", help="rogue eigenvalues and the lowest cluster against alpha")
    graph(p)
    p.add_argument("--alphas", default="-10,-20,-40")
    output(p)
    common(p)

    p = sub.add_parser("moments", help="quadrature measure of the polynomials P_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=float, required=True)
    output(p)
    common(p)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all", help="comma-separated suite names or 'all'")
    p.add_argument("--out", help="JSON report path")
    common(p)

    p = sub.add_parser("oracle-compare", help="full-tree finite differences against the decomposition")
    graph(p)
    p.add_argument("--m", type=int, default=12, help="number of lowest eigenvalues")
    p.add_argument("--h", type=float, default=1.0 / 96.0, help="coarse mesh size")
    p.add_argument("--tol", type=float, default=1e-4, help="allowed eigenvalue deviation")
    p.add_argument("--dump", help="write the coarse tree matrices in coordinate format")
    p.add_argument("--out", help="JSON report path")
    common(p)
    return ap


def _range(text: str, name: str) -> list[float]:
    vals = _floats(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise ConfigError(f"--{name} needs two increasing numbers, got {text!r}")
    return vals


def build_config(ns: argparse.Namespace):
    """Validate arguments and load the potential before any computation."""
    cmd = ns.command
    cfg = RunConfig(cmd, out=getattr(ns, "out", None), format=getattr(ns, "format", "json"),
                    workers=getattr(ns, "workers", None), seed=getattr(ns, "seed", 0))
    q = None
    if hasattr(ns, "q"):
        try:
            q = io.parse_potential(ns.q)
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
        cfg.q, cfg.potential = ns.q, q.to_dict()
    if hasattr(ns, "b") and ns.b is not None:
        if not ns.b > 1:
            raise ConfigError("--b must exceed 1")
        cfg.b = ns.b
    if getattr(ns, "n", None) is not None:
        if ns.n < 1:
            raise ConfigError("--n must be at least 1")
        cfg.n = ns.n
    if hasattr(ns, "alpha"):
        if not math.isfinite(ns.alpha):
            raise ConfigError("--alpha must be finite")
        cfg.alpha = ns.alpha
    cfg.root = getattr(ns, "root", "robin")
    if cfg.workers is not None and cfg.workers < 1:
        raise ConfigError("--workers must be positive")
    if cmd in ("spectrum", "tree"):
        cfg.lambda_min, cfg.lambda_max = ns.lambda_min, ns.lambda_max
        if cfg.lambda_min is not None and not cfg.lambda_min < cfg.lambda_max:
            raise ConfigError("--lambda-min must be below --lambda-max")
    if cmd == "tree" and (int(ns.b) != ns.b or ns.b < 2):
        raise ConfigError("tree spectra need an integer branching factor b >= 2")
    if cmd == "plot":
        cfg.mu_range = _range(ns.mu_range, "mu-range")
        cfg.extra = {"kind": ns.kind, "y_range": _range(ns.y_range, "y-range"),
                     "z_range": _range(ns.z_range, "z-range"), "strips": not ns.no_strips}
        cfg.alphas = _floats(ns.alphas)
    if cmd == "bands":
        cfg.lambda_max = ns.lambda_max
        if ns.samples < 1:
            raise ConfigError("--samples must be positive")
        cfg.extra = {"samples": ns.samples}
    if cmd == "rogue":
        cfg.alphas = _floats(ns.alphas)
        if not cfg.alphas or any(a >= 0 for a in cfg.alphas):
            raise ConfigError("--alphas must be negative")
    if cmd == "verify":
        cfg.extra = {"suite": [s.strip() for s in ns.suite.split(",") if s.strip()]}
        from .verify import SUITES
        bad = [s for s in cfg.extra["suite"] if s != "all" and s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suite(s) {bad}; choose from {sorted(SUITES)} or 'all'")
    if cmd == "oracle-compare":
        from .oracle import TREE_MAX_B, TREE_MAX_N
        if not (1 <= ns.n <= TREE_MAX_N and int(ns.b) == ns.b and 2 <= ns.b <= TREE_MAX_B):
            raise ConfigError(f"oracle-compare needs n <= {TREE_MAX_N} and integer 2 <= b <= {TREE_MAX_B}")
        if not 0 < ns.h <= 1.0 / 16.0:
            raise ConfigError("--h must lie in (0, 1/16]")
        cfg.extra = {"m": ns.m, "h": ns.h, "tol": ns.tol, "dump": ns.dump}
    return cfg, q


def _params(cfg: RunConfig):
    from .determinants import GraphParams
    try:
        return GraphParams(cfg.n, cfg.b, cfg.alpha, cfg.root)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _emit_text(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(cfg: RunConfig, kind: str, data, csv_table=None) -> None:
    if cfg.format == "csv" and csv_table is not None:
        header, rows = csv_table
        if cfg.out:
            io.write_csv(cfg.out, header, rows)
        else:
            import csv
            w = csv.writer(sys.stdout, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
        return
    _emit_text(cfg, io.dumps(io.envelope(kind, cfg.to_dict(), data)))


def cmd_spectrum(cfg, q):
    from .spectra import linear_spectrum
    rep = linear_spectrum(_params(cfg), q, cfg.lambda_min, cfg.lambda_max, workers=cfg.workers)
    data = rep.to_dict()
    data["counts"] = {"rogue": len(rep.with_tag("rogue")),
                      "clusters": {str(k): c.count for k, c in rep.clusters().items()}}
    _emit(cfg, "spectrum", data, io.spectrum_rows(rep))
    return EXIT_OK


def cmd_tree(cfg, q):
    from .spectra import tree_spectrum
    ts = tree_spectrum(_params(cfg), q, cfg.lambda_min, cfg.lambda_max, workers=cfg.workers)
    if ts.collisions:
        print(f"warning: {len(ts.collisions)} eigenvalue(s) shared by different parts; "
              "multiplicities combined", file=sys.stderr)
    _emit(cfg, "tree", ts.to_dict(), io.tree_rows(ts))
    return EXIT_OK


def cmd_plot(cfg, q):
    from . import plotting
    from .potential import from_mu
    from .spectra import linear_spectrum
    p = _params(cfg)
    kind = cfg.extra["kind"]
    mu0, mu1 = cfg.mu_range
    if kind == "zeroset":
        ev = linear_spectrum(p, q, float(from_mu(mu0)), float(from_mu(mu1)), workers=cfg.workers).values
        fig = plotting.zero_set_figure(p, q, cfg.extra["y_range"], cfg.extra["z_range"], cfg.mu_range,
                                       strips=cfg.extra["strips"], eigenvalues=ev)
    elif kind == "alpha":
        fig = plotting.alpha_panel_figure(p.n, p.b, q, cfg.alphas, cfg.mu_range, p.root_condition,
                                          workers=cfg.workers)
    else:
        rep = linear_spectrum(p, q, None, float(from_mu(mu1)), workers=cfg.workers)
        fig = plotting.eigenfunction_figure(p, q, rep.values[:6])
    if cfg.out:
        plotting.save_svg(fig, cfg.out)
    else:
        import io as _io
        buf = _io.BytesIO()
        plotting.save_svg(fig, buf)
        sys.stdout.write(buf.getvalue().decode())
    return EXIT_OK


def cmd_bands(cfg, q):
    from .infinite import density_of_states, infinite_bands, infinite_point_spectrum
    bs = infinite_bands(cfg.b, cfg.alpha, q, cfg.lambda_max)
    k = cfg.extra["samples"]
    dens = []
    for i, band in enumerate(bs.bands):
        xs = band.lo + (band.hi - band.lo) * (np.arange(1, k + 1) / (k + 1))
        for x in xs:
            dens.append({"band": i, "lambda": float(x),
                         "density": density_of_states(cfg.b, cfg.alpha, q, float(x)),
                         "normalized": density_of_states(cfg.b, cfg.alpha, q, float(x), normalized=True)})
    gaps = infinite_point_spectrum(cfg.b, cfg.alpha, q, cfg.lambda_max, candidates=True)
    data = bs.to_dict()
    data["density"] = dens
    data["gap_roots"] = [g.to_dict() for g in gaps]
    _emit(cfg, "bands", data, io.band_rows(bs))
    return EXIT_OK


def cmd_rogue(cfg, q):
    from .spectra import rogue_trajectory, width_bound
    p = _params(cfg)
    rows = rogue_trajectory(p, q, cfg.alphas, workers=cfg.workers)
    data = [dict(r.to_dict(p.b), width_bound=width_bound(p.b, r.alpha)) for r in rows]
    _emit(cfg, "rogue", data, io.rogue_rows(rows, p.b))
    return EXIT_OK


def cmd_moments(cfg, q):
    from .orthopoly import PolyParams, quadrature_measure
    try:
        pp = PolyParams(cfg.b, cfg.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    m = quadrature_measure(pp)
    data = {"params": pp.to_dict(), "nodes": m.nodes, "weights": m.weights, "moments": m.moments}
    _emit(cfg, "moments", data, io.quadrature_rows(m))
    return EXIT_OK


def cmd_verify(cfg, q):
    from .verify import run_suites
    checks = run_suites(cfg.extra["suite"], cfg.seed)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.suite:<15} {c.name:<40} {c.detail}")
    ok = all(c.passed for c in checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    if cfg.out:
        io.write_json(cfg.out, io.envelope("verify", cfg.to_dict(), [c.to_dict() for c in checks]))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_oracle_compare(cfg, q):
    from .oracle import assemble_tree, decomposition_check
    ex = cfg.extra
    if ex["dump"]:
        assemble_tree(cfg.n, int(cfg.b), cfg.alpha, q, ex["h"]).dump(ex["dump"])
    rep = decomposition_check(cfg.n, int(cfg.b), cfg.alpha, q, ex["m"], h=ex["h"])
    ok = rep.ok and rep.max_deviation <= ex["tol"]
    print(f"max deviation {rep.max_deviation:.3e} (tolerance {ex['tol']:.1e}); "
          f"multiplicities {rep.fd_multiplicities}; mismatches {len(rep.multiplicity_mismatches)}",
          file=sys.stderr)
    data = rep.to_dict()
    data["passed"] = ok
    _emit_text(cfg, io.dumps(io.envelope("oracle-compare", cfg.to_dict(), data)))
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "spectrum": cmd_spectrum,
    "tree": cmd_tree,
    "plot": cmd_plot,
    "bands": cmd_bands,
    "rogue": cmd_rogue,
    "moments": cmd_moments,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
}


def dispatch(argv=None) -> int:
    """Parse ``argv``, run the subcommand and return the exit code."""
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        cfg, q = build_config(ns)
        return COMMANDS[cfg.command](cfg, q)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        for key in ("window", "expected", "found", "achieved_tolerance"):
            if getattr(exc, key, None) is not None:
                print(f"  {key}: {getattr(exc, key)}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError) as exc:
        # invalid combinations only detected by the library (e.g. parameter ranges)
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
