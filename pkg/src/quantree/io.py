"""JSON and CSV artifacts, and parsing of potential specifications."""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path

import numpy as np

from .potential import Potential, SpiralSample

SCHEMA_VERSION = 1


def _plain(obj):
    """Convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def envelope(kind: str, config: dict, data) -> dict:
    """Wrap ``data`` with the schema version, artifact kind and generating config."""
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "config": _plain(config), "data": _plain(data)}


def dumps(doc: dict) -> str:
    return json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n"


def write_json(path, doc: dict) -> None:
    Path(path).write_text(dumps(doc))


def read_json(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return doc


def write_csv(path, header: list[str], rows) -> None:
    """CSV with a header row; floats written with repr for lossless round trips."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


# ---------------------------------------------------------------------------
# potentials


def parse_potential(text: str) -> Potential:
    """``zero``, ``step:V`` (V on [1/3, 2/3]), ``const:V``, inline JSON, or a JSON file path."""
    t = text.strip()
    if t == "zero":
        return Potential.zero()
    if t.startswith("step:"):
        return Potential.step(float(t[5:]))
    if t.startswith("const:"):
        return Potential.constant(float(t[6:]))
    if t.startswith("{"):
        return Potential.from_dict(json.loads(t))
    if os.path.exists(t):
        return load_potential(t)
    raise ValueError(f"cannot read potential {text!r}: use zero, step:V, const:V, JSON or a file")


def load_potential(path) -> Potential:
    doc = json.loads(Path(path).read_text())
    if "potential" in doc:
        doc = doc["potential"]
    return Potential.from_dict(doc)


def save_potential(path, q: Potential) -> None:
    Path(path).write_text(dumps({"schema_version": SCHEMA_VERSION, "potential": q.to_dict()}))


# ---------------------------------------------------------------------------
# flat exports


def spectrum_rows(report) -> tuple[list[str], list]:
    header = ["lambda", "mu", "tag", "k", "component", "side", "kind", "regime", "tangential"]
    rows = []
    for e in report.eigenvalues:
        mu = math.copysign(math.sqrt(abs(e.lam)), e.lam)
        rows.append([float(e.lam), float(mu), e.tag, e.k, e.component, e.side or "", e.kind or "",
                     e.regime or "", int(bool(e.tangential))])
    return header, rows


def tree_rows(tree) -> tuple[list[str], list]:
    header = ["lambda", "multiplicity", "origins"]
    rows = [[float(e.lam), e.multiplicity, ";".join(f"{a}{m}" for a, m in e.origins)] for e in tree.entries]
    return header, rows


def spiral_rows(sample: SpiralSample) -> tuple[list[str], list]:
    header = ["mu", "lambda", "y", "z"]
    rows = [[float(a), float(b), float(c), float(d)]
            for a, b, c, d in zip(sample.mu, sample.lam, sample.y, sample.z)]
    return header, rows


def quadrature_rows(measure) -> tuple[list[str], list]:
    header = ["index", "node", "weight"]
    return header, [[i, float(x), float(w)] for i, (x, w) in enumerate(zip(measure.nodes, measure.weights))]


def moment_rows(measure) -> tuple[list[str], list]:
    return ["k", "moment"], [[k, float(m)] for k, m in enumerate(measure.moments)]


def band_rows(bands) -> tuple[list[str], list]:
    return ["band", "lo", "hi", "truncated"], [[i, float(x.lo), float(x.hi), int(x.truncated)]
                                              for i, x in enumerate(bands.bands)]


def rogue_rows(rows, b: float) -> tuple[list[str], list]:
    header = ["alpha", "lambda_eq", "lambda_minus", "center", "width",
              "residual_eq", "residual_minus", "residual_center"]
    nan = float("nan")
    val = lambda x: nan if x is None else float(x)
    out = []
    for r in rows:
        res = r.residuals(b)
        out.append([val(r.alpha), val(r.lam_eq), val(r.lam_minus), val(r.center), val(r.width),
                    val(res["eq"]), val(res["minus"]), val(res["center"])])
    return header, out


def eigenfunction_rows(sample: dict) -> tuple[list[str], list]:
    header = ["edge", "x", "u"]
    return header, [[int(e), float(x), float(u)] for e, x, u in zip(sample["edge"], sample["x"], sample["u"])]


__all__ = ["SCHEMA_VERSION", "envelope", "dumps", "write_json", "read_json", "write_csv", "read_csv",
           "parse_potential", "load_potential", "save_potential", "spectrum_rows", "tree_rows",
           "spiral_rows", "quadrature_rows", "moment_rows", "band_rows", "rogue_rows",
           "eigenfunction_rows"]
