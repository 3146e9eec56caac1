import json
import re
import subprocess
import sys

import numpy as np
import pytest

from quantree import Potential
from quantree.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VERIFY, dispatch
from quantree.errors import NumericalError
from quantree.io import (SCHEMA_VERSION, dumps, envelope, load_potential, parse_potential, read_csv,
                         read_json, save_potential, write_csv, write_json)


def _run(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = dispatch([*args, "--out", str(out)])
    return code, out


def test_spectrum_example(tmp_path):
    code, out = _run(tmp_path, "spectrum", "--n", "8", "--b", "2", "--alpha", "-20", "--q", "zero",
                     "--lambda-max", "1")
    assert code == EXIT_OK
    doc = read_json(out)
    assert doc["schema_version"] == SCHEMA_VERSION and doc["kind"] == "spectrum"
    assert doc["data"]["counts"]["rogue"] == 2
    assert doc["data"]["counts"]["clusters"]["0"] == 6
    # provenance: the full configuration travels with the data
    cfg = doc["config"]
    assert cfg["n"] == 8 and cfg["alpha"] == -20.0
    assert Potential.from_dict(cfg["potential"]) == Potential.zero()


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_outputs_are_byte_identical(tmp_path, fmt):
    args = ["spectrum", "--n", "6", "--b", "2", "--alpha", "-5", "--q", "step:-16",
            "--lambda-max", "200", "--format", fmt]
    _, a = _run(tmp_path, *args, name=f"a.{fmt}")
    ta = a.read_bytes()
    _, a = _run(tmp_path, *args, name=f"a.{fmt}")
    assert a.read_bytes() == ta
    _, b = _run(tmp_path, *args, "--workers", "3", name=f"b.{fmt}")
    tb = b.read_bytes()
    if fmt == "json":
        # the recorded config differs (out path, workers); the data does not
        assert json.loads(ta)["data"] == json.loads(tb)["data"]
    else:
        assert ta == tb


def test_csv_round_trip(tmp_path):
    code, out = _run(tmp_path, "tree", "--n", "2", "--b", "2", "--alpha", "0", "--lambda-max", "100",
                     "--format", "csv", name="t.csv")
    assert code == EXIT_OK
    header, rows = read_csv(out)
    assert "multiplicity" in header
    lam = [float(r[header.index("lambda")]) for r in rows]
    assert lam == sorted(lam)
    mult = [int(r[header.index("multiplicity")]) for r in rows]
    assert mult.count(3) == 3


def test_plot_zero_set_structure(tmp_path):
    code, out = _run(tmp_path, "plot", "--n", "11", "--b", "3", "--alpha", "-2", "--q", "zero",
                     name="fig.svg")
    assert code == EXIT_OK
    svg = out.read_text()
    comps = set(re.findall(r'id="component-(\d+)"', svg))
    assert comps == {str(k) for k in range(12)}
    assert 'id="spiral"' in svg and 'id="oscillatory-region"' in svg
    assert re.search(r'id="strip-P-\d+"', svg)
    # deterministic: the same call writes the same bytes
    _, again = _run(tmp_path, "plot", "--n", "11", "--b", "3", "--alpha", "-2", "--q", "zero",
                    name="fig2.svg")
    assert again.read_bytes() == out.read_bytes()


@pytest.mark.parametrize("kind", ["alpha", "eigenfunction"])
def test_plot_other_kinds(tmp_path, kind):
    code, out = _run(tmp_path, "plot", "--n", "4", "--b", "2", "--kind", kind, "--alphas=-5,0,5",
                     "--mu-range=-6,8", name=f"{kind}.svg")
    assert code == EXIT_OK
    assert out.read_text().lstrip().startswith("<?xml")


def test_bands_and_rogue_and_moments(tmp_path):
    code, out = _run(tmp_path, "bands", "--b", "2", "--alpha", "-5", "--lambda-max", "100")
    assert code == EXIT_OK
    data = read_json(out)["data"]
    assert len(data["bands"]) >= 3 and data["density"]
    assert sum(g["eigenvalue"] for g in data["gap_roots"]) == 1
    code, out = _run(tmp_path, "rogue", "--n", "8", "--b", "2", "--alphas=-10,-20", name="r.json")
    assert code == EXIT_OK
    rows = read_json(out)["data"]
    assert [r["alpha"] for r in rows] == [-10.0, -20.0]
    code, out = _run(tmp_path, "moments", "--n", "5", "--b", "2", name="m.json")
    assert code == EXIT_OK
    mom = read_json(out)["data"]["moments"]
    assert mom[0] == pytest.approx(1.0) and mom[2] == pytest.approx(2.0)


def test_verify_exit_zero(capsys):
    assert dispatch(["verify", "--suite", "all", "--seed", "7"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out


def test_oracle_compare(tmp_path):
    dump = tmp_path / "k.txt"
    code, out = _run(tmp_path, "oracle-compare", "--n", "2", "--b", "2", "--alpha", "-5",
                     "--dump", str(dump))
    assert code == EXIT_OK
    assert read_json(out)["data"]["passed"] is True
    assert dump.read_text().startswith("# geometry tree")
    code, _ = _run(tmp_path, "oracle-compare", "--n", "2", "--b", "2", "--alpha", "-5",
                   "--tol", "1e-12", name="o2.json")
    assert code == EXIT_VERIFY


@pytest.mark.parametrize("argv", [
    ["spectrum", "--n", "4", "--b", "1", "--alpha", "0"],
    ["spectrum", "--n", "0", "--b", "2"],
    ["spectrum", "--n", "4", "--b", "2", "--q", "bogus"],
    ["spectrum", "--n", "4", "--b", "2", "--lambda-min", "5", "--lambda-max", "1"],
    ["tree", "--n", "2", "--b", "2.5"],
    ["rogue", "--n", "8", "--b", "2", "--alphas=-5,3"],
    ["oracle-compare", "--n", "5", "--b", "2"],
    ["verify", "--suite", "nonsense"],
    ["no-such-command"],
    ["plot", "--n", "3", "--b", "2", "--y-range=3,-3"],
])
def test_config_errors(argv, capsys):
    assert dispatch(argv) == EXIT_CONFIG


def test_numeric_error_exit(monkeypatch, capsys):
    import quantree.spectra as spectra

    def boom(*a, **k):
        raise NumericalError("window count mismatch")

    monkeypatch.setattr(spectra, "linear_spectrum", boom)
    assert dispatch(["spectrum", "--n", "4", "--b", "2"]) == EXIT_NUMERIC
    assert "numerical failure" in capsys.readouterr().err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "quantree", "moments", "--n", "2", "--b", "2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["kind"] == "moments"


# ---------------------------------------------------------------------------
# io helpers


def test_envelope_and_json_round_trip(tmp_path):
    doc = envelope("x", {"a": np.float64(1.5)}, {"v": np.arange(3), "inf": float("inf"), "z": 1 + 2j})
    write_json(tmp_path / "d.json", doc)
    back = read_json(tmp_path / "d.json")
    assert back["data"] == {"v": [0, 1, 2], "inf": "inf", "z": {"re": 1.0, "im": 2.0}}
    assert dumps(doc) == (tmp_path / "d.json").read_text()


def test_read_json_rejects_other_schema(tmp_path):
    (tmp_path / "d.json").write_text('{"schema_version": 99}')
    with pytest.raises(ValueError):
        read_json(tmp_path / "d.json")


def test_csv_floats_lossless(tmp_path):
    vals = [0.1, 1 / 3, -2.5e-300, 123456789.123456789]
    write_csv(tmp_path / "f.csv", ["x"], [[v] for v in vals])
    _, rows = read_csv(tmp_path / "f.csv")
    assert [float(r[0]) for r in rows] == vals


def test_parse_potential_forms(tmp_path):
    assert parse_potential("zero") == Potential.zero()
    assert parse_potential("step:-16") == Potential.step(-16.0)
    assert parse_potential(" const:2.5 ") == Potential.constant(2.5)
    q = Potential.piecewise_constant([0.25, 0.75], [1.0, -3.0, 1.0])
    assert parse_potential(json.dumps(q.to_dict())) == q
    save_potential(tmp_path / "q.json", q)
    assert parse_potential(str(tmp_path / "q.json")) == q
    assert load_potential(tmp_path / "q.json") == q
    with pytest.raises(ValueError):
        parse_potential("nope")
