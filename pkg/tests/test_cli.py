from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from oracles import TRIANGLE_MI
from lifeinfo.cli import MEASURES, MODELS, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_list_commands(capsys):
    code, out, _ = _run(capsys, "list-models")
    assert code == 0 and all(name in out for name in MODELS)
    code, out, _ = _run(capsys, "list-measures")
    assert code == 0 and all(name in out for name in MEASURES)


def test_usage_errors_exit_1(capsys):
    for argv in (["frobnicate"], [], ["run", "--format", "xml"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1
    capsys.readouterr()
    assert _run(capsys, "run", "--model", "triangle", "--measure", "nope", "--grid", "s=0.1,t=0.1")[0] == 1
    assert _run(capsys, "run", "--model", "wobble", "--measure", "past-mi", "--grid", "s=0.1,t=0.1")[0] == 1
    assert _run(capsys, "run", "--model", "triangle", "--measure", "past-mi")[0] == 1
    assert _run(capsys, "run", "--model", "triangle", "--measure", "os-mi", "--grid", "p=0.1,q=0.2")[0] == 1
    assert _run(capsys, "run", "--config", "/nonexistent.json")[0] == 1


def test_triangle_residual_csv(capsys):
    code, out, _ = _run(capsys, "run", "--model", "triangle", "--measure", "residual-mi",
                        "--grid", "s=0:0.3:4,t=0.1")
    assert code == 0
    rows = _csv(out)
    assert len(rows) == 4 and set(rows[0]) == {"s", "t", "value", "error", "converged"}
    for r in rows:
        assert abs(float(r["value"]) - TRIANGLE_MI) <= 1e-4
        assert r["converged"] == "true"


def test_csv_round_trip_precision(capsys, tmp_path):
    from lifeinfo import os_mi_closed_form
    path = tmp_path / "os.csv"
    code, _, _ = _run(capsys, "run", "--model", "os(n=5,uniform)", "--measure", "os-mi",
                      "--grid", "p=0.1:0.4:4,q=1-p", "--output", str(path))
    assert code == 0
    for r in _csv(path.read_text()):
        p, q = float(r["p"]), float(r["q"])
        assert float(r["value"]) == pytest.approx(os_mi_closed_form(p, q, 5), rel=1e-12, abs=1e-15)


def test_json_output_and_null_rows(capsys):
    code, out, _ = _run(capsys, "run", "--model", "triangle", "--measure", "residual-mi",
                        "--grid", "s=0.1:0.7:2,t=0.4", "--format", "json")
    assert code == 0  # a null region is reported, not counted as a failure
    recs = json.loads(out)
    assert recs[0]["value"] == pytest.approx(TRIANGLE_MI, abs=1e-6)
    assert recs[1]["value"] is None and recs[1]["converged"] is False


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = {"model": {"family": "lomax-tte", "params": {"r": 2.0, "alpha": 1.0, "beta": 1.0}},
           "measure": "past-mi", "grid": {"s": [0.5, 1.0, 2], "t": {"values": [0.3]}},
           "output": {"format": "json"}}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = _run(capsys, "run", "--config", str(path))
    assert code == 0 and len(json.loads(out)) == 2
    code, out, _ = _run(capsys, "run", "--config", str(path), "--measure", "residual-mi", "--format", "csv")
    assert code == 0
    from oracles import lomax_mi
    assert all(abs(float(r["value"]) - lomax_mi(2.0)) <= 1e-6 for r in _csv(out))


def test_dropped_points_warn(capsys):
    code, out, err = _run(capsys, "run", "--model", "os(n=3)", "--measure", "os-mi",
                          "--grid", "p=0.2:0.8:4,q=0.5")
    assert code == 0
    assert "dropped 2 grid point" in err
    assert len(_csv(out)) == 2


def test_nonconvergence_exit_2(capsys, tmp_path):
    cfg = {"model": "gumbel(theta=1)", "measure": "residual-mi", "grid": {"s": 0.2, "t": 0.3},
           "quadrature": {"rel_tol": 1e-15, "abs_tol": 1e-300, "max_subdivisions": 2}}
    path = tmp_path / "hard.json"
    path.write_text(json.dumps(cfg))
    code, out, err = _run(capsys, "run", "--config", str(path))
    assert code == 2
    assert _csv(out)[0]["converged"] == "false"


def test_mc_validate_and_bounds(capsys):
    code, out, _ = _run(capsys, "run", "--model", "triangle", "--measure", "mc-validate",
                        "--grid", "s=0.1,t=0.2", "--samples", "20000", "--seed", "4")
    assert code == 0
    r = _csv(out)[0]
    assert r["converged"] == "true"
    assert abs(float(r["value"]) - TRIANGLE_MI) <= 4 * float(r["error"])
    code, out, _ = _run(capsys, "run", "--model", "triangle", "--measure", "bounds", "--grid", "s=0.1,t=0.2")
    assert code == 0 and float(_csv(out)[0]["value"]) == pytest.approx(-np.log(2))


def test_copula_measures(capsys):
    code, out, _ = _run(capsys, "run", "--model", "copula(clayton,theta=1)", "--measure", "copula-past-mi",
                        "--grid", "p=0.5,q=0.5")
    assert code == 0 and float(_csv(out)[0]["value"]) == pytest.approx(np.log(2) - 0.5, abs=1e-7)
