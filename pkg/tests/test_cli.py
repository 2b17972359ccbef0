import io
import json
import subprocess
import sys

import numpy as np
import pytest

from quadham.cli import main, parse_complex, parse_range, parse_times, UsageError
from quadham.modelfile import ModelFileError, dump_model, load_model, parse_model
from quadham.sweep import read_sweep_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write_model(tmp_path, doc, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


# ---------------------------------------------------------------------------
# model files


def test_parse_builtin_and_custom():
    mf = parse_model({"model": "coupled_xy", "a": 2, "b": [0, 1]})
    assert mf.spec.b == 1j and mf.spec.K == 2
    g = [[[1, 0], [0.5, 0]], [[0.5, 0], [1, 0]]]
    mf = parse_model({"model": "custom", "gamma": g, "symmetries": [{"kind": "unitary", "label": "P"}]})
    assert mf.spec.K == 1
    assert mf.symmetries[0].label == "P"


def test_roundtrip_dump(tmp_path):
    mf = parse_model(
        {
            "model": "custom",
            "gamma": [[[1, 0], [0, 0.5]], [[0, 0.5], [1, 0]]],
            "symmetries": [{"kind": "antiunitary", "label": "mine", "matrix": [[[-1, 0], [0, 0]], [[0, 0], [1, 0]]]}],
        }
    )
    back = parse_model(json.loads(json.dumps(dump_model(mf))))
    np.testing.assert_array_equal(back.spec.gamma, mf.spec.gamma)
    np.testing.assert_array_equal(back.symmetries[0].matrix, mf.symmetries[0].matrix)


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {},
        {"model": "oned", "extra": 1},
        {"model": "oned", "b": [1, 2, 3]},
        {"model": "oned", "b": "one"},
        {"model": "oned", "K": 0},
        {"model": "oned", "gamma": [[[1, 0]]]},
        {"model": "custom", "gamma": [[[1, 0], [0, 0]]]},
        {"model": "coupled_xy", "symmetries": [{"kind": "unitary", "label": "nope"}]},
        {"model": "coupled_xy", "symmetries": [{"kind": "unitary", "label": "T"}]},
        {"model": "coupled_xy", "symmetries": [{"label": "T"}]},
    ],
)
def test_bad_documents(doc):
    with pytest.raises(ValueError):
        parse_model(doc)


def test_load_errors(tmp_path):
    with pytest.raises(ModelFileError):
        load_model(tmp_path / "missing.json")
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ModelFileError):
        load_model(p)


# ---------------------------------------------------------------------------
# argument helpers


def test_arg_helpers():
    assert parse_complex("-1,0.5") == -1 + 0.5j
    assert parse_complex("2") == 2
    assert parse_range("-3:3") == (-3.0, 3.0)
    assert len(parse_times("0:1:5")) == 5
    for fn, bad in ((parse_complex, "1,2,3"), (parse_range, "1"), (parse_times, "0:1"), (parse_times, "0:1:0")):
        with pytest.raises(UsageError):
            fn(bad)


# ---------------------------------------------------------------------------
# subcommands


def test_analyze_ep(tmp_path, capsys):
    path = write_model(tmp_path, {"model": "oned", "b": [1, 0]})
    code, out, _ = run(["analyze", "--model", path], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["classification"] == "ExceptionalCandidate"
    assert rep["defects"] == [{"eigenvalue": [0.0, 0.0], "algebraic": 2, "geometric": 1}]
    assert rep["E0"] is None
    assert rep["structure"]["uh_symmetric"]


def test_analyze_ground_energy(capsys):
    code, out, _ = run(["analyze", "--builtin", "oned", "--b", "0.6"], capsys)
    rep = json.loads(out)
    assert code == 0 and abs(rep["E0"][0] - 0.8) < 1e-12
    assert rep["pairing"] == [[1, 2]]
    assert len(rep["charpoly"]) == 3


def test_analyze_complex_and_symmetries(capsys):
    code, out, _ = run(["analyze", "--builtin", "coupled_xy", "--a", "1", "--b", "0,1"], capsys)
    rep = json.loads(out)
    assert rep["classification"] == "Complex"
    ax = next(s for s in rep["symmetries"] if s["label"] == "A_x")
    assert ax["holds"] and {e["verdict"] for e in ax["exactness"]} == {"broken"}


def test_negative_values_need_equals(capsys):
    code, out, _ = run(["analyze", "--builtin", "oned", "--b=-0.6,0"], capsys)
    assert code == 0 and abs(json.loads(out)["E0"][0] - 0.8) < 1e-12


def test_validation_exit_codes(tmp_path, capsys):
    assert run(["analyze", "--builtin", "coupled_xy", "--a=-1"], capsys)[0] == 2
    assert run(["analyze"], capsys)[0] == 2
    path = write_model(tmp_path, {"model": "oned", "bogus": 1})
    code, _, err = run(["analyze", "--model", path], capsys)
    assert code == 2 and "bogus" in err
    assert run(["analyze", "--model", path, "--builtin", "oned"], capsys)[0] == 2
    assert run(["sweep", "--builtin", "oned", "--param", "b_real", "--range", "1:0"], capsys)[0] == 2
    assert run(["ep-find", "--builtin", "oned", "--param", "b_real", "--range", "0:0.5"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--builtin", "oned", "--param", "nope", "--range", "0:1"])
    assert exc.value.code == 2


def test_sweep_csv_file(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(
        ["sweep", "--builtin", "coupled_pp", "--a", "2", "--param", "b_imag", "--range", "0:1.5", "--steps", "31",
         "--out", str(out)],
        capsys,
    )
    assert code == 0
    rows = read_sweep_csv(io.StringIO(out.read_text()))
    flips = [r.param for r, s in zip(rows, rows[1:]) if r.classification != s.classification]
    assert len(flips) == 1 and abs(flips[0] - 0.7) < 0.051


def test_sweep_json(capsys):
    code, out, _ = run(["sweep", "--builtin", "oned", "--param", "b_imag", "--range=-3:3", "--steps", "7",
                        "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc) == 7 and {r["classification"] for r in doc} == {"AllReal"}


def test_ep_find_cli(capsys):
    code, out, _ = run(["ep-find", "--builtin", "coupled_xy", "--a", "2", "--param", "b_real", "--range", "2:3.5"],
                       capsys)
    doc = json.loads(out)
    assert code == 0 and abs(doc["value"] - 2 * np.sqrt(2)) < 1e-7
    assert doc["defect"]["algebraic"] == 2


def test_symmetry_check_cli(tmp_path, capsys):
    path = write_model(
        tmp_path,
        {"model": "oned", "b": [0, 0.5], "symmetries": [{"kind": "antiunitary", "label": "PT", "matrix":
                                                          [[[-1, 0], [0, 0]], [[0, 0], [1, 0]]]}]},
    )
    code, out, _ = run(["symmetry-check", "--model", path], capsys)
    doc = json.loads(out)
    assert code == 0 and doc[0]["holds"] and doc[0]["conjugation_closed"]
    assert [e["verdict"] for e in doc[0]["exactness"]] == ["exact", "exact"]


def test_evolve_csv(capsys):
    code, out, _ = run(["evolve", "--builtin", "oned", "--times", "0:1:3"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,re_x_x,re_x_p,re_p_x,re_p_p,im_x_x,im_x_p,im_p_x,im_p_p"
    t, *vals = map(float, lines[2].split(","))
    assert t == 0.5 and abs(vals[0] - np.cos(1.0)) < 1e-14 and abs(vals[1] - np.sin(1.0)) < 1e-14


def test_evolve_json(capsys):
    code, out, _ = run(["evolve", "--builtin", "coupled_xy", "--a", "2", "--times", "0:1:2", "--format", "json"],
                       capsys)
    doc = json.loads(out)
    assert code == 0 and doc["basis"] == ["x", "y", "px", "py"]
    np.testing.assert_allclose(np.array(doc["samples"][0]["coefficients"])[..., 0], np.eye(4))


def test_verify_passes(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().splitlines()[-1].endswith("checks passed")


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "quadham", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "quadham" in out.stdout
