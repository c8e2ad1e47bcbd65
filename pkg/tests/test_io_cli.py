"""Tests for JSON serialization and the command-line interface."""

import json

import numpy as np
import pytest

from logmod import BoundaryFunction, ParseError, Pattern, TrigPoly
from logmod import io
from logmod.cli import main


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


# ---------------------------------------------------------------------------
# serialization


def test_canonical_text_is_deterministic():
    payload = {"b": 1.5, "a": [1e-17, 2.0]}
    text = io.canonical_text(payload)
    assert text == io.canonical_text({"a": [1e-17, 2.0], "b": 1.5})
    assert text == io.canonical_text(json.loads(text))
    assert text.endswith("\n")


def test_matrix_roundtrip():
    rng = np.random.default_rng(50)
    mat = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    obj = io.matrix_to_json(mat)
    assert obj["rows"] == 3 and obj["cols"] == 4
    assert len(obj["data"]) == 12
    back = io.json_to_matrix(obj)
    assert np.array_equal(back, mat)


def test_matrix_parse_errors():
    with pytest.raises(ParseError):
        io.json_to_matrix({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})  # wrong length
    with pytest.raises(ParseError):
        io.json_to_matrix({"rows": 2, "cols": 2})
    with pytest.raises(ParseError):
        io.json_to_matrix([1, 2, 3])
    with pytest.raises(ParseError):
        io.json_to_matrix(
            {"rows": 1, "cols": 1, "data": [[float("nan"), 0.0]]}
        )
    with pytest.raises(ParseError):
        io.json_to_matrix({"rows": 1, "cols": 1, "data": [[float("inf"), 0.0]]})


def test_vector_roundtrip():
    vec = np.array([1.0 + 2.0j, -0.5])
    assert np.array_equal(io.json_to_vector(io.vector_to_json(vec)), vec)


def test_pattern_roundtrip():
    p = Pattern.from_pairs(3, [(1, 2), (2, 3), (1, 3)])
    obj = io.pattern_to_json(p)
    assert obj["n"] == 3
    assert io.json_to_pattern(obj) == p
    with pytest.raises(ParseError):
        io.json_to_pattern({"n": 2, "pairs": [[1, 5]]})
    with pytest.raises(ParseError):
        io.json_to_pattern({"pairs": [[1, 1]]})


def test_trig_and_boundary_roundtrip():
    poly = TrigPoly(np.array([1.0 - 0.5j, 3.0, 1.0 + 0.5j]))
    back = io.json_to_trigpoly(io.trigpoly_to_json(poly))
    assert np.allclose(back.coeffs, poly.coeffs)

    f = BoundaryFunction(3, np.exp(1j * 2 * np.pi * np.arange(8) / 8))
    back_f = io.json_to_boundary(io.boundary_to_json(f))
    assert back_f.grid_log2 == 3
    assert np.allclose(back_f.values, f.values)
    with pytest.raises(ParseError):
        io.json_to_boundary({"grid_log2": 3, "values": {"rows": 1}})


def test_file_roundtrip_and_missing_file(tmp_path):
    target = tmp_path / "report.json"
    io.write_json(str(target), {"x": [1.0, 2.0]})
    assert io.read_json(str(target)) == {"x": [1.0, 2.0]}
    with pytest.raises(ParseError):
        io.read_json(str(tmp_path / "absent.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("not json at all {")
    with pytest.raises(ParseError):
        io.read_json(str(bad))


# ---------------------------------------------------------------------------
# command line


def test_cli_decide_yes(tmp_path, capsys):
    path = _write(tmp_path / "p.json", {"n": 2, "pairs": [[1, 1], [1, 2], [2, 2]]})
    assert main(["decide", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "logmodular"
    assert report["certificate"]["permutation"] == [1, 2]
    assert report["cross_check"]["certificate_matches"] is True


def test_cli_decide_no(tmp_path, capsys):
    path = _write(tmp_path / "p.json", {"n": 2, "pairs": [[1, 1], [2, 2]]})
    assert main(["decide", path]) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "not-logmodular"
    assert report["witness"] == [1, 2]


def test_cli_parse_failures(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["decide", str(bad)]) == 64
    assert main(["decide", str(tmp_path / "missing.json")]) == 64
    assert main(["nonsense-command"]) == 64
    capsys.readouterr()


def test_cli_factor_structured(tmp_path, capsys):
    pat = _write(tmp_path / "p.json", {"n": 2, "pairs": [[1, 1], [1, 2], [2, 2]]})
    mat = _write(
        tmp_path / "m.json",
        {"rows": 2, "cols": 2, "data": [[2.0, 0.0], [0.5, 0.0], [0.5, 0.0], [1.0, 0.0]]},
    )
    assert main(["factor", mat, pat]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["route"] == "structured"
    assert report["converged"] is True
    assert report["residual"] <= 1e-10
    factor = io.json_to_matrix(report["factor"])
    assert abs(factor[1, 0]) <= 1e-12  # respects the pattern


def test_cli_factor_descent_on_refuted_pattern(tmp_path, capsys):
    pat = _write(tmp_path / "p.json", {"n": 2, "pairs": [[1, 1], [2, 2]]})
    mat = _write(
        tmp_path / "m.json",
        {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.5, 0.0], [0.5, 0.0], [1.0, 0.0]]},
    )
    assert main(["factor", mat, pat, "--starts", "4", "--iters", "300"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["route"] == "projected-descent"
    assert report["witness"] == [1, 2]
    assert report["residual"] == pytest.approx(np.sqrt(2) * 0.5, abs=1e-5)


def test_cli_fejer(tmp_path, capsys):
    path = _write(tmp_path / "t.json", {"coeffs": [[1.0, 0.0], [2.0, 0.0], [1.0, 0.0]]})
    assert main(["fejer", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["degree"] == 1
    assert report["residual"] <= 1e-6


def test_cli_fejer_negative(tmp_path, capsys):
    path = _write(tmp_path / "t.json", {"coeffs": [[0.5, 0.0], [0.0, 0.0], [0.5, 0.0]]})
    assert main(["fejer", path]) == 2
    capsys.readouterr()


def test_cli_outer(tmp_path, capsys):
    n = 64
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.exp(np.cos(theta))
    path = _write(
        tmp_path / "b.json",
        {"grid_log2": 6, "values": [[float(v), 0.0] for v in vals]},
    )
    assert main(["outer", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["achieved_error"] <= 1e-6
    witness = io.json_to_boundary(report["witness"])
    stride = witness.n // n
    assert np.max(np.abs(np.abs(witness.values[::stride]) ** 2 - vals)) <= 1e-6


def test_cli_a2(tmp_path, capsys):
    basis = np.array([[1.0, 0.5, -0.25], [0.0, 1.0, 0.75]])
    images = np.eye(2)
    path = _write(
        tmp_path / "inst.json",
        {"basis": io.matrix_to_json(basis), "images": io.matrix_to_json(images)},
    )
    assert main(["a2", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["gap"] <= 1e-8 * (1.0 + report["objective"])
    assert report["value"] > 0
    assert len(report["measure"]) == 3


def test_cli_dominate(tmp_path, capsys):
    units = []
    for i in range(2):
        for j in range(2):
            m = np.zeros((2, 2))
            m[i, j] = 1.0
            units.append(io.matrix_to_json(m))
    images = np.zeros((4, 2), dtype=complex)
    images[0, 0] = 1.0
    images[1, 1] = 1.0
    path = _write(
        tmp_path / "inst.json",
        {"basis": units, "images": io.matrix_to_json(images), "side": "row"},
    )
    assert main(["dominate", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["side"] == "row"
    assert report["value"] == pytest.approx(1.0, abs=1e-6)
    state = io.json_to_matrix(report["state"])
    assert np.trace(state).real == pytest.approx(1.0, abs=1e-8)


def test_cli_extend(tmp_path, capsys):
    images = []
    for i, j in [(1, 1), (1, 2), (2, 2)]:
        m = np.zeros((2, 2))
        m[i - 1, j - 1] = 1.0
        images.append([i, j, io.matrix_to_json(m)])
    path = _write(
        tmp_path / "rep.json",
        {
            "pattern": {"n": 2, "pairs": [[1, 1], [1, 2], [2, 2]]},
            "dim": 2,
            "images": images,
        },
    )
    assert main(["extend", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["report"]["extension_error"] <= 1e-7
    assert report["report"]["schwarz_defect"] >= -1e-7
    assert report["input_size"] == 2 and report["output_dim"] == 2


def test_cli_output_file(tmp_path, capsys):
    pat = _write(tmp_path / "p.json", {"n": 1, "pairs": [[1, 1]]})
    out = tmp_path / "report.json"
    assert main(["decide", pat, "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    report = io.read_json(str(out))
    assert report["verdict"] == "logmodular"


def test_cli_selftest_subset(capsys):
    assert main(["selftest", "--criteria", "5"]) == 0
    out = capsys.readouterr().out
    assert "criterion 5: PASS" in out
    assert "all criteria passed" in out
