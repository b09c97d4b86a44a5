import json

from pytest import approx

from naidem.cli import AnalysisReport, _dumps, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_catalog_list(capsys):
    code, out = _run(capsys, "catalog", "list")
    assert code == 0
    names = [row["name"] for row in json.loads(out)]
    assert "matsuo" in names and "u2" in names


def test_catalog_build(capsys):
    code, out = _run(capsys, "catalog", "build", "gen-matsuo", "--alpha", "0.3", "--eps", "0.2")
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 3 and data["label"] == "3C(0.3,0.2)"


def test_analyze_matsuo(capsys):
    code, out = _run(capsys, "analyze", "--catalog", "matsuo")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"]["kind"] == "generic"
    assert len(data["idempotents"]) == 8
    assert data["syzygy"]["principal_max_residual"] < 1e-6
    assert data["unital"] is not None and len(data["unital"]["pairs"]) == 3
    assert data["findings"] == []


def test_analyze_is_deterministic(capsys):
    _, first = _run(capsys, "analyze", "--catalog", "gen-matsuo", "--seed", "7")
    _, second = _run(capsys, "analyze", "--catalog", "gen-matsuo", "--seed", "7")
    assert first == second


def test_asymmetric_input_exits_one(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 2, "tensor": [[0, 1, 0, 1, 0]]}))
    code, out = _run(capsys, "analyze", str(path))
    assert code == 1
    assert out == ""


def test_missing_input_exits_one(capsys):
    assert _run(capsys, "solve")[0] == 1


def test_report_round_trip(capsys, tmp_path):
    path = tmp_path / "report.json"
    assert _run(capsys, "analyze", "--catalog", "constant-2d", "--out", str(path))[0] == 0
    data = json.loads(path.read_text())
    report = AnalysisReport.from_dict(data)
    assert report.to_dict() == data
    assert not report.inconsistent


def test_cubic_input_file(capsys, tmp_path):
    path = tmp_path / "u1.json"
    path.write_text(json.dumps({"dim": 2, "tri": [[0, 0, 0, 1, 0], [1, 1, 1, 1, 0]]}))
    code, out = _run(capsys, "solve", str(path))
    assert code == 0
    assert len(json.loads(out)["idempotents"]) == 4


def test_extremal_u1(capsys):
    code, out = _run(capsys, "extremal", "--catalog", "u1", "--n", "3")
    assert code == 0
    data = json.loads(out)
    assert data["f_value"] == approx(1)
    assert data["half_bound_holds"] and data["one_is_simple"]


def test_extremal_zero_cubic(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"dim": 2, "tri": []}))
    assert _run(capsys, "extremal", str(path))[0] == 1


def test_analyze_u2_is_nongeneric(capsys):
    code, out = _run(capsys, "analyze", "--catalog", "u2")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"]["kind"] == "nongeneric_nilpotent"
    assert len(data["nilpotent_directions"]) == 1
    assert data["syzygy"] is None


def test_analyze_metrised(capsys):
    code, out = _run(capsys, "analyze", "--catalog", "u1", "--n", "3", "--metrised")
    assert code == 0
    metrised = json.loads(out)["metrised"]
    assert metrised["passes"]
    assert metrised["extremal"]["f_value"] == approx(1)


def test_text_format(capsys):
    code, out = _run(capsys, "analyze", "--catalog", "constant-2d", "--format", "text")
    assert code == 0
    assert "verdict: generic" in out
    assert "paths_total" in out


def _inner_product(tmp_path, matrix):
    path = tmp_path / "B.json"
    path.write_text(json.dumps({"matrix": matrix}))
    return str(path)


def test_analyze_with_euclidean_inner_product(capsys, tmp_path):
    B = _inner_product(tmp_path, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    code, out = _run(capsys, "analyze", "--catalog", "u1", "--n", "3", "--inner-product", B)
    assert code == 0
    metrised = json.loads(out)["metrised"]
    assert metrised["passes"] and metrised["euclidean"]
    assert metrised["extremal"]["f_value"] == approx(1)


def test_analyze_with_weighted_inner_product(capsys, tmp_path):
    B = _inner_product(tmp_path, [[2, 0, 0], [0, 1, 0], [0, 0, 3]])
    code, out = _run(capsys, "analyze", "--catalog", "u1", "--n", "3", "--inner-product", B)
    assert code == 0
    metrised = json.loads(out)["metrised"]
    assert metrised["passes"] and not metrised["euclidean"]
    assert "extremal" not in metrised


def test_analyze_with_non_invariant_inner_product(capsys, tmp_path):
    B = _inner_product(tmp_path, [[2, 1, 0], [1, 2, 0], [0, 0, 1]])
    code, out = _run(capsys, "analyze", "--catalog", "u1", "--n", "3", "--inner-product", B)
    assert code == 0
    metrised = json.loads(out)["metrised"]
    assert not metrised["passes"] and metrised["violation"] > 0.5


def test_malformed_inner_product_exits_one(capsys, tmp_path):
    path = tmp_path / "B.json"
    path.write_text("{not json")
    assert _run(capsys, "analyze", "--catalog", "u1", "--inner-product", str(path))[0] == 1


def test_floats_keep_seventeen_digits():
    text = _dumps({"x": 0.3, "y": [1e-20, 2.0]})
    assert "0.29999999999999999" in text
    assert json.loads(text) == {"x": 0.3, "y": [1e-20, 2.0]}
