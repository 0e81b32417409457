from __future__ import annotations

import json

import pytest

from upslopes.cli import JobConfig, main, run


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _strip(doc):
    doc = dict(doc)
    doc.pop("timestamp", None)
    return doc


def test_clay_p5(capsys):
    code, out, _ = _run(["clay", "--p", "5", "--count", "1", "--json", "-"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["clay"]["values"] == ["1"]
    assert "timestamp" in doc


def test_slopes_json_schema(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = _run(["slopes", "--p", "11", "--dim", "3", "--prec", "6", "--json", str(path)], capsys)
    assert code == 0 and "cuspidal" in out
    doc = json.loads(path.read_text())
    assert doc["params"]["qprec"] == "auto"
    for entry in doc["char_series"]:
        assert isinstance(entry["coeff"], str) and isinstance(entry["valuation"], str)
    first = doc["slopes"][0]
    assert first == {"slope": "0", "mult": 1, "classical": "unknown", "cuspidal": False, "provisional": False, "lower_bound": False}
    assert all(isinstance(s["slope"], str) for s in doc["slopes"])
    assert set(doc["precision_report"]) >= {"p_precision", "qprec", "expansion_depth"}


def test_weight_four_flags(capsys):
    code, out, _ = _run(["slopes", "--p", "17", "--weight", "4", "--dim", "3", "--prec", "8", "--json", "-"], capsys)
    doc = json.loads(out)
    flags = {s["slope"]: s["classical"] for s in doc["slopes"] if not s["lower_bound"]}
    assert flags["1"] == "yes"


def test_determinism_apart_from_timestamp(tmp_path):
    cfg = JobConfig("charpoly", 11, dim=2, prec=5, cache_dir=str(tmp_path))
    a, _ = run(cfg)
    b, _ = run(cfg)  # warm cache
    cold, _ = run(JobConfig("charpoly", 11, dim=2, prec=5))
    assert json.dumps(_strip(a)) == json.dumps(_strip(b)) == json.dumps(_strip(cold))


def test_config_errors_exit_2(capsys):
    assert _run(["slopes", "--p", "13"], capsys)[0] == 2
    assert _run(["slopes", "--p", "11", "--weight", "3"], capsys)[0] == 2
    assert _run(["eigen", "--p", "19", "--weight", "4"], capsys)[0] == 2
    assert _run(["stabilize", "--p", "11", "--dims", "4,2"], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["slopes"])
    assert info.value.code == 2


def test_module_error_exit_1(capsys):
    code, out, err = _run(["charpoly", "--p", "11", "--dim", "3", "--prec", "5", "--qprec", "20", "--json", "-"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["error"]["type"] and doc["error"]["message"]
    assert "message" in err


def test_eigen_and_stabilize(capsys):
    code, out, _ = _run(["eigen", "--p", "19", "--dim", "3", "--prec", "5", "--iters", "8", "--json", "-"], capsys)
    assert code == 0
    eig = json.loads(out)["eigen"]
    assert eig["iterations"] == 8 and isinstance(eig["eigenvalue"], str)
    code, out, _ = _run(["stabilize", "--p", "11", "--prec", "5", "--dims", "3,4", "--json", "-"], capsys)
    assert code == 0
    assert int(json.loads(out)["stabilization"]["stable_prefix"]) >= 3


def test_compare_text(capsys):
    code, out, _ = _run(["compare", "--p", "11", "--dim", "6", "--prec", "13"], capsys)
    assert code == 0 and "match" in out
