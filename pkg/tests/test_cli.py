from __future__ import annotations

import json

import pytest

from uptest.cli import main
from uptest.experiments import REGISTRY, list_experiments


def test_registry_listing():
    entries = list_experiments()
    names = [e["name"] for e in entries]
    assert len(names) >= 10
    assert names == sorted(names)
    assert all(e["anchor"] for e in entries)


def test_list_json(capsys):
    assert main(["list", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == "v1"
    assert {e["name"] for e in data["experiments"]} == set(REGISTRY)


def test_list_plain(capsys):
    assert main(["list"]) == 0
    assert "counterexample" in capsys.readouterr().out


def test_run_product_exactness(tmp_path):
    out = tmp_path / "r.json"
    code = main(["run", "-e", "product-test-exactness", "-p", "d=3", "-p", "k=3", "--trials", "100", "--seed", "7", "-o", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == "v1" and rep["seed"] == 7 and rep["passed"]
    assert rep["params"] == {"d": [3], "k": [3]}
    assert all(c["passed"] for c in rep["payload"]["checks"])
    assert "numpy" in rep["versions"]


def test_run_counterexample(tmp_path):
    out = tmp_path / "c.json"
    assert main(["run", "-e", "counterexample", "-p", "d=4", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["passed"]


def test_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["run", "-e", "wrapped-verifier", "--seed", "3", "-p", "oracles=3", "-o", str(p)]) == 0
    assert json.loads(a.read_text())["payload"] == json.loads(b.read_text())["payload"]


@pytest.mark.parametrize("argv", [
    ["run", "-e", "no-such-experiment"],
    ["run", "-e", "counterexample", "-p", "d=abc"],
    ["run", "-e", "counterexample", "-p", "bogus=1"],
    ["run", "-e", "counterexample", "-p", "d=3"],
    ["run", "-e", "counterexample", "-p", "novalue"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "uptest:" in capsys.readouterr().err


def test_failed_check_exits_1(tmp_path, monkeypatch):
    from uptest import experiments

    exp = REGISTRY["fooling-basis"]

    def broken(**kwargs):
        return {"checks": [{"name": "forced", "passed": False}], "passed": False}

    monkeypatch.setitem(REGISTRY, "fooling-basis", experiments.Experiment(
        exp.name, exp.anchor, exp.summary, exp.params, broken, exp.default_trials, exp.criterion))
    assert main(["run", "-e", "fooling-basis", "-o", str(tmp_path / "f.json")]) == 1


def test_csv_output(tmp_path):
    csv_path = tmp_path / "s.csv"
    assert main(["run", "-e", "polymethod-audits", "-p", "d=4", "-p", "conjugations=3", "--trials", "5",
                 "-o", str(tmp_path / "p.json"), "--csv", str(csv_path)]) == 0
    assert csv_path.read_text().startswith("p,z_re,z_im,r,stderr")
