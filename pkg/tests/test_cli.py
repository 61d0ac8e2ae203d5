import json
import os

import pytest
from click.testing import CliRunner

from strata_lab.cli import main

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")
SMALL = {"p": [3], "max_e": 2, "max_f": 2, "max_N": 4, "seed": 3,
         "counts": {"pure": 4, "chains": 3, "maximal": 2, "modification": 2,
                    "sr_elements": 50, "evaluations": 10}}


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("STRATA_LAB_PRECISION", raising=False)
    return CliRunner()


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(SMALL))
    return str(path)


def test_run_is_deterministic(runner, small_cfg, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = runner.invoke(main, ["run", "--config", small_cfg, "--out", str(a)])
    r2 = runner.invoke(main, ["run", "--config", small_cfg, "--out", str(b), "--jobs", "2"])
    assert r1.exit_code == 0, r1.output
    assert r2.exit_code == 0, r2.output
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["summary"]["failed"] == 0
    assert set(rep["suites"]) == {"strata", "sr", "characters", "filtration", "yu"}


def test_suite_and_seed_overrides(runner, small_cfg):
    r = runner.invoke(main, ["run", "--config", small_cfg, "--suite", "strata", "--seed", "9"])
    assert r.exit_code == 0, r.output
    rep = json.loads(r.output)
    assert list(rep["suites"]) == ["strata"] and rep["config"]["seed"] == 9


def test_empty_suite_list_passes(runner, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(dict(SMALL, suites=[])))
    r = runner.invoke(main, ["run", "--config", str(path)])
    assert r.exit_code == 0
    assert json.loads(r.output)["summary"]["instances"] == 0


@pytest.mark.parametrize("bad", [{"p": [4]}, {"p": [2]}, {"suites": ["nope"]}, {"colour": 1},
                                 {"counts": {"widgets": 3}}])
def test_config_errors_exit_two(runner, tmp_path, bad):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(dict(SMALL, **bad)))
    r = runner.invoke(main, ["run", "--config", str(path)])
    assert r.exit_code == 2


def test_bad_precision_env_exits_two(runner, small_cfg, monkeypatch):
    monkeypatch.setenv("STRATA_LAB_PRECISION", "abc")
    r = runner.invoke(main, ["run", "--config", small_cfg, "--suite", "strata"])
    assert r.exit_code == 2


def test_pinned_precision_is_reported(runner, small_cfg, monkeypatch):
    monkeypatch.setenv("STRATA_LAB_PRECISION", "40")
    r = runner.invoke(main, ["run", "--config", small_cfg, "--suite", "strata"])
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["precision"]["pinned_abs_prec"] == 40


def test_text_output(runner, small_cfg):
    r = runner.invoke(main, ["run", "--config", small_cfg, "--suite", "sr", "--text"])
    assert r.exit_code == 0
    lines = r.output.strip().splitlines()
    assert all(l.startswith("PASS") for l in lines[:-1])
    assert lines[-1].endswith("0 failed")


def _stratum(name):
    return os.path.join(CONFIGS, name)


@pytest.mark.parametrize("args", [
    ["strata", "check"], ["strata", "k0"], ["strata", "approx"], ["generic", "check"],
    ["char", "build"], ["char", "factor"], ["char", "check", "--evaluations", "10"],
    ["bridge", "verify"], ["yu", "assemble"], ["yu", "validate"],
    ["yu", "compare-theta", "--samples", "10"],
])
@pytest.mark.parametrize("stratum", ["stratum_q5_minimal.json", "stratum_q5_two_level.json"])
def test_subcommands(runner, args, stratum):
    r = runner.invoke(main, args + ["--stratum", _stratum(stratum)])
    assert r.exit_code == 0, r.output
    json.loads(r.output)


def test_strata_check_reports_equivalence(runner):
    r = runner.invoke(main, ["strata", "check", "--stratum", _stratum("stratum_q5_minimal.json")])
    rep = json.loads(r.output)
    assert rep["minimal"] and rep["simple"] and rep["minimal_iff_k0_iff_simple"]
    assert rep["k0"] == str(-rep["n"])


def test_malformed_descriptor(runner, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"m": 1}))
    r = runner.invoke(main, ["strata", "k0", "--stratum", str(path)])
    assert r.exit_code == 2


def test_generic_check_on_single_element(runner, tmp_path):
    path = tmp_path / "el.json"
    path.write_text(json.dumps({"tower": {"p": 3, "f": 2, "e": 4, "twist": "zeta"},
                                "digits": [[1, -1]]}))
    r = runner.invoke(main, ["generic", "check", "--element", str(path)])
    assert r.exit_code == 0, r.output
    rep = json.loads(r.output)
    assert rep["ge1"] and rep["minimal"] and len(rep["pairs"]) == 28
    r = runner.invoke(main, ["generic", "check", "--element", str(path), "--over", "9,9,9"])
    assert r.exit_code == 2
    r = runner.invoke(main, ["generic", "check"])
    assert r.exit_code == 2


def test_yu_accepts_a_built_character(runner, tmp_path):
    stratum = _stratum("stratum_q5_two_level.json")
    built = runner.invoke(main, ["char", "build", "--stratum", stratum, "--seed", "5"])
    theta = tmp_path / "theta.json"
    theta.write_text(built.output)
    r = runner.invoke(main, ["yu", "compare-theta", "--stratum", stratum, "--theta", str(theta),
                             "--samples", "10"])
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["ok"]
