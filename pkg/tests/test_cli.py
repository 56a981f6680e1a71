import json
import math
import subprocess
import sys

import numpy as np
import pytest

import thermoflow as tf


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "thermoflow", *args],
        capture_output=True, text=True, cwd=cwd,
    )


def write_json(path, payload):
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def entropy_ctx(tmp_path):
    return write_json(tmp_path / "entropy.json",
                      {"representation": "entropy", "intensive": []})


@pytest.fixture
def pure2(tmp_path):
    return write_json(tmp_path / "pure2.json", {
        "representation": "entropy", "intensive": [],
        "operators": [], "r": [1.0, 0.0],
    })


@pytest.fixture
def hot_state(tmp_path):
    return write_json(tmp_path / "hot.json", {
        "representation": "energy", "beta": 1.0, "intensive": [],
        "operators": [{"label": "H", "eigenvalues": [0.0, math.log(2)]}],
        "r": [1.0, 0.0],
    })


def test_lorenz_pure_bit_csv(pure2, entropy_ctx):
    result = run_cli("lorenz", pure2, "--ctx", entropy_ctx)
    assert result.returncode == 0
    assert result.stdout == "x,y\n0,0\n1,1\n2,1\n"


def test_gibbs_output_round_trips(tmp_path, hot_state):
    result = run_cli("gibbs", hot_state)
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["partition_function"] == pytest.approx(1.5, abs=1e-12)
    np.testing.assert_allclose(payload["r"], [2 / 3, 1 / 3], atol=1e-12)
    # the emitted descriptor re-ingests as a valid state file
    gibbs_file = write_json(tmp_path / "gibbs.json", payload)
    again = run_cli("gibbs", gibbs_file)
    assert again.returncode == 0
    assert json.loads(again.stdout)["r"] == payload["r"]


def test_convert_exit_codes(tmp_path, hot_state):
    gibbs_file = write_json(tmp_path / "g.json", json.loads(run_cli("gibbs", hot_state).stdout))
    forward = run_cli("convert", hot_state, gibbs_file)
    assert forward.returncode == 0
    assert forward.stdout.strip() == "convertible"
    backward = run_cli("convert", gibbs_file, hot_state)
    assert backward.returncode == 1
    assert backward.stdout.strip() == "not convertible"


def test_convert_witness_dump(tmp_path, hot_state):
    gibbs_file = write_json(tmp_path / "g.json", json.loads(run_cli("gibbs", hot_state).stdout))
    witness_file = tmp_path / "witness.json"
    result = run_cli("convert", hot_state, gibbs_file, "--witness", str(witness_file))
    assert result.returncode == 0
    payload = json.loads(witness_file.read_text())
    m = np.array(payload["entries"]).reshape(payload["rows"], payload["cols"])
    np.testing.assert_allclose(m.sum(axis=0), np.ones(payload["cols"]), atol=1e-9)
    assert m.min() >= -1e-9


def test_work_on_equilibrium_input(tmp_path, hot_state):
    gibbs_file = write_json(tmp_path / "g.json", json.loads(run_cli("gibbs", hot_state).stdout))
    result = run_cli("work", gibbs_file, "--epsilon", "0")
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["w_gain"] == 0.0
    assert report["w_cost_lower"] is None and report["w_cost_upper"] is None


def test_work_report_fields(hot_state):
    result = run_cli("work", hot_state, "--epsilon", "0.1")
    report = json.loads(result.stdout)
    assert report["epsilon"] == 0.1
    assert report["w_cost_lower"] <= report["w_cost_upper"]
    assert report["w_gain"] >= math.log(1.5) - 1e-12


def test_rate_scalar(tmp_path, entropy_ctx, pure2):
    pure4 = write_json(tmp_path / "pure4.json", {
        "representation": "entropy", "intensive": [],
        "operators": [], "r": [1.0, 0.0, 0.0, 0.0],
    })
    result = run_cli("rate", pure2, pure4, "--ctx", entropy_ctx)
    assert result.returncode == 0
    assert result.stdout == "0.5\n"


def test_aep_csv(hot_state):
    result = run_cli("aep", hot_state, "--epsilon", "0.1", "--n", "1,4,16")
    assert result.returncode == 0
    lines = result.stdout.strip().split("\n")
    assert lines[0] == "n,per_copy_dh,limit"
    assert len(lines) == 4
    assert lines[1].split(",")[0] == "1"


def test_byte_identical_reruns(tmp_path, hot_state, pure2, entropy_ctx):
    for args in (("gibbs", hot_state), ("lorenz", pure2, "--ctx", entropy_ctx),
                 ("work", hot_state, "--epsilon", "0.25"),
                 ("aep", hot_state, "--epsilon", "0.1", "--n", "1,2,4")):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout


def test_malformed_json_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    for command in (("gibbs", str(bad)), ("validate", str(bad)),
                    ("work", str(bad), "--epsilon", "0")):
        result = run_cli(*command)
        assert result.returncode == 2
        assert result.stderr.startswith("error:")


def test_missing_file_exits_2(tmp_path):
    result = run_cli("gibbs", str(tmp_path / "nope.json"))
    assert result.returncode == 2


def test_validate_reports(tmp_path):
    good = write_json(tmp_path / "good.json", {
        "representation": "entropy", "intensive": [], "operators": [],
        "r": [1.0, 0.0],
        "nonstate": [{"label": "N", "eigenvalues": [5.0, 7.0]}],
    })
    result = run_cli("validate", good)
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["normalized"] and report["fixed_eigensubspace"]

    split = write_json(tmp_path / "split.json", {
        "representation": "entropy", "intensive": [], "operators": [],
        "r": [0.5, 0.5],
        "nonstate": [{"label": "N", "eigenvalues": [5.0, 7.0]}],
    })
    result = run_cli("validate", split)
    assert result.returncode == 1
    assert not json.loads(result.stdout)["fixed_eigensubspace"]

    lopsided = write_json(tmp_path / "lopsided.json", {
        "representation": "entropy", "intensive": [], "operators": [],
        "r": [0.5, 0.4],
    })
    result = run_cli("validate", lopsided)
    assert result.returncode == 1
    assert not json.loads(result.stdout)["normalized"]


def test_inline_context_flags(tmp_path):
    state = write_json(tmp_path / "bare.json", {
        "representation": "energy", "beta": 2.0, "intensive": [],
        "operators": [{"label": "H", "eigenvalues": [0.0, 1.0]}],
        "r": [0.9, 0.1],
    })
    # inline --beta overrides the embedded beta
    inline = run_cli("gibbs", state, "--beta", "1.0")
    assert inline.returncode == 0
    embedded = run_cli("gibbs", state)
    assert json.loads(inline.stdout)["beta"] == 1.0
    assert json.loads(embedded.stdout)["beta"] == 2.0
    assert inline.stdout != embedded.stdout


def test_inline_mu_flag(tmp_path):
    state = write_json(tmp_path / "grand.json", {
        "representation": "energy", "beta": 1.0,
        "intensive": [{"label": "mu", "value": 0.0}],
        "operators": [{"label": "H", "eigenvalues": [0.0, 1.0]},
                      {"label": "N", "eigenvalues": [0.0, 1.0]}],
        "r": [0.5, 0.5],
    })
    result = run_cli("gibbs", state, "--beta", "1.0", "--mu", "0.5")
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["intensive"] == [{"label": "mu", "value": 0.5}]


def test_lorenz_json_format(pure2, entropy_ctx):
    result = run_cli("lorenz", pure2, "--ctx", entropy_ctx, "--format", "json")
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["width"] == 2.0
    assert payload["points"] == [[0.0, 0.0], [1.0, 1.0], [2.0, 1.0]]


def test_ctx_file_beats_inline_flags_with_warning(tmp_path, hot_state):
    ctx_file = write_json(tmp_path / "beta3.json", {
        "representation": "energy", "beta": 3.0, "intensive": [],
    })
    result = run_cli("gibbs", hot_state, "--ctx", ctx_file, "--beta", "1.0")
    assert result.returncode == 0
    assert json.loads(result.stdout)["beta"] == 3.0
    assert "overrides" in result.stderr


def test_conflicting_embedded_contexts_need_ctx(tmp_path, hot_state):
    other = write_json(tmp_path / "other.json", {
        "representation": "energy", "beta": 2.5, "intensive": [],
        "operators": [{"label": "H", "eigenvalues": [0.0, math.log(2)]}],
        "r": [0.5, 0.5],
    })
    result = run_cli("convert", hot_state, other)
    assert result.returncode == 2
    fixed = run_cli("convert", hot_state, other, "--beta", "1.0")
    assert fixed.returncode in (0, 1)
