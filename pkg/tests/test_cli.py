import json
import math

import numpy as np
import pytest

from guesswork import serialize
from guesswork.cli import main
from guesswork.costs import identity_cost
from guesswork.engine import min_guesswork_qubit
from guesswork.ensembles import generate_polygon_antiprism, generate_sic, validate


def run_cli(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def write_ensemble(path, ensemble):
    path.write_text(serialize.dumps(serialize.ensemble_to_json(ensemble)) + "\n")
    return str(path)


def test_generate_sic(tmp_path, capsys):
    out = tmp_path / "sic.json"
    assert run_cli(["generate", "--family", "sic", "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "saturates bound" in stdout
    doc = json.loads(out.read_text())
    assert doc["dim"] == 2
    assert len(doc["states"]) == 4
    rebuilt = serialize.ensemble_from_json(doc)
    for a, b in zip(rebuilt.states, generate_sic().states):
        np.testing.assert_array_equal(a, b)


def test_generate_mub_equivalent_antiprism(tmp_path):
    out = tmp_path / "mub6.json"
    code = run_cli(
        [
            "generate",
            "--family",
            "polygon_antiprism",
            "--m",
            "6",
            "--h",
            "0.70710678",
            "--lambda",
            "pure",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    e = serialize.ensemble_from_json(json.loads(out.read_text()))
    assert e.size == 6 and e.dim == 2


def test_generate_rejects_odd_m_with_height(tmp_path, capsys):
    out = tmp_path / "bad.json"
    code = run_cli(
        ["generate", "--family", "polygon_antiprism", "--m", "5", "--h", "0.1", "--out", str(out)]
    )
    assert code == 2
    assert "bound is 0 for odd M" in capsys.readouterr().err
    assert not out.exists()


def test_generate_random_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["generate", "--family", "random", "--m", "3", "--seed", "9"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_trine_brute(tmp_path, capsys):
    ensemble_path = write_ensemble(tmp_path / "trine.json", generate_polygon_antiprism(3))
    out = tmp_path / "report.json"
    code = run_cli(
        ["solve", "--ensemble", ensemble_path, "--cost", "identity", "--method", "brute", "--out", str(out)]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert "brute_force" in stdout
    doc = json.loads(out.read_text())
    assert doc["value"] == pytest.approx(2 - 1 / math.sqrt(3), abs=1e-9)
    assert doc["method"] == "brute_force"
    assert doc["condition_verified"] is True


def test_solve_round_trip_matches_library(tmp_path):
    e = generate_polygon_antiprism(4, h=0.3)
    ensemble_path = write_ensemble(tmp_path / "anti.json", e)
    out = tmp_path / "report.json"
    assert run_cli(["solve", "--ensemble", ensemble_path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    report = min_guesswork_qubit(e, identity_cost(4))
    # byte-exact float round trip between CLI report and the library call
    assert doc["value"] == report.value
    assert tuple(doc["numbering"]) == report.optimal_numbering


def test_solve_accepts_bloch_form_ensemble(tmp_path):
    doc = {
        "dim": 2,
        "bloch": [
            {"trace": 0.5, "v": [0.0, 0.0, 0.5]},
            {"trace": 0.5, "v": [0.0, 0.0, -0.5]},
        ],
    }
    path = tmp_path / "pair.json"
    path.write_text(serialize.dumps(doc))
    out = tmp_path / "report.json"
    assert run_cli(["solve", "--ensemble", str(path), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["value"] == pytest.approx(1.0, abs=1e-10)


def test_solve_mub_auto_uses_benevolent(tmp_path):
    ensemble_path = write_ensemble(tmp_path / "mub.json", generate_polygon_antiprism(6, h=1 / math.sqrt(2)))
    out = tmp_path / "report.json"
    assert run_cli(["solve", "--ensemble", ensemble_path, "--method", "auto", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["method"] == "benevolent"
    assert doc["value"] == pytest.approx(3.5 - math.sqrt(35) / 6, abs=1e-9)


def test_solve_rejects_unbalanced_cost(tmp_path, capsys):
    ensemble_path = write_ensemble(tmp_path / "trine.json", generate_polygon_antiprism(3))
    cost_path = tmp_path / "cost.json"
    cost_path.write_text('{"values": [0, 1, 3]}')
    code = run_cli(["solve", "--ensemble", ensemble_path, "--cost", str(cost_path)])
    assert code == 2
    assert "not balanced" in capsys.readouterr().err


def test_solve_forced_qubit_method_requires_uniform_prior(tmp_path, capsys):
    skew = validate([np.diag([0.6, 0.0]), np.diag([0.0, 0.4])])
    ensemble_path = write_ensemble(tmp_path / "skew.json", skew)
    code = run_cli(["solve", "--ensemble", ensemble_path, "--method", "brute"])
    assert code == 2
    assert "uniform prior" in capsys.readouterr().err


def test_solve_general_dim3_verified(tmp_path):
    e = validate([np.diag([0.5, 0.0, 0.0]), np.diag([0.0, 0.5, 0.0])])
    ensemble_path = write_ensemble(tmp_path / "pair3.json", e)
    out = tmp_path / "report.json"
    assert run_cli(["solve", "--ensemble", ensemble_path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["value"] == pytest.approx(1.0, abs=1e-10)
    assert doc["method"] == "condition_check_only"


def test_solve_unverified_bound_exits_3(tmp_path, capsys):
    triple = validate(
        [np.diag([1 / 3, 0, 0]), np.diag([0, 1 / 3, 0]), np.diag([0, 0, 1 / 3])]
    )
    ensemble_path = write_ensemble(tmp_path / "triple.json", triple)
    out = tmp_path / "bound.json"
    code = run_cli(["solve", "--ensemble", ensemble_path, "--out", str(out)])
    assert code == 3
    assert "unverified upper bound" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    assert doc["condition_verified"] is False
    assert doc["value"] == pytest.approx(2 - 2 / 3, abs=1e-10)
    assert doc["measurement"]["elements"] == []


def test_solve_missing_file_is_input_error(tmp_path, capsys):
    assert run_cli(["solve", "--ensemble", str(tmp_path / "nope.json")]) == 2


def test_factorial_cap_env(tmp_path, capsys, monkeypatch):
    e = generate_polygon_antiprism(4, h=0.2)  # benevolent, so auto still works
    ensemble_path = write_ensemble(tmp_path / "anti.json", e)
    monkeypatch.setenv("GUESSWORK_FACTORIAL_CAP", "3")
    code = run_cli(["solve", "--ensemble", ensemble_path, "--method", "brute"])
    assert code == 2
    assert "cap" in capsys.readouterr().err
    assert run_cli(["solve", "--ensemble", ensemble_path, "--method", "auto"]) == 0
    stdout = capsys.readouterr().out
    assert "benevolent" in stdout
    assert "condition verified   no" in stdout


def test_auto_above_cap_degrades_to_unverified_bound(tmp_path, capsys, monkeypatch):
    from guesswork.ensembles import generate_random_uniform_prior

    e = generate_random_uniform_prior(4, 2, seed=99)  # no benevolent structure
    ensemble_path = write_ensemble(tmp_path / "rand.json", e)
    monkeypatch.setenv("GUESSWORK_FACTORIAL_CAP", "3")
    out = tmp_path / "bound.json"
    code = run_cli(["solve", "--ensemble", ensemble_path, "--out", str(out)])
    assert code == 3
    assert "unverified upper bound" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    assert doc["condition_verified"] is False
    # the heuristic bound can only overestimate the true minimum
    assert doc["value"] >= min_guesswork_qubit(e, identity_cost(4)).value - 1e-12


def test_check_sic(tmp_path, capsys):
    ensemble_path = write_ensemble(tmp_path / "sic.json", generate_sic())
    assert run_cli(["check", "--ensemble", ensemble_path]) == 0
    stdout = capsys.readouterr().out
    assert "uniform prior        yes" in stdout
    assert "constant overlap     yes" in stdout
    assert "benevolent           yes (canonical labeling)" in stdout
    assert "h-bound" in stdout and "<= bound" in stdout


def test_check_above_bound_antiprism(tmp_path, capsys):
    e = generate_polygon_antiprism(4, h=0.76)
    ensemble_path = write_ensemble(tmp_path / "above.json", e)
    assert run_cli(["check", "--ensemble", ensemble_path]) == 0
    stdout = capsys.readouterr().out
    assert "property1_ok         no" in stdout
    assert "> bound" in stdout


def test_check_dim3_skips_bloch(tmp_path, capsys):
    e = validate([np.diag([0.5, 0.0, 0.0]), np.diag([0.0, 0.5, 0.0])])
    ensemble_path = write_ensemble(tmp_path / "pair3.json", e)
    assert run_cli(["check", "--ensemble", ensemble_path]) == 0
    assert "bloch checks skipped (dim = 3)" in capsys.readouterr().out


def test_check_invalid_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    two = validate([np.diag([0.5, 0.0]), np.diag([0.0, 0.5])])
    doc = serialize.ensemble_to_json(two)
    doc["states"][0][0][0] = [1.0, 0.0]  # total trace becomes 1.5
    bad.write_text(serialize.dumps(doc))
    assert run_cli(["check", "--ensemble", str(bad)]) == 2
    assert "total trace" in capsys.readouterr().err
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert run_cli(["check", "--ensemble", str(garbled)]) == 2


def test_simulate_trine(tmp_path, capsys):
    ensemble_path = write_ensemble(tmp_path / "trine.json", generate_polygon_antiprism(3))
    out = tmp_path / "sim.json"
    code = run_cli(
        [
            "simulate",
            "--ensemble",
            ensemble_path,
            "--samples",
            "50000",
            "--seed",
            "42",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert abs(doc["z"]) <= 4
    assert doc["samples"] == 50000
    assert doc["analytic"] == pytest.approx(2 - 1 / math.sqrt(3), abs=1e-9)


def test_simulate_single_sample(tmp_path, capsys):
    ensemble_path = write_ensemble(tmp_path / "trine.json", generate_polygon_antiprism(3))
    code = run_cli(["simulate", "--ensemble", ensemble_path, "--samples", "1", "--seed", "5"])
    assert code == 0
    assert "unavailable" in capsys.readouterr().out


def test_simulate_deterministic_bytes(tmp_path):
    ensemble_path = write_ensemble(tmp_path / "sic.json", generate_sic())
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["simulate", "--ensemble", ensemble_path, "--samples", "20000", "--seed", "7"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_unverifiable_exits_3(tmp_path, capsys):
    triple = validate(
        [np.diag([1 / 3, 0, 0]), np.diag([0, 1 / 3, 0]), np.diag([0, 0, 1 / 3])]
    )
    ensemble_path = write_ensemble(tmp_path / "triple.json", triple)
    assert run_cli(["simulate", "--ensemble", ensemble_path, "--samples", "100"]) == 3


def test_tol_must_be_positive(tmp_path, capsys):
    ensemble_path = write_ensemble(tmp_path / "sic.json", generate_sic())
    assert run_cli(["solve", "--ensemble", ensemble_path, "--tol", "0"]) == 2


def test_usage_error_exits_2():
    assert run_cli(["generate", "--family", "unknown", "--out", "x.json"]) == 2
