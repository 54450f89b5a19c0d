"""Command-line interface: subcommands, exit codes, reproducible output."""

from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from monogamy.bounds import BB84_ROUND_VALUE
from monogamy.cli import dispatch
from monogamy.fixtures import game_to_json, matrix_to_json


def run(capsys, *argv) -> tuple[int, str, str]:
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_unknown_command_exits_2(capsys):
    code, _, err = run(capsys, "bogus")
    assert code == 2


def test_missing_required_option_exits_2(capsys):
    code, _, _ = run(capsys, "qkd-delta", "--n", "100")
    assert code == 2


def test_computation_error_exits_1(capsys):
    code, _, err = run(capsys, "bounds", "--game", "bb84", "--n", "2",
                       "--gamma", "0.7")
    assert code == 1
    assert "gamma" in err


def test_bounds_csv_sweep(capsys):
    code, out, _ = run(capsys, "bounds", "--game", "bb84", "--n", "1..10")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    assert rows[0]["formula"] == "bb84-parallel"
    values = [float(r["value"]) for r in rows]
    assert values[0] == pytest.approx(BB84_ROUND_VALUE, abs=1e-15)
    for n, v in enumerate(values, start=1):
        assert v == pytest.approx(BB84_ROUND_VALUE**n, rel=1e-12)


def test_bounds_imperfect_formula_selected(capsys):
    code, out, _ = run(capsys, "bounds", "--game", "bb84", "--n", "3",
                       "--gamma", "0.05", "--format", "json", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"][0]["formula"] == "imperfect-guessing"
    assert "generated_at" not in doc


def test_bounds_general_game_and_same_string(capsys):
    code, out, _ = run(capsys, "bounds", "--game", "general", "--c", "0.25",
                       "--theta-count", "3", "--q", "2", "--n", "2",
                       "--format", "json", "--deterministic")
    assert code == 0
    row = json.loads(out)["result"][0]
    assert row["formula"] == "general"
    base = (1 + 2 * 0.5) / 3  # sqrt(0.25) = 0.5
    assert row["value"] == pytest.approx(2 * base**2, rel=1e-12)

    code, out, _ = run(capsys, "bounds", "--game", "bb84", "--n", "2",
                       "--gamma", "0.1", "--same-string", "--format", "json",
                       "--deterministic")
    assert code == 0
    assert json.loads(out)["result"][0]["formula"] == "same-string"

    code, _, _ = run(capsys, "bounds", "--game", "general", "--n", "1")
    assert code == 2  # --c required


def test_qkd_delta_json(capsys):
    code, out, _ = run(capsys, "qkd-delta", "--n", "100000", "--t", "10000",
                       "--gamma", "0.005", "--epsilon", "0.005", "--s", "auto",
                       "--ell", "1000", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert doc["params"]["s"] == 7272
    assert doc["result"]["vacuous"] is True
    assert doc["result"]["sampling_term"] == pytest.approx(3.032653298563167,
                                                           rel=1e-12)


def test_qkd_keylen_sweep(capsys):
    code, out, _ = run(capsys, "qkd-keylen", "--n", "1000000..2000000..1000000",
                       "--t", "frac:0.05", "--gamma", "0.005", "--epsilon",
                       "0.012", "--s", "auto", "--delta-target", "1e-9")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2
    assert rows[0]["t"] == "50000"


def test_qkd_sim_aggregate(capsys):
    code, out, _ = run(capsys, "qkd-sim", "--n", "64", "--t", "16", "--s", "8",
                       "--ell", "8", "--gamma", "0", "--noise", "0",
                       "--trials", "200", "--seed", "5", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["aborts"] == 0
    assert doc["result"]["key_match_rate"] == 1.0
    assert doc["seed"] == 5


def test_seesaw_reaches_single_round_value(capsys):
    code, out, _ = run(capsys, "seesaw", "--game", "bb84", "--n", "1",
                       "--restarts", "20", "--seed", "7", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["value"] == pytest.approx(BB84_ROUND_VALUE, abs=1e-6)
    assert doc["result"]["upper_bound"] == pytest.approx(BB84_ROUND_VALUE,
                                                         abs=1e-12)
    strategy = doc["result"]["strategy"]
    assert strategy["kind"] == "strategy"
    assert strategy["dims"] == [2, 1, 1]


def test_posver_bound_csv(capsys):
    code, out, _ = run(capsys, "posver", "bound", "--n", "50..150..50",
                       "--rate", "0.2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["50", "100", "150"]
    assert float(rows[1]["bound"]) == pytest.approx(0.13920957175493195,
                                                    rel=1e-12)


def test_posver_simulate_json(capsys):
    code, out, _ = run(capsys, "posver", "simulate", "--n", "1", "--prover",
                       "breidbart", "--trials", "4000", "--seed", "3",
                       "--deterministic")
    assert code == 0
    doc = json.loads(out)
    rate = doc["result"]["acceptance_rate"]
    assert abs(rate - BB84_ROUND_VALUE) < 0.03
    assert doc["result"]["soundness_bound"] == pytest.approx(BB84_ROUND_VALUE,
                                                             abs=1e-15)


def test_posver_simulate_single_needs_position(capsys):
    code, _, _ = run(capsys, "posver", "simulate", "--prover", "single")
    assert code == 2


def test_ur_check_random(capsys):
    code, out, _ = run(capsys, "ur-check", "--random", "3", "--seed", "11",
                       "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["result"]) == 3
    assert all(row["satisfied"] for row in doc["result"])
    assert doc["seed"] == 11


def test_ur_check_requires_input(capsys):
    code, _, _ = run(capsys, "ur-check")
    assert code == 2


def test_fixtures_validate(tmp_path, capsys):
    good = tmp_path / "game.json"
    good.write_text(json.dumps(game_to_json(__import__("monogamy.games",
                                                       fromlist=["bb84_game"])
                                            .bb84_game())))
    code, out, _ = run(capsys, "fixtures", "validate", str(good))
    assert code == 0
    doc = json.loads(out)
    assert doc["result"][0]["ok"] is True

    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, out, err = run(capsys, "fixtures", "validate", str(good), str(bad))
    assert code == 1
    doc = json.loads(out)
    assert [row["ok"] for row in doc["result"]] == [True, False]


def test_deterministic_output_is_byte_identical(capsys):
    args = ("seesaw", "--game", "bb84", "--n", "1", "--restarts", "5",
            "--seed", "9", "--deterministic")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2

    args = ("qkd-sim", "--n", "32", "--t", "8", "--gamma", "0.01", "--noise",
            "0.02", "--trials", "100", "--seed", "13", "--deterministic")
    _, sim1, _ = run(capsys, *args)
    _, sim2, _ = run(capsys, *args)
    assert sim1 == sim2


def test_output_file_option(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "bounds", "--game", "bb84", "--n", "1..3",
                       "--output", str(target))
    assert code == 0
    assert out == ""
    rows = list(csv.DictReader(target.open()))
    assert len(rows) == 3


def test_seesaw_loads_game_fixture(tmp_path, capsys):
    from monogamy.games import bb84_game
    path = tmp_path / "game.json"
    path.write_text(json.dumps(game_to_json(bb84_game())))
    code, out, _ = run(capsys, "seesaw", "--game", str(path), "--restarts", "5",
                       "--seed", "2", "--no-include-strategy", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["value"] == pytest.approx(BB84_ROUND_VALUE, abs=1e-6)


def test_posver_simulate_scenario_fixture(tmp_path, capsys):
    from monogamy.fixtures import scenario_to_json
    from monogamy.posver import TimingScenario
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario_to_json(TimingScenario(0.0, 4.0, 1.0))))
    code, out, _ = run(capsys, "posver", "simulate", "--scenario", str(path),
                       "--n", "2", "--prover", "honest", "--trials", "50",
                       "--seed", "0", "--deterministic")
    assert code == 0
    assert json.loads(out)["result"]["acceptance_rate"] == 1.0


def test_ur_check_fixture_file(tmp_path, capsys):
    g = __import__("monogamy.games", fromlist=["bb84_game"]).bb84_game()
    doc = {
        "kind": "ur_instance",
        "dims": [2, 1, 1],
        "rho_abc": matrix_to_json(np.array([[0.5, 0.5], [0.5, 0.5]])),
        "f0": [matrix_to_json(e) for e in g.povms["0"]],
        "f1": [matrix_to_json(e) for e in g.povms["1"]],
    }
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "ur-check", str(path), "--deterministic")
    assert code == 0
    result = json.loads(out)["result"][0]
    assert result["satisfied"] is True
