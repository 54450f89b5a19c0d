"""JSON fixture round-trips and validation."""

from __future__ import annotations

import json

import numpy as np
import pytest

from monogamy.errors import DimensionError, ValidationError
from monogamy.fixtures import (game_from_json, game_to_json, load_fixture,
                               matrix_from_json, matrix_to_json,
                               scenario_from_json, scenario_to_json,
                               strategy_from_json, strategy_to_json)
from monogamy.games import bb84_game, game_power
from monogamy.posver import TimingScenario
from monogamy.seesaw import bb84_optimal_unentangled_strategy


def test_matrix_round_trip(rng):
    m = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    doc = matrix_to_json(m)
    assert doc["rows"] == 3 and doc["cols"] == 2
    assert len(doc["re"]) == 6
    np.testing.assert_allclose(matrix_from_json(doc), m, atol=0)


def test_matrix_rejects_entry_count_mismatch():
    with pytest.raises(DimensionError):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0]})


def test_matrix_rejects_malformed_document():
    with pytest.raises(ValidationError):
        matrix_from_json({"rows": 2, "cols": 2})


def test_game_round_trip():
    g = game_power(bb84_game(), 2)
    doc = game_to_json(g)
    back = game_from_json(json.loads(json.dumps(doc)))
    assert back.thetas == g.thetas
    assert back.outcomes == g.outcomes
    assert back.theta_parts == g.theta_parts
    for theta in g.thetas:
        for a, b in zip(back.povms[theta], g.povms[theta]):
            np.testing.assert_allclose(a, b, atol=0)


def test_strategy_round_trip():
    s = bb84_optimal_unentangled_strategy()
    back = strategy_from_json(json.loads(json.dumps(strategy_to_json(s))))
    assert back.dims == s.dims
    np.testing.assert_allclose(back.rho_abc, s.rho_abc, atol=0)


def test_scenario_round_trip():
    sc = TimingScenario(v0=-1.0, v1=3.0, pos=0.5)
    back = scenario_from_json(scenario_to_json(sc))
    assert back == sc


def test_load_fixture_detects_kind(tmp_path):
    path = tmp_path / "game.json"
    path.write_text(json.dumps(game_to_json(bb84_game())))
    kind, game = load_fixture(path)
    assert kind == "game"
    assert game.dim_a == 2

    bare = tmp_path / "matrix.json"
    bare.write_text(json.dumps(matrix_to_json(np.eye(2))))
    kind, mat = load_fixture(bare)
    assert kind == "matrix"
    np.testing.assert_array_equal(mat, np.eye(2))


def test_load_fixture_rejects_bad_documents(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(ValidationError):
        load_fixture(bad_json)

    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"kind": "mystery"}))
    with pytest.raises(ValidationError):
        load_fixture(unknown)

    # structurally fine but physically invalid: POVM does not sum to identity
    doc = game_to_json(bb84_game())
    doc["povms"]["0"] = [doc["povms"]["0"][0], doc["povms"]["0"][0]]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(doc))
    with pytest.raises(ValidationError):
        load_fixture(broken)
