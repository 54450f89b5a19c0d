"""JSON fixture formats for matrices, games, strategies and scenarios.

A complex matrix is stored row-major as

    {"rows": r, "cols": c, "re": [...], "im": [...]}

and the structured kinds wrap it:

    game        {"kind": "game", "dim_a", "thetas", "outcomes", "povms"}
    strategy    {"kind": "strategy", "dims", "rho_abc", "bob_povms", "charlie_povms"}
    scenario    {"kind": "scenario", "v0", "v1", "pos"}
    ur_instance {"kind": "ur_instance", "dims", "rho_abc", "f0", "f1"}

Loading funnels everything through the package constructors, so structural
validation and the physical invariants (POVM completeness, density checks)
are enforced on the way in.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import DimensionError, ValidationError
from .games import MonogamyGame, Strategy
from .posver import TimingScenario

SCHEMAS: dict[str, dict[str, str]] = {
    "matrix": {"rows": "int >= 1", "cols": "int >= 1",
               "re": "rows*cols floats, row-major", "im": "rows*cols floats, row-major"},
    "game": {"kind": "'game'", "dim_a": "int >= 1", "thetas": "[str]",
             "outcomes": "[str]", "povms": "{theta: [matrix]}"},
    "strategy": {"kind": "'strategy'", "dims": "[dA, dB, dC]", "rho_abc": "matrix",
                 "bob_povms": "{theta: [matrix]}", "charlie_povms": "{theta: [matrix]}"},
    "scenario": {"kind": "'scenario'", "v0": "float", "v1": "float", "pos": "float"},
    "ur_instance": {"kind": "'ur_instance'", "dims": "[dA, dB, dC]",
                    "rho_abc": "matrix", "f0": "[matrix]", "f1": "[matrix]"},
}


def matrix_to_json(m) -> dict[str, Any]:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got ndim={a.ndim}")
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "re": [float(v) for v in a.real.reshape(-1)],
            "im": [float(v) for v in a.imag.reshape(-1)]}


def matrix_from_json(doc: Mapping[str, Any]) -> np.ndarray:
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed matrix document: {exc}")
    if rows < 1 or cols < 1:
        raise DimensionError("matrix dimensions must be positive")
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionError(f"entry count mismatch: expected {rows * cols}, "
                             f"got re={re.size}, im={im.size}")
    return (re + 1j * im).reshape(rows, cols)


def _povms_to_json(povms) -> dict[str, list]:
    return {theta: [matrix_to_json(e) for e in elems] for theta, elems in povms.items()}


def _povms_from_json(doc) -> dict[str, list[np.ndarray]]:
    return {str(theta): [matrix_from_json(e) for e in elems]
            for theta, elems in doc.items()}


def game_to_json(game: MonogamyGame) -> dict[str, Any]:
    doc = {"kind": "game", "dim_a": game.dim_a, "thetas": list(game.thetas),
           "outcomes": list(game.outcomes), "povms": _povms_to_json(game.povms)}
    if game.theta_parts is not None:
        doc["theta_parts"] = {t: list(p) for t, p in game.theta_parts.items()}
    return doc


def game_from_json(doc: Mapping[str, Any]) -> MonogamyGame:
    parts = doc.get("theta_parts")
    try:
        return MonogamyGame(dim_a=int(doc["dim_a"]),
                            thetas=tuple(doc["thetas"]),
                            outcomes=tuple(doc["outcomes"]),
                            povms=_povms_from_json(doc["povms"]),
                            theta_parts={t: tuple(p) for t, p in parts.items()}
                            if parts else None)
    except KeyError as exc:
        raise ValidationError(f"game document missing field {exc}")


def strategy_to_json(strategy: Strategy) -> dict[str, Any]:
    return {"kind": "strategy", "dims": list(strategy.dims),
            "rho_abc": matrix_to_json(strategy.rho_abc),
            "bob_povms": _povms_to_json(strategy.bob_povms),
            "charlie_povms": _povms_to_json(strategy.charlie_povms)}


def strategy_from_json(doc: Mapping[str, Any]) -> Strategy:
    try:
        return Strategy(rho_abc=matrix_from_json(doc["rho_abc"]),
                        dims=tuple(int(d) for d in doc["dims"]),
                        bob_povms=_povms_from_json(doc["bob_povms"]),
                        charlie_povms=_povms_from_json(doc["charlie_povms"]))
    except KeyError as exc:
        raise ValidationError(f"strategy document missing field {exc}")


def scenario_to_json(scenario: TimingScenario) -> dict[str, Any]:
    return {"kind": "scenario", "v0": scenario.v0, "v1": scenario.v1,
            "pos": scenario.pos}


def scenario_from_json(doc: Mapping[str, Any]) -> TimingScenario:
    try:
        return TimingScenario(v0=float(doc["v0"]), v1=float(doc["v1"]),
                              pos=float(doc["pos"]))
    except KeyError as exc:
        raise ValidationError(f"scenario document missing field {exc}")


def ur_instance_from_json(doc: Mapping[str, Any]):
    """(rho_abc, dims, f0, f1) of an uncertainty-relation check instance."""
    try:
        rho = matrix_from_json(doc["rho_abc"])
        dims = tuple(int(d) for d in doc["dims"])
        f0 = [matrix_from_json(e) for e in doc["f0"]]
        f1 = [matrix_from_json(e) for e in doc["f1"]]
    except KeyError as exc:
        raise ValidationError(f"ur_instance document missing field {exc}")
    return rho, dims, f0, f1


_LOADERS = {
    "game": game_from_json,
    "strategy": strategy_from_json,
    "scenario": scenario_from_json,
    "ur_instance": ur_instance_from_json,
    "matrix": matrix_from_json,
}


def load_fixture(path) -> tuple[str, Any]:
    """Parse a fixture file and build the object it describes.

    The kind comes from the "kind" field; a bare matrix document is accepted
    without one.  Raises ValidationError (or a subclass of ValueError) when
    the document is malformed or violates an invariant.
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})")
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected a JSON object at top level")
    kind = doc.get("kind", "matrix" if "rows" in doc else None)
    if kind not in _LOADERS:
        raise ValidationError(f"{path}: unknown fixture kind {kind!r}; expected "
                              f"one of {sorted(_LOADERS)}")
    return kind, _LOADERS[kind](doc)
