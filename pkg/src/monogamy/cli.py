"""Command-line entry point.

One executable, one subcommand per calculator or simulator:

    bounds      closed-form game-value bounds over a sweep of round counts
    seesaw      strategy search by alternating optimization
    qkd-delta   finite-key security failure bound for one parameter set
    qkd-keylen  invert the bound for the key length over a sweep of n
    qkd-sim     Monte-Carlo runs of the key-distribution protocol
    posver      position-verification bounds and timing simulation
    ur-check    two-observer uncertainty-relation check
    fixtures    validate JSON fixture files

Stochastic commands record their seed in the output; identical inputs give
byte-identical output (`--deterministic` suppresses the one timestamp field).
Computation and validation failures exit 1, usage errors exit 2.  The
environment variable MONOGAMY_THREADS caps parallel workers inside module
operations.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from typing import Sequence

import click

from . import bounds as bounds_mod
from . import fixtures as fixtures_mod
from . import posver as posver_mod
from . import qkd as qkd_mod
from . import uncertainty as ur_mod
from .errors import ValidationError
from .games import bb84_game, game_power, overlap
from .rand import random_density, random_povm, rng_for
from .seesaw import SeesawConfig, seesaw as run_seesaw

PROG = "monogamy"


def _parse_range(text: str) -> list[int]:
    """'7' -> [7]; '1..10' -> 1..10; '10..100..10' -> arithmetic sweep."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
            return list(range(a, b + 1))
        if len(parts) == 3:
            a, b, step = int(parts[0]), int(parts[1]), int(parts[2])
            return list(range(a, b + 1, step))
    except ValueError:
        pass
    raise click.UsageError(f"cannot parse range {text!r}; use N, A..B or A..B..STEP")


def _write_text(text: str, output: str | None) -> None:
    if output is None or output == "-":
        click.echo(text, nl=not text.endswith("\n"))
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _emit_json(command: str, params: dict, result, output: str | None,
               deterministic: bool, seed: int | None = None) -> None:
    doc = {"command": command, "params": params, "result": result}
    if seed is not None:
        doc["seed"] = seed
    if not deterministic:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    _write_text(json.dumps(doc, indent=2, sort_keys=True), output)


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence], output: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    _write_text(buf.getvalue(), output)


def _load_game(name: str):
    if name == "bb84":
        return bb84_game()
    kind, obj = fixtures_mod.load_fixture(name)
    if kind != "game":
        raise ValidationError(f"{name}: expected a game fixture, found {kind!r}")
    return obj


@click.group()
def cli() -> None:
    """Monogamy-game calculators and simulators."""


# ---------------------------------------------------------------------------


@cli.command("bounds")
@click.option("--game", default="bb84", show_default=True,
              help="'bb84' or 'general' (general requires --c).")
@click.option("--c", "c_value", type=float, default=None,
              help="Measurement overlap for a general game.")
@click.option("--theta-count", type=int, default=2, show_default=True)
@click.option("--q", "q_cardinality", type=int, default=1, show_default=True,
              help="Cardinality of the allowed displacement set.")
@click.option("--n", "n_range", default="1", show_default=True,
              help="Round count: N, A..B or A..B..STEP.")
@click.option("--gamma", type=float, default=None,
              help="Error fraction for the first guesser (imperfect guessing).")
@click.option("--gamma-prime", type=float, default=None,
              help="Error fraction for the second guesser.")
@click.option("--same-string", is_flag=True,
              help="Require both guessers to produce the same string.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv",
              show_default=True)
@click.option("--output", default=None, help="Output path (default stdout).")
@click.option("--deterministic", is_flag=True, help="Suppress the timestamp field.")
def bounds_cmd(game, c_value, theta_count, q_cardinality, n_range, gamma,
               gamma_prime, same_string, fmt, output, deterministic):
    """Closed-form upper bounds on the n-round winning probability."""
    if game == "bb84":
        c_value, theta_count = 0.5, 2
    elif game == "general":
        if c_value is None:
            raise click.UsageError("--c is required for --game general")
    else:
        raise click.UsageError(f"unknown game {game!r}; use 'bb84' or 'general'")
    reports = []
    for n in _parse_range(n_range):
        inputs = {"n": n, "c": c_value, "theta_count": theta_count,
                  "q": q_cardinality, "gamma": gamma, "gamma_prime": gamma_prime}
        if same_string:
            if gamma is None:
                raise click.UsageError("--same-string requires --gamma")
            value = bounds_mod.same_string_bound(c_value, theta_count, n, gamma)
            formula = "same-string"
        elif gamma is not None or gamma_prime is not None:
            value = bounds_mod.imperfect_guessing_bound(
                c_value, theta_count, n, gamma or 0.0, gamma_prime or 0.0)
            formula = "imperfect-guessing"
        elif game == "bb84" and q_cardinality == 1:
            value = bounds_mod.bb84_parallel_value(n)
            formula = "bb84-parallel"
        else:
            value = bounds_mod.general_upper_bound(c_value, theta_count,
                                                   q_cardinality, n)
            formula = "general"
        reports.append(bounds_mod.BoundReport(value=value, formula=formula,
                                              inputs=inputs))
    if fmt == "json":
        _emit_json("bounds", {"game": game, "n": n_range},
                   [r.to_dict() for r in reports], output, deterministic)
    else:
        header = ["n", "value", "formula", "vacuous", "c", "theta_count", "q",
                  "gamma", "gamma_prime"]
        rows = [[r.inputs["n"], repr(r.value), r.formula, r.vacuous, r.inputs["c"],
                 r.inputs["theta_count"], r.inputs["q"],
                 r.inputs["gamma"], r.inputs["gamma_prime"]] for r in reports]
        _emit_csv(header, rows, output)


# ---------------------------------------------------------------------------


@cli.command("seesaw")
@click.option("--game", default="bb84", show_default=True,
              help="'bb84' or the path of a game fixture.")
@click.option("--n", type=int, default=1, show_default=True,
              help="Parallel repetitions of the game.")
@click.option("--bob-dim", type=int, default=1, show_default=True)
@click.option("--charlie-dim", type=int, default=1, show_default=True)
@click.option("--restarts", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--max-iters", type=int, default=200, show_default=True)
@click.option("--include-strategy/--no-include-strategy", default=True,
              show_default=True, help="Embed the winning strategy as matrix JSON.")
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def seesaw_cmd(game, n, bob_dim, charlie_dim, restarts, seed, tol, max_iters,
               include_strategy, output, deterministic):
    """Search for a high-value strategy; the value is a certified lower bound."""
    base = _load_game(game)
    played = game_power(base, n) if n > 1 else base
    cfg = SeesawConfig(max_iters=max_iters, tol=tol, seed=seed,
                       bob_dim=bob_dim, charlie_dim=charlie_dim,
                       restarts=restarts)
    result = run_seesaw(played, cfg)
    payload = result.to_dict()
    if len(base.thetas) >= 2:
        c = overlap(base)
        payload["upper_bound"] = bounds_mod.general_upper_bound(
            c, len(base.thetas), 1, n)
    if include_strategy:
        payload["strategy"] = fixtures_mod.strategy_to_json(result.strategy)
    _emit_json("seesaw", {"game": game, "n": n, "bob_dim": bob_dim,
                          "charlie_dim": charlie_dim, "restarts": restarts,
                          "tol": tol, "max_iters": max_iters},
               payload, output, deterministic, seed=seed)


# ---------------------------------------------------------------------------


def _resolve_syndrome(s_text: str, n: int, t: int, gamma: float, epsilon: float) -> int:
    if s_text == "auto":
        return qkd_mod.suggested_syndrome_length(n, t, gamma, epsilon)
    try:
        return int(s_text)
    except ValueError:
        raise click.UsageError(f"--s must be an integer or 'auto', got {s_text!r}")


@cli.command("qkd-delta")
@click.option("--n", type=int, required=True, help="Rounds exchanged.")
@click.option("--t", type=int, required=True, help="Sampled rounds.")
@click.option("--gamma", type=float, required=True, help="Tolerated error rate.")
@click.option("--epsilon", type=float, required=True, help="Sampling slack.")
@click.option("--s", "s_text", default="auto", show_default=True,
              help="Syndrome bits, or 'auto' for ceil((n-t) h(gamma+epsilon)).")
@click.option("--ell", type=int, required=True, help="Key length in bits.")
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def qkd_delta_cmd(n, t, gamma, epsilon, s_text, ell, output, deterministic):
    """Finite-key security failure bound for one parameter set."""
    s = _resolve_syndrome(s_text, n, t, gamma, epsilon)
    params = qkd_mod.QkdParams(n=n, t=t, s=s, ell=ell, gamma=gamma, epsilon=epsilon)
    report = qkd_mod.security_delta(params)
    _emit_json("qkd-delta",
               {"n": n, "t": t, "s": s, "ell": ell, "gamma": gamma,
                "epsilon": epsilon},
               report.to_dict(), output, deterministic)


@cli.command("qkd-keylen")
@click.option("--n", "n_range", required=True, help="Rounds: N, A..B or A..B..STEP.")
@click.option("--t", "t_text", required=True,
              help="Sampled rounds: an integer, 'frac:F' for ceil(F n), or "
                   "'pow:P' for ceil(n^P).")
@click.option("--gamma", type=float, required=True)
@click.option("--epsilon", type=float, required=True)
@click.option("--s", "s_text", default="auto", show_default=True)
@click.option("--delta-target", type=float, required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv",
              show_default=True)
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def qkd_keylen_cmd(n_range, t_text, gamma, epsilon, s_text, delta_target, fmt,
                   output, deterministic):
    """Maximal key length within a failure-bound target, swept over n."""
    def t_for(n: int) -> int:
        if t_text.startswith("frac:"):
            return int(math.ceil(float(t_text[5:]) * n))
        if t_text.startswith("pow:"):
            return int(math.ceil(n ** float(t_text[4:])))
        try:
            return int(t_text)
        except ValueError:
            raise click.UsageError(f"cannot parse --t {t_text!r}")

    rows = []
    for n in _parse_range(n_range):
        t = t_for(n)
        s = _resolve_syndrome(s_text, n, t, gamma, epsilon)
        rep = qkd_mod.max_key_length(n, t, s, gamma, epsilon, delta_target)
        rows.append({"n": n, "t": t, "s": s, "gamma": gamma, "epsilon": epsilon,
                     "delta_target": delta_target, **rep.to_dict(),
                     "rate": rep.ell / n if rep.feasible else None})
    if fmt == "json":
        _emit_json("qkd-keylen", {"n": n_range, "t": t_text, "s": s_text,
                                  "gamma": gamma, "epsilon": epsilon,
                                  "delta_target": delta_target},
                   rows, output, deterministic)
    else:
        header = ["n", "t", "s", "gamma", "epsilon", "delta_target", "feasible",
                  "ell", "rate", "delta", "note"]
        _emit_csv(header, [[r[h] if h != "delta" else repr(r[h]) for h in header]
                           for r in rows], output)


@cli.command("qkd-sim")
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--s", type=int, default=0, show_default=True)
@click.option("--ell", type=int, default=0, show_default=True)
@click.option("--gamma", type=float, required=True)
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--noise", type=float, default=0.0, show_default=True,
              help="Flip probability of the classical device model.")
@click.option("--device", type=click.Choice(["honest", "epr"]), default="honest",
              show_default=True, help="'epr' runs the exact quantum device (n <= 5).")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def qkd_sim_cmd(n, t, s, ell, gamma, epsilon, noise, device, trials, seed,
                output, deterministic):
    """Monte-Carlo protocol runs: abort rate, key agreement, sampling statistics."""
    params = qkd_mod.QkdParams(n=n, t=t, s=s, ell=ell, gamma=gamma, epsilon=epsilon)
    dev = qkd_mod.epr_device(n) if device == "epr" else None
    agg = qkd_mod.run_eqkd_trials(params, noise, trials, seed=seed, device=dev)
    _emit_json("qkd-sim",
               {"n": n, "t": t, "s": s, "ell": ell, "gamma": gamma,
                "epsilon": epsilon, "noise": noise, "device": device,
                "trials": trials},
               agg, output, deterministic, seed=seed)


# ---------------------------------------------------------------------------


@cli.group("posver")
def posver_group() -> None:
    """Position-verification soundness bounds and timing simulation."""


@posver_group.command("bound")
@click.option("--n", "n_range", default="1", show_default=True)
@click.option("--d", type=int, default=1, show_default=True,
              help="Dimension of the adversaries' pre-shared state.")
@click.option("--rate", type=float, default=None,
              help="Entanglement rate: overrides --d with d = 2^ceil(rate n).")
@click.option("--gamma", type=float, default=None,
              help="Allowed error fraction (noise-tolerant variant).")
@click.option("--gamma-prime", type=float, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv",
              show_default=True)
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def posver_bound_cmd(n_range, d, rate, gamma, gamma_prime, fmt, output,
                     deterministic):
    """Soundness bounds over a sweep of qubit counts."""
    rows = []
    for n in _parse_range(n_range):
        dim = 2 ** math.ceil(rate * n) if rate is not None else d
        value = posver_mod.entangled_soundness_bound(n, dim)
        row = {"n": n, "d": dim, "bound": value, "vacuous": value >= 1.0}
        if gamma is not None or gamma_prime is not None:
            row["noisy_bound"] = posver_mod.noisy_soundness_bound(
                n, gamma or 0.0, gamma_prime or 0.0)
        rows.append(row)
    if fmt == "json":
        _emit_json("posver-bound",
                   {"n": n_range, "d": d, "rate": rate, "gamma": gamma,
                    "gamma_prime": gamma_prime,
                    "max_entanglement_rate": posver_mod.max_entanglement_rate()},
                   rows, output, deterministic)
    else:
        header = ["n", "d", "bound", "vacuous"]
        if rows and "noisy_bound" in rows[0]:
            header.append("noisy_bound")
        _emit_csv(header, [[repr(r[h]) if h in ("bound", "noisy_bound") else r[h]
                            for h in header] for r in rows], output)


@posver_group.command("simulate")
@click.option("--scenario", "scenario_path", default=None,
              help="Scenario fixture path; defaults to verifiers at 0 and 2, "
                   "claimed position 1.")
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--prover", type=click.Choice(["honest", "breidbart", "single"]),
              default="breidbart", show_default=True)
@click.option("--position", type=float, default=None,
              help="Adversary position for --prover single.")
@click.option("--trials", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def posver_simulate_cmd(scenario_path, n, prover, position, trials, seed, output,
                        deterministic):
    """Monte-Carlo acceptance statistics for a prover model."""
    if scenario_path is None:
        scenario = posver_mod.TimingScenario(v0=0.0, v1=2.0, pos=1.0)
    else:
        kind, scenario = fixtures_mod.load_fixture(scenario_path)
        if kind != "scenario":
            raise ValidationError(f"{scenario_path}: expected a scenario fixture")
    if prover == "honest":
        model = posver_mod.HonestProver()
    elif prover == "breidbart":
        model = posver_mod.BreidbartPair()
    else:
        if position is None:
            raise click.UsageError("--prover single requires --position")
        model = posver_mod.SingleAdversary(position)
    agg = posver_mod.simulate_pv_rounds(scenario, n, model, trials, seed=seed)
    _emit_json("posver-simulate",
               {"scenario": scenario_path or "default", "n": n, "prover": prover,
                "position": position, "trials": trials},
               agg, output, deterministic, seed=seed)


# ---------------------------------------------------------------------------


@cli.command("ur-check")
@click.argument("fixture", required=False)
@click.option("--random", "random_count", type=int, default=None,
              help="Check this many random tripartite qubit instances instead.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def ur_check_cmd(fixture, random_count, seed, output, deterministic):
    """Check the two-observer guessing tradeoff for a fixture or random states."""
    rows = []
    if fixture is not None:
        kind, obj = fixtures_mod.load_fixture(fixture)
        if kind != "ur_instance":
            raise ValidationError(f"{fixture}: expected an ur_instance fixture")
        rho, dims, f0, f1 = obj
        rows.append(ur_mod.check_uncertainty_relation(rho, dims, f0, f1).to_dict())
    elif random_count is not None:
        if random_count < 1:
            raise click.UsageError("--random must be positive")
        for k in range(random_count):
            rng = rng_for(seed, k)
            rho = random_density(8, rng)
            f0 = random_povm(2, 2, rng)
            f1 = random_povm(2, 2, rng)
            rows.append(ur_mod.check_uncertainty_relation(
                rho, (2, 2, 2), f0, f1).to_dict())
    else:
        raise click.UsageError("provide a fixture path or --random K")
    _emit_json("ur-check", {"fixture": fixture, "random": random_count},
               rows, output, deterministic,
               seed=seed if random_count is not None else None)


# ---------------------------------------------------------------------------


@cli.group("fixtures")
def fixtures_group() -> None:
    """Fixture-file utilities."""


@fixtures_group.command("validate")
@click.argument("paths", nargs=-1, required=True)
@click.option("--output", default=None)
@click.option("--deterministic", is_flag=True)
def fixtures_validate_cmd(paths, output, deterministic):
    """Validate fixture files; exits 1 if any file is invalid."""
    rows = []
    failures = 0
    for path in paths:
        try:
            kind, _ = fixtures_mod.load_fixture(path)
            rows.append({"path": path, "kind": kind, "ok": True, "error": None})
        except ValueError as exc:
            failures += 1
            rows.append({"path": path, "kind": None, "ok": False, "error": str(exc)})
    _emit_json("fixtures-validate", {"paths": list(paths)}, rows, output,
               deterministic)
    if failures:
        raise ValidationError(f"{failures} of {len(paths)} fixture(s) invalid")


# ---------------------------------------------------------------------------


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run the CLI programmatically; returns the process exit code."""
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name=PROG,
                 standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.Abort:
        return 1
    except ValueError as exc:
        click.echo(f"{PROG}: error: {exc}", err=True)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
