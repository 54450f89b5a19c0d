"""One-round position verification on a line: soundness calculators and a
timing-model Monte-Carlo simulator.

Two verifiers bracket a claimed position; one sends n qubits prepared in
random BB84 states, the other the basis string, timed to meet at the claimed
position.  A response is accepted only if it is correct and arrives at both
verifiers on the light-speed schedule of that position (unit signal speed,
instantaneous local computation).

Adversary quantum behaviour is modeled per qubit; the canonical unentangled
attack measures every qubit in the intermediate basis halfway between the
two BB84 bases, which succeeds per qubit with probability cos^2(pi/8) and
meets the n = 1 soundness bound with equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BB84_ROUND_VALUE, bb84_parallel_value, imperfect_guessing_bound
from .errors import CapacityError, DomainError, ValidationError
from .rand import rng_for

# per-qubit success of the intermediate-basis measurement; numerically equal
# to the single-round game value
BREIDBART_SUCCESS = math.cos(math.pi / 8) ** 2

MAX_QUBITS = 64


# ---------------------------------------------------------------------------
# closed-form soundness


def soundness_bound(n: int) -> float:
    """Acceptance probability bound for unentangled adversary pairs."""
    return bb84_parallel_value(n)


def entangled_soundness_bound(n: int, d: int) -> float:
    """Bound d * (single-round value)^n for adversaries pre-sharing a
    d-dimensional state; unclamped, so values >= 1 are vacuous."""
    d = int(d)
    if d < 1:
        raise DomainError("d must be a positive integer")
    return d * bb84_parallel_value(n)


def max_entanglement_rate() -> float:
    """Pre-shared entangled qubits per transmitted qubit below which the
    soundness error still decays exponentially: log2(1/round value)."""
    return -math.log2(BB84_ROUND_VALUE)


def noisy_soundness_bound(n: int, gamma: float, gamma_prime: float) -> float:
    """Soundness when responses may differ from the challenge string in at
    most a gamma (resp. gamma') fraction of positions."""
    return imperfect_guessing_bound(0.5, 2, n, gamma, gamma_prime)


# ---------------------------------------------------------------------------
# timing scenario and prover models


@dataclass(frozen=True)
class TimingScenario:
    """Verifier coordinates and the claimed position, unit signal speed."""

    v0: float
    v1: float
    pos: float

    def __post_init__(self):
        if not self.v0 < self.pos < self.v1:
            raise ValidationError(f"claimed position {self.pos} must lie strictly "
                                  f"between the verifiers at {self.v0} and {self.v1}")

    def require_inside(self, position: float, who: str) -> float:
        if not self.v0 < position < self.v1:
            raise ValidationError(f"{who} at {position} is outside the segment "
                                  f"({self.v0}, {self.v1}) covered by the timing model")
        return float(position)


@dataclass(frozen=True)
class PvRound:
    n: int
    x: np.ndarray
    theta: np.ndarray
    x0_prime: np.ndarray
    x1_prime: np.ndarray
    timing_ok_v0: bool
    timing_ok_v1: bool
    accepted: bool


class HonestProver:
    """Prover at the claimed position measuring in the announced basis:
    responses are exact and on schedule."""

    def timing(self, scenario: TimingScenario) -> tuple[bool, bool]:
        return True, True

    def respond_batch(self, x: np.ndarray, theta: np.ndarray,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        return x.copy(), x.copy()


class BreidbartPair:
    """Two colluding adversaries, one on each side of the claimed position,
    holding no shared entanglement.

    The one facing the qubit source measures every qubit immediately in the
    intermediate basis (success cos^2(pi/8) per qubit, independent of the
    basis bit) and forwards the outcome string both ways; the other merely
    relays.  That schedule meets both deadlines whenever the first adversary
    sits between its verifier and the claimed position.
    """

    def __init__(self, pos_e0: float | None = None, pos_e1: float | None = None):
        self.pos_e0 = pos_e0
        self.pos_e1 = pos_e1

    def _positions(self, scenario: TimingScenario) -> tuple[float, float]:
        e0 = (scenario.v0 + scenario.pos) / 2 if self.pos_e0 is None else self.pos_e0
        e1 = (scenario.pos + scenario.v1) / 2 if self.pos_e1 is None else self.pos_e1
        e0 = scenario.require_inside(e0, "adversary E0")
        e1 = scenario.require_inside(e1, "adversary E1")
        return e0, e1

    def timing(self, scenario: TimingScenario) -> tuple[bool, bool]:
        e0, e1 = self._positions(scenario)
        # answering V0 on time requires E0 at or before the claimed position;
        # the relayed string reaches V1 exactly on the deadline iff it never
        # travels backwards
        return e0 <= scenario.pos, e0 <= e1

    def respond_batch(self, x: np.ndarray, theta: np.ndarray,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        flips = (rng.random(x.shape) >= BREIDBART_SUCCESS).astype(np.uint8)
        guess = x ^ flips
        return guess, guess.copy()


class SingleAdversary:
    """One adversary who waits for both the qubits and the basis string.

    With the basis in hand the measurement is perfect, but waiting at any
    point other than the claimed position makes one of the two response
    deadlines unreachable, so the timing check alone rejects the attack.
    """

    def __init__(self, position: float):
        self.position = float(position)

    def timing(self, scenario: TimingScenario) -> tuple[bool, bool]:
        q = scenario.require_inside(self.position, "adversary")
        return q <= scenario.pos, q >= scenario.pos

    def respond_batch(self, x: np.ndarray, theta: np.ndarray,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        return x.copy(), x.copy()


# ---------------------------------------------------------------------------
# simulation


def _check_n(n: int) -> int:
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    if n > MAX_QUBITS:
        raise CapacityError(f"simulator supports at most {MAX_QUBITS} qubits")
    return n


def simulate_pv_round(scenario: TimingScenario, n: int, prover,
                      seed: int = 0) -> PvRound:
    """One verification round: challenge sampling, prover response, timing
    and correctness checks at both verifiers."""
    n = _check_n(n)
    rng = rng_for(seed)
    x = rng.integers(0, 2, size=(1, n), dtype=np.uint8)
    theta = rng.integers(0, 2, size=(1, n), dtype=np.uint8)
    ok0, ok1 = prover.timing(scenario)
    x0p, x1p = prover.respond_batch(x, theta, rng)
    accepted = bool(ok0 and ok1 and np.array_equal(x0p[0], x[0])
                    and np.array_equal(x1p[0], x[0]))
    return PvRound(n=n, x=x[0], theta=theta[0], x0_prime=x0p[0], x1_prime=x1p[0],
                   timing_ok_v0=ok0, timing_ok_v1=ok1, accepted=accepted)


def simulate_pv_rounds(scenario: TimingScenario, n: int, prover, trials: int,
                       seed: int = 0) -> dict:
    """Acceptance statistics over many rounds, batched and seed-derived so the
    aggregate is reproducible at any batch schedule."""
    n = _check_n(n)
    if trials < 1:
        raise DomainError("trials must be positive")
    ok0, ok1 = prover.timing(scenario)
    accepted = 0
    done = 0
    batch_index = 0
    batch = 65536
    while done < trials:
        nb = min(batch, trials - done)
        rng = rng_for(seed, batch_index)
        x = rng.integers(0, 2, size=(nb, n), dtype=np.uint8)
        theta = rng.integers(0, 2, size=(nb, n), dtype=np.uint8)
        x0p, x1p = prover.respond_batch(x, theta, rng)
        if ok0 and ok1:
            good = np.all(x0p == x, axis=1) & np.all(x1p == x, axis=1)
            accepted += int(np.sum(good))
        done += nb
        batch_index += 1
    return {
        "trials": trials,
        "seed": seed,
        "n": n,
        "accepted": accepted,
        "acceptance_rate": accepted / trials,
        "timing_ok_v0": ok0,
        "timing_ok_v1": ok1,
        "soundness_bound": soundness_bound(n),
    }
