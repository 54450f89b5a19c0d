"""Closed-form upper bounds on monogamy-game winning probabilities.

The single-round BB84 value ``BB84_ROUND_VALUE = 1/2 + 1/(2 sqrt 2)`` is
computed at full floating precision here and imported everywhere else, so
the game bounds, the QKD calculator and the position-verification module all
share one constant.

Bounds larger than 1 are vacuous but returned unclamped; ``BoundReport``
carries the flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .errors import DomainError

BB84_ROUND_VALUE = 0.5 + 0.5 / math.sqrt(2.0)


@dataclass(frozen=True)
class BoundReport:
    """A bound value, the formula that produced it, and the inputs echoed back."""

    value: float
    formula: str
    inputs: dict[str, Any]

    @property
    def vacuous(self) -> bool:
        return self.value >= 1.0

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "formula": self.formula,
                "vacuous": self.vacuous, "inputs": dict(self.inputs)}


def binary_entropy(p: float) -> float:
    """-p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0 by continuity."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy requires p in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def bb84_parallel_value(n: int) -> float:
    """Exact optimal n-round BB84 game value: BB84_ROUND_VALUE ** n."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    return BB84_ROUND_VALUE**n


def general_upper_bound(c: float, theta_count: int, q_cardinality: int, n: int) -> float:
    """|Q| * (1/|Theta| + (|Theta|-1)/|Theta| * sqrt(c))^n for overlap c."""
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"overlap c must lie in (0, 1], got {c}")
    theta_count = int(theta_count)
    if theta_count < 2:
        raise DomainError("theta_count must be at least 2")
    q_cardinality = int(q_cardinality)
    if q_cardinality < 1:
        raise DomainError("q_cardinality must be at least 1")
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    base = (1.0 + (theta_count - 1) * math.sqrt(c)) / theta_count
    return q_cardinality * base**n


def imperfect_guessing_bound(c: float, theta_count: int, n: int,
                             gamma: float, gamma_prime: float) -> float:
    """(2^{h(gamma)+h(gamma')} (1 + (|Theta|-1) sqrt(c)) / |Theta|)^n.

    Bounds the n-round value when each party may miss a bounded fraction of
    the outcome string (gamma for one party, gamma' for the other).
    """
    for name, g in (("gamma", gamma), ("gamma_prime", gamma_prime)):
        if not 0.0 <= float(g) <= 0.5:
            raise DomainError(f"{name} must lie in [0, 1/2], got {g}")
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"overlap c must lie in (0, 1], got {c}")
    theta_count = int(theta_count)
    if theta_count < 2:
        raise DomainError("theta_count must be at least 2")
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    factor = 2.0 ** (binary_entropy(gamma) + binary_entropy(gamma_prime))
    base = factor * (1.0 + (theta_count - 1) * math.sqrt(c)) / theta_count
    return base**n


def same_string_bound(c: float, theta_count: int, n: int, gamma: float) -> float:
    """Variant of the imperfect-guessing bound when both parties must produce
    the same (approximately correct) string: single entropy factor."""
    return imperfect_guessing_bound(c, theta_count, n, gamma, 0.0)
