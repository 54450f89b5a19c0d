"""Closed-form bound formulas and the binary entropy."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from monogamy import bounds
from monogamy.errors import DomainError

# frozen oracle values (mpmath, 50 digits)
H_011 = 0.499915958164528
H_0015 = 0.11236071009937673
BETA2 = 0.7285533905932737
BETA10 = 0.20526122593149476
IMPERFECT_011 = 1.2070364652071786
SAME_STRING_0015 = 0.9226874974889537


def test_round_value_is_computed_not_hardcoded():
    assert bounds.BB84_ROUND_VALUE == 0.5 + 0.5 / math.sqrt(2.0)
    assert bounds.BB84_ROUND_VALUE == pytest.approx(math.cos(math.pi / 8) ** 2,
                                                    abs=1e-15)


def test_binary_entropy_endpoints():
    assert bounds.binary_entropy(0.0) == 0.0
    assert bounds.binary_entropy(1.0) == 0.0
    assert bounds.binary_entropy(0.5) == 1.0


def test_binary_entropy_oracle_values():
    assert bounds.binary_entropy(0.11) == pytest.approx(H_011, abs=1e-14)
    assert bounds.binary_entropy(0.015) == pytest.approx(H_0015, abs=1e-14)
    assert bounds.binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-14)


def test_binary_entropy_domain():
    with pytest.raises(DomainError):
        bounds.binary_entropy(-0.01)
    with pytest.raises(DomainError):
        bounds.binary_entropy(1.01)


@given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_binary_entropy_properties(p):
    h = bounds.binary_entropy(p)
    assert 0.0 <= h <= 1.0
    assert h == pytest.approx(bounds.binary_entropy(1.0 - p), abs=1e-12)


def test_bb84_parallel_values():
    assert bounds.bb84_parallel_value(1) == bounds.BB84_ROUND_VALUE
    assert bounds.bb84_parallel_value(2) == pytest.approx(BETA2, abs=1e-15)
    assert bounds.bb84_parallel_value(10) == pytest.approx(BETA10, rel=1e-14)


def test_bb84_parallel_value_rejects_nonpositive():
    with pytest.raises(DomainError):
        bounds.bb84_parallel_value(0)


def test_general_bound_reduces_to_bb84():
    for n in range(1, 11):
        assert bounds.general_upper_bound(0.5, 2, 1, n) == \
            bounds.bb84_parallel_value(n)


def test_general_bound_collapses_at_full_overlap():
    for n in (1, 3, 10):
        for thetas in (2, 3, 5):
            assert bounds.general_upper_bound(1.0, thetas, 1, n) == \
                pytest.approx(1.0, abs=1e-12)


def test_general_bound_can_be_vacuous():
    value = bounds.general_upper_bound(0.5, 2, 4, 2)
    assert value == pytest.approx(4 * BETA2, rel=1e-14)
    assert value > 1.0
    report = bounds.BoundReport(value=value, formula="general", inputs={"n": 2})
    assert report.vacuous


def test_imperfect_guessing_reduces_to_general():
    for n in (1, 2, 5):
        assert bounds.imperfect_guessing_bound(0.5, 2, n, 0.0, 0.0) == \
            bounds.general_upper_bound(0.5, 2, 1, n)


def test_imperfect_guessing_oracle_value():
    assert bounds.imperfect_guessing_bound(0.5, 2, 1, 0.11, 0.0) == \
        pytest.approx(IMPERFECT_011, rel=1e-13)


def test_imperfect_guessing_monotone_in_gamma():
    lo = bounds.imperfect_guessing_bound(0.5, 2, 3, 0.01, 0.0)
    hi = bounds.imperfect_guessing_bound(0.5, 2, 3, 0.05, 0.0)
    assert lo < hi


def test_imperfect_guessing_domain():
    with pytest.raises(DomainError):
        bounds.imperfect_guessing_bound(0.5, 2, 1, 0.6, 0.0)
    with pytest.raises(DomainError):
        bounds.imperfect_guessing_bound(0.5, 2, 1, 0.0, -0.1)


def test_same_string_bound_values():
    assert bounds.same_string_bound(0.5, 2, 1, 0.0) == bounds.BB84_ROUND_VALUE
    assert bounds.same_string_bound(0.5, 2, 1, 0.015) == \
        pytest.approx(SAME_STRING_0015, rel=1e-13)


def test_same_string_equals_imperfect_with_zero_prime():
    for gamma in (0.0, 0.05, 0.25, 0.5):
        for n in (1, 4):
            assert bounds.same_string_bound(0.5, 2, n, gamma) == \
                bounds.imperfect_guessing_bound(0.5, 2, n, gamma, 0.0)


def test_bounds_decay_when_single_round_factor_below_one():
    prev = None
    for n in range(1, 12):
        value = bounds.general_upper_bound(0.5, 2, 1, n)
        if prev is not None:
            assert value < prev
        prev = value


def test_bound_report_round_trip():
    rep = bounds.BoundReport(value=0.25, formula="general", inputs={"n": 3, "c": 0.5})
    doc = rep.to_dict()
    assert doc["value"] == 0.25
    assert doc["formula"] == "general"
    assert doc["vacuous"] is False
    assert doc["inputs"]["n"] == 3
