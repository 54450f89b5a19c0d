"""CQ ensembles, guessing probabilities, and the two-observer tradeoff."""

from __future__ import annotations

import math

import numpy as np
import pytest

from monogamy import linalg
from monogamy.errors import DomainError, ValidationError
from monogamy.games import bb84_game, maximally_entangled_density
from monogamy.rand import random_density, random_povm
from monogamy.uncertainty import (CqEnsemble, check_uncertainty_relation,
                                  guessing_probability_binary,
                                  helstrom_binary_povm, measurement_overlap,
                                  min_entropy_bracket, min_entropy_conditional,
                                  pgm_guessing_lower_bound, pgm_povm,
                                  post_measurement_state, ur_bound_n)

KET0 = np.array([[1, 0], [0, 0]], dtype=complex)
KET1 = np.array([[0, 0], [0, 1]], dtype=complex)
PLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)

BB84 = bb84_game()
F0 = BB84.povms["0"]
F1 = BB84.povms["1"]

# frozen oracle values
UR_BOUND_HALF_1 = 0.45689339367277604
MIX_HMIN_SUM_1 = 0.8300749985576876  # 2 log2(4/3)
MIX_GAP_15 = 0.015807759


def binary_ensemble(p0, rho0, rho1) -> CqEnsemble:
    return CqEnsemble(("0", "1"), np.array([p0, 1.0 - p0]),
                      {"0": rho0, "1": rho1})


# ---------------------------------------------------------------------------
# CqEnsemble


def test_ensemble_validates_weights():
    with pytest.raises(ValidationError):
        CqEnsemble(("0", "1"), np.array([0.7, 0.7]), {"0": KET0, "1": KET1})


def test_ensemble_validates_conditionals():
    with pytest.raises(ValidationError):
        CqEnsemble(("0", "1"), np.array([0.5, 0.5]),
                   {"0": KET0, "1": 2 * KET1})


def test_joint_density_shape_and_trace():
    e = binary_ensemble(0.3, KET0, PLUS)
    joint = e.joint_density()
    assert joint.shape == (4, 4)
    assert np.trace(joint) == pytest.approx(1.0, abs=1e-12)
    assert linalg.is_density(joint)


# ---------------------------------------------------------------------------
# post-measurement ensembles


def test_post_measurement_product_state(rng):
    rho_a = random_density(2, rng)
    rho_b = random_density(2, rng)
    rho_c = random_density(2, rng)
    rho = linalg.tensor(rho_a, rho_b, rho_c)
    b_ens, c_ens = post_measurement_state(rho, (2, 2, 2), F0, F1)
    for theta in (0, 1):
        for i, x in enumerate(b_ens[theta].alphabet):
            expected = float(np.trace(BB84.povms[str(theta)][i] @ rho_a).real)
            assert b_ens[theta].weights[i] == pytest.approx(expected, abs=1e-10)
            np.testing.assert_allclose(b_ens[theta].conditionals[x], rho_b,
                                       atol=1e-10)
            np.testing.assert_allclose(c_ens[theta].conditionals[x], rho_c,
                                       atol=1e-10)


def test_post_measurement_epr_correlations():
    rho = np.kron(maximally_entangled_density(2), np.eye(1, dtype=complex))
    b_ens, _ = post_measurement_state(rho, (2, 2, 1), F0, F1)
    ens = b_ens[0]
    np.testing.assert_allclose(ens.weights, [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(ens.conditionals["0"], KET0, atol=1e-12)
    np.testing.assert_allclose(ens.conditionals["1"], KET1, atol=1e-12)


def test_post_measurement_weights_normalize_per_basis(rng):
    rho = random_density(8, rng)
    b_ens, c_ens = post_measurement_state(rho, (2, 2, 2), F0, F1)
    for theta in (0, 1):
        assert b_ens[theta].weights.sum() == pytest.approx(1.0, abs=1e-10)
        assert c_ens[theta].weights.sum() == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# Helstrom


def test_helstrom_orthogonal_discrimination():
    p0, p1, value = helstrom_binary_povm(KET0 / 2, KET1 / 2)
    np.testing.assert_allclose(p0, KET0, atol=1e-12)
    np.testing.assert_allclose(p1, KET1, atol=1e-12)
    assert value == pytest.approx(1.0, abs=1e-12)


def test_helstrom_tie_goes_to_outcome_zero():
    sigma = np.eye(2, dtype=complex) / 4
    p0, p1, value = helstrom_binary_povm(sigma, sigma)
    np.testing.assert_allclose(p0, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(p1, np.zeros((2, 2)), atol=1e-12)
    assert value == pytest.approx(0.5, abs=1e-12)  # tr(sigma0 + sigma1) / 2 * 2


def test_guessing_useless_side_information():
    for p0 in (0.5, 0.3, 0.9):
        value, _ = guessing_probability_binary(binary_ensemble(p0, PLUS, PLUS))
        assert value == pytest.approx(max(p0, 1 - p0), abs=1e-12)


def test_guessing_orthogonal_pure_states():
    value, _ = guessing_probability_binary(binary_ensemble(0.5, KET0, KET1))
    assert value == pytest.approx(1.0, abs=1e-12)


def test_guessing_unbiased_pair():
    value, povm = guessing_probability_binary(binary_ensemble(0.5, KET0, PLUS))
    assert value == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)), abs=1e-12)
    # the reported POVM achieves the reported value
    achieved = 0.5 * np.trace(KET0 @ povm[0]).real + 0.5 * np.trace(PLUS @ povm[1]).real
    assert achieved == pytest.approx(value, abs=1e-12)


def test_guessing_beats_best_prior(rng):
    for _ in range(30):
        p0 = float(rng.uniform(0.1, 0.9))
        e = binary_ensemble(p0, random_density(3, rng), random_density(3, rng))
        value, _ = guessing_probability_binary(e)
        assert value >= max(p0, 1 - p0) - 1e-10
        assert value <= 1.0 + 1e-12


def test_guessing_requires_binary():
    e = CqEnsemble(("a", "b", "c"), np.ones(3) / 3,
                   {"a": KET0, "b": KET1, "c": PLUS})
    with pytest.raises(DomainError):
        guessing_probability_binary(e)


def test_data_processing_uncorrelated_ancilla(rng):
    for _ in range(10):
        rho0 = random_density(2, rng)
        rho1 = random_density(2, rng)
        anc = random_density(2, rng)
        base, _ = guessing_probability_binary(binary_ensemble(0.5, rho0, rho1))
        ext, _ = guessing_probability_binary(binary_ensemble(
            0.5, linalg.tensor(rho0, anc), linalg.tensor(rho1, anc)))
        assert ext == pytest.approx(base, abs=1e-9)


# ---------------------------------------------------------------------------
# pretty-good measurement


def test_pgm_is_valid_povm(rng):
    for _ in range(20):
        sigmas = [random_density(3, rng) * w
                  for w in rng.dirichlet(np.ones(4))]
        povm = pgm_povm(sigmas)
        total = sum(povm)
        np.testing.assert_allclose(total, np.eye(3), atol=1e-8)
        for m in povm:
            assert linalg.is_psd(m)


def test_pgm_below_helstrom_on_random_binary(rng):
    for _ in range(120):
        p0 = float(rng.uniform(0.05, 0.95))
        e = binary_ensemble(p0, random_density(2, rng), random_density(2, rng))
        exact, _ = guessing_probability_binary(e)
        assert pgm_guessing_lower_bound(e) <= exact + 1e-9


def test_pgm_orthogonal_ensemble():
    e = binary_ensemble(0.5, KET0, KET1)
    assert pgm_guessing_lower_bound(e) == pytest.approx(1.0, abs=1e-10)


def test_pgm_trivial_side_information_gives_sum_of_squares(rng):
    rho = random_density(2, rng)
    weights = np.array([0.5, 0.3, 0.2])
    e = CqEnsemble(("a", "b", "c"), weights, {k: rho for k in ("a", "b", "c")})
    assert pgm_guessing_lower_bound(e) == pytest.approx(float((weights**2).sum()),
                                                        abs=1e-9)


# ---------------------------------------------------------------------------
# conditional min-entropy


def test_min_entropy_deterministic_symbol():
    e = binary_ensemble(1.0, KET0, KET0)
    assert min_entropy_conditional({0: e, 1: e}, {0: 0.5, 1: 0.5}) == \
        pytest.approx(0.0, abs=1e-12)


def test_min_entropy_uniform_trivial_side_information():
    e = binary_ensemble(0.5, PLUS, PLUS)
    assert min_entropy_conditional({0: e, 1: e}, {0: 0.5, 1: 0.5}) == \
        pytest.approx(1.0, abs=1e-12)


def test_min_entropy_of_intermediate_state_trivial_observers():
    # cos(pi/8) sender state with no side information: the per-basis guessing
    # probability is the single-round game value
    phi = np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)])
    rho = np.kron(np.outer(phi, phi), np.eye(1, dtype=complex))
    b_ens, _ = post_measurement_state(rho, (2, 1, 1), F0, F1)
    hmin = min_entropy_conditional(b_ens, {0: 0.5, 1: 0.5})
    assert hmin == pytest.approx(-math.log2(0.5 + 0.5 / math.sqrt(2)), abs=1e-10)


def test_min_entropy_bracket_contains_exact(rng):
    e0 = binary_ensemble(0.4, random_density(2, rng), random_density(2, rng))
    e1 = binary_ensemble(0.6, random_density(2, rng), random_density(2, rng))
    exact = min_entropy_conditional({0: e0, 1: e1}, {0: 0.5, 1: 0.5})
    lo, hi = min_entropy_bracket({0: e0, 1: e1}, {0: 0.5, 1: 0.5})
    assert lo - 1e-10 <= exact <= hi + 1e-10


# ---------------------------------------------------------------------------
# the tradeoff


def test_overlap_of_bb84_povms():
    assert measurement_overlap(F0, F1) == 0.5


def test_relation_saturated_by_intermediate_state():
    phi = np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)])
    rho = np.kron(np.outer(phi, phi), np.eye(1, dtype=complex))
    rep = check_uncertainty_relation(rho, (2, 1, 1), F0, F1)
    assert rep.sum == pytest.approx(rep.bound, abs=1e-9)
    assert rep.satisfied


def test_relation_for_entangled_bob():
    rho = np.kron(maximally_entangled_density(2), np.eye(1, dtype=complex))
    rep = check_uncertainty_relation(rho, (2, 2, 1), F0, F1)
    assert rep.pguess_b == pytest.approx(1.0, abs=1e-10)
    assert rep.pguess_c == pytest.approx(0.5, abs=1e-10)
    assert rep.sum == pytest.approx(1.5, abs=1e-10)
    assert rep.satisfied


def test_relation_vacuous_for_identical_povms():
    # c = 1: classical copies reach the bound 2 with equality
    rho = np.zeros((8, 8), dtype=complex)
    for x in (0, 1):
        idx = x * 4 + x * 2 + x
        rho[idx, idx] = 0.5
    rep = check_uncertainty_relation(rho, (2, 2, 2), F0, F0)
    assert rep.c == pytest.approx(1.0, abs=1e-12)
    assert rep.bound == pytest.approx(2.0, abs=1e-12)
    assert rep.sum == pytest.approx(2.0, abs=1e-10)
    assert rep.satisfied


def test_relation_on_random_instances(rng):
    for _ in range(60):
        rho = random_density(8, rng)
        f0 = random_povm(2, 2, rng)
        f1 = random_povm(2, 2, rng)
        rep = check_uncertainty_relation(rho, (2, 2, 2), f0, f1)
        assert rep.sum <= rep.bound + 1e-7
        assert rep.hmin_b + rep.hmin_c >= rep.entropy_bound - 1e-8
        assert rep.satisfied


# ---------------------------------------------------------------------------
# n-round bound and the half-entangled mixture


def test_ur_bound_values():
    assert ur_bound_n(0.5, 1) == pytest.approx(UR_BOUND_HALF_1, abs=1e-13)
    assert ur_bound_n(1.0, 1) == 0.0
    assert ur_bound_n(1.0, 64) == 0.0
    assert ur_bound_n(0.5, 400) == pytest.approx(2.0, abs=1e-9)


def test_ur_bound_domain():
    with pytest.raises(DomainError):
        ur_bound_n(0.0, 1)
    with pytest.raises(DomainError):
        ur_bound_n(0.5, 0)


def test_half_entangled_mixture_single_round():
    # equal mixture of A:B-entangled and A:C-entangled branches; both
    # observers' guessing probability is exactly 3/4 per basis
    tau = np.eye(2, dtype=complex) / 2
    branch_ab = linalg.tensor(maximally_entangled_density(2), tau)
    branch_ac = linalg.reorder_systems(
        linalg.tensor(maximally_entangled_density(2), tau), (2, 2, 2), (0, 2, 1))
    rho = 0.5 * branch_ab + 0.5 * branch_ac
    rep = check_uncertainty_relation(rho, (2, 2, 2), F0, F1)
    assert rep.pguess_b == pytest.approx(0.75, abs=1e-10)
    assert rep.pguess_c == pytest.approx(0.75, abs=1e-10)
    total = rep.hmin_b + rep.hmin_c
    assert total == pytest.approx(MIX_HMIN_SUM_1, abs=1e-9)
    assert total >= ur_bound_n(0.5, 1) - 1e-9


def test_half_entangled_mixture_approaches_bound():
    # the mixture's guessing probability per observer is (1 + 2^-n)/2 per
    # basis, so its min-entropy sum tracks the n-round floor; the gap falls
    # below 0.02 by n = 15 and keeps shrinking
    def mixture_hmin_sum(n: int) -> float:
        return -2.0 * math.log2(0.5 * (1.0 + 2.0**-n))

    gaps = [mixture_hmin_sum(n) - ur_bound_n(0.5, n) for n in range(5, 41)]
    assert all(g >= -1e-12 for g in gaps)
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    gap15 = mixture_hmin_sum(15) - ur_bound_n(0.5, 15)
    assert gap15 == pytest.approx(MIX_GAP_15, abs=1e-6)
    assert gap15 <= 0.02
