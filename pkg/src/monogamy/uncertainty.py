"""Min-entropy uncertainty with two quantum observers.

Builds the classical-quantum ensembles a basis-random measurement leaves
behind on each observer, evaluates guessing probabilities (exactly via the
Helstrom projector for binary alphabets, by the pretty-good measurement as a
feasible lower bound otherwise), and checks the two-observer tradeoff

    p_guess(X|B,Theta) + p_guess(X|C,Theta) <= 1 + sqrt(c)

together with its min-entropy form against any state and binary POVM pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError, ValidationError

WEIGHT_ATOL = 1e-9


@dataclass(frozen=True)
class CqEnsemble:
    """Classical symbol with quantum side information: weights p_x and
    conditional states rho^x of one shared dimension."""

    alphabet: tuple[str, ...]
    weights: np.ndarray
    conditionals: Mapping[str, np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(str(x) for x in self.alphabet))
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise ValidationError("alphabet labels must be non-empty and distinct")
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.shape[0] != len(self.alphabet):
            raise DimensionError("one weight per alphabet symbol required")
        if w.min() < -WEIGHT_ATOL:
            raise ValidationError(f"negative weight {w.min()}")
        if abs(w.sum() - 1.0) > WEIGHT_ATOL:
            raise ValidationError(f"weights sum to {w.sum()}, expected 1")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        conds = {}
        dim = None
        for x in self.alphabet:
            if x not in self.conditionals:
                raise ValidationError(f"missing conditional state for '{x}'")
            rho = linalg.require_density(self.conditionals[x], f"conditional '{x}'")
            if dim is None:
                dim = rho.shape[0]
            elif rho.shape[0] != dim:
                raise DimensionError("conditional states must share one dimension")
            rho.setflags(write=False)
            conds[x] = rho
        object.__setattr__(self, "conditionals", conds)

    @property
    def dim(self) -> int:
        return next(iter(self.conditionals.values())).shape[0]

    def weight(self, x: str) -> float:
        return float(self.weights[self.alphabet.index(x)])

    def weighted_conditionals(self) -> list[np.ndarray]:
        return [self.weights[i] * self.conditionals[x]
                for i, x in enumerate(self.alphabet)]

    def average_state(self) -> np.ndarray:
        return sum(self.weighted_conditionals())

    def joint_density(self) -> np.ndarray:
        """The full CQ density sum_x p_x |x><x| ⊗ rho^x."""
        d = self.dim
        k = len(self.alphabet)
        out = np.zeros((k * d, k * d), dtype=complex)
        for i, x in enumerate(self.alphabet):
            out[i * d:(i + 1) * d, i * d:(i + 1) * d] = self.weights[i] * self.conditionals[x]
        return out


def helstrom_binary_povm(sigma0: np.ndarray, sigma1: np.ndarray):
    """Optimal two-outcome discrimination of weighted conditionals.

    Returns (P0, P1, value) with P0 the projector onto the nonnegative
    eigenspace of sigma0 - sigma1 (zero eigenvalues go to outcome 0) and
    value = tr(sigma0 P0) + tr(sigma1 P1).
    """
    s0 = linalg.hermitianize(sigma0)
    s1 = linalg.hermitianize(sigma1)
    if s0.shape != s1.shape:
        raise DimensionError("conditional operators must share one dimension")
    evals, vecs = np.linalg.eigh(s0 - s1)
    pos = vecs[:, evals >= 0.0]
    p0 = pos @ pos.conj().T
    p1 = np.eye(s0.shape[0], dtype=complex) - p0
    value = float(np.trace(s0 @ p0).real + np.trace(s1 @ p1).real)
    return p0, p1, value


def guessing_probability_binary(ensemble: CqEnsemble):
    """Exact guessing probability for a binary alphabet.

    Equals (1 + ||p0 rho0 - p1 rho1||_1) / 2; also returns the optimal
    projective POVM, ordered like the alphabet.
    """
    if len(ensemble.alphabet) != 2:
        raise DomainError("exact guessing probability implemented for binary "
                          "alphabets; use pgm_guessing_lower_bound otherwise")
    s0, s1 = ensemble.weighted_conditionals()
    p0, p1, value = helstrom_binary_povm(s0, s1)
    return value, [p0, p1]


def _psd_clip(m: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(m)
    return (vecs * np.clip(evals, 0.0, None)) @ vecs.conj().T


def pgm_povm(sigmas: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Pretty-good measurement for weighted PSD operators.

    M_x = S^{-1/2} sigma_x S^{-1/2} with S = sum sigma_x inverted on its
    support; the kernel of S is assigned to the first outcome.  A final
    Hermitian-congruence whitening restores completeness exactly while
    keeping every element PSD, so the family is always a valid POVM even for
    nearly singular S.
    """
    mats = [linalg.hermitianize(s) for s in sigmas]
    if not mats:
        raise DimensionError("need at least one operator")
    total = sum(mats)
    evals, vecs = np.linalg.eigh(total)
    top = max(float(evals[-1]), 0.0)
    tol = top * 1e-10 + 1e-300
    inv_root_diag = np.where(evals > tol, 1.0 / np.sqrt(np.clip(evals, tol, None)), 0.0)
    inv_root = (vecs * inv_root_diag) @ vecs.conj().T
    povm = [_psd_clip(linalg.hermitianize(inv_root @ s @ inv_root)) for s in mats]
    kernel_vecs = vecs[:, evals <= tol]
    povm[0] = povm[0] + kernel_vecs @ kernel_vecs.conj().T
    summed = linalg.hermitianize(sum(povm))
    s_evals, s_vecs = np.linalg.eigh(summed)
    whiten = (s_vecs * (1.0 / np.sqrt(np.clip(s_evals, 1e-12, None)))) @ s_vecs.conj().T
    return [linalg.hermitianize(whiten @ m @ whiten) for m in povm]


def pgm_guessing_lower_bound(ensemble: CqEnsemble) -> float:
    """Feasible guessing probability from the pretty-good measurement.

    Always a valid lower bound on the true guessing probability; for
    ensembles with trivial side information it evaluates to sum p_x^2, which
    can fall below max p_x.
    """
    sigmas = ensemble.weighted_conditionals()
    povm = pgm_povm(sigmas)
    return float(sum(np.trace(s @ m).real for s, m in zip(sigmas, povm)))


def min_entropy_conditional(ensembles: Mapping, theta_weights: Mapping) -> float:
    """-log2 of the basis-averaged exact guessing probability.

    `ensembles` maps a basis key to the CQ ensemble conditioned on that
    basis; the optimal guesser picks a measurement per basis.  Exact only
    for binary alphabets; use min_entropy_bracket otherwise.
    """
    keys = list(ensembles.keys())
    total_w = sum(float(theta_weights[k]) for k in keys)
    if abs(total_w - 1.0) > WEIGHT_ATOL:
        raise ValidationError(f"basis weights sum to {total_w}, expected 1")
    avg = 0.0
    for k in keys:
        value, _ = guessing_probability_binary(ensembles[k])
        avg += float(theta_weights[k]) * value
    return -math.log2(avg)


def min_entropy_bracket(ensembles: Mapping, theta_weights: Mapping) -> tuple[float, float]:
    """(lower, upper) bracket on the conditional min-entropy for any alphabet,
    from the PGM guessing value and the trivial guessing bound 1."""
    keys = list(ensembles.keys())
    avg = sum(float(theta_weights[k]) * pgm_guessing_lower_bound(ensembles[k])
              for k in keys)
    return 0.0, -math.log2(avg)


def post_measurement_state(rho_abc, dims: Sequence[int], f0, f1):
    """Ensembles the two observers hold after a basis-uniform measurement.

    `f0` and `f1` are the two POVMs on the first factor; returns
    (b_ensembles, c_ensembles), each a dict mapping basis key 0/1 to the
    CqEnsemble of outcome weights and normalized conditional states.
    Zero-weight outcomes get the maximally mixed conditional.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise DimensionError("expected three subsystem dimensions")
    rho = linalg.require_density(rho_abc, "rho_abc")
    da, db, dc = dims
    if rho.shape[0] != da * db * dc:
        raise DimensionError(f"state dimension {rho.shape[0]} != product of {dims}")
    povms = {0: list(f0), 1: list(f1)}
    for theta, elems in povms.items():
        total = sum(linalg.require_square(e) for e in elems)
        if total.shape[0] != da:
            raise DimensionError("POVMs must act on the first factor")
        if np.max(np.abs(total - np.eye(da))) > 1e-8:
            raise ValidationError(f"POVM {theta} does not sum to the identity")
        if not all(linalg.is_psd(e) for e in elems):
            raise ValidationError(f"POVM {theta} has a non-PSD element")
    alphabet = tuple(str(i) for i in range(len(povms[0])))
    if len(povms[1]) != len(alphabet):
        raise ValidationError("the two POVMs must share an outcome count")
    b_out, c_out = {}, {}
    for theta, elems in povms.items():
        weights = []
        conds_b, conds_c = {}, {}
        for i, e in enumerate(elems):
            op = linalg.tensor(e, np.eye(db * dc)) @ rho
            p = float(np.trace(op).real)
            weights.append(max(p, 0.0))
            if p > 1e-14:
                sb = linalg.hermitianize(linalg.partial_trace(op, dims, keep=[1])) / p
                sc = linalg.hermitianize(linalg.partial_trace(op, dims, keep=[2])) / p
            else:
                sb = np.eye(db, dtype=complex) / db
                sc = np.eye(dc, dtype=complex) / dc
            conds_b[str(i)] = sb
            conds_c[str(i)] = sc
        w = np.asarray(weights)
        w = w / w.sum()
        b_out[theta] = CqEnsemble(alphabet, w, conds_b)
        c_out[theta] = CqEnsemble(alphabet, w.copy(), conds_c)
    return b_out, c_out


@dataclass(frozen=True)
class UrReport:
    """Both observers' guessing data against the overlap tradeoff."""

    c: float
    pguess_b: float
    pguess_c: float
    sum: float
    bound: float
    hmin_b: float
    hmin_c: float
    entropy_bound: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {"c": self.c, "pguess_b": self.pguess_b, "pguess_c": self.pguess_c,
                "sum": self.sum, "bound": self.bound, "hmin_b": self.hmin_b,
                "hmin_c": self.hmin_c, "entropy_bound": self.entropy_bound,
                "satisfied": self.satisfied}


def ur_bound_n(c: float, n: int) -> float:
    """n-round min-entropy floor -2 log2((1 + sqrt(c^n)) / 2).

    Tends to 2 as n grows for c < 1: even over many rounds the relation only
    guarantees a constant amount of uncertainty.
    """
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"overlap c must lie in (0, 1], got {c}")
    n = int(n)
    if n < 1:
        raise DomainError("n must be a positive integer")
    return -2.0 * math.log2((1.0 + math.sqrt(c**n)) / 2.0)


def measurement_overlap(f0, f1) -> float:
    """max_{x,z} || sqrt(F_x^0) sqrt(F_z^1) ||^2 across the two POVMs."""
    return max(linalg.overlap_of_pair(a, b) for a in f0 for b in f1)


def check_uncertainty_relation(rho_abc, dims: Sequence[int], f0, f1) -> UrReport:
    """Evaluate both observers' optimal guessing probabilities and compare with
    1 + sqrt(c) (and the min-entropy sum with -2 log2((1+sqrt(c))/2))."""
    if len(list(f0)) != 2 or len(list(f1)) != 2:
        raise DomainError("exact evaluation requires binary-outcome POVMs")
    c = measurement_overlap(f0, f1)
    b_ens, c_ens = post_measurement_state(rho_abc, dims, f0, f1)
    weights = {0: 0.5, 1: 0.5}
    pg_b = sum(weights[t] * guessing_probability_binary(b_ens[t])[0] for t in (0, 1))
    pg_c = sum(weights[t] * guessing_probability_binary(c_ens[t])[0] for t in (0, 1))
    total = pg_b + pg_c
    bound = 1.0 + math.sqrt(c)
    hmin_b = -math.log2(pg_b)
    hmin_c = -math.log2(pg_c)
    entropy_bound = -2.0 * math.log2((1.0 + math.sqrt(c)) / 2.0)
    satisfied = (total <= bound + 1e-8) and (hmin_b + hmin_c >= entropy_bound - 1e-8)
    return UrReport(c=c, pguess_b=pg_b, pguess_c=pg_c, sum=total, bound=bound,
                    hmin_b=hmin_b, hmin_c=hmin_c, entropy_bound=entropy_bound,
                    satisfied=satisfied)
