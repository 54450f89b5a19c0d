"""Finite-key security calculator and Monte-Carlo simulator for the
entanglement-based BB84 protocol with an untrusted measurement device on the
receiving side.

The security statement is the closed-form failure bound

    delta = 5 exp(-2 eps^2 t)
          + 2^{ -(1/2) ( log2(1/b) n - h(gamma+eps) n - ell - t - s + 2 ) }

with b the single-round BB84 game value shared with :mod:`monogamy.bounds`.
The simulator executes the protocol itself (sampling, abort rule, syndrome
correction, Toeplitz hashing) with a pluggable device: a classical noise
model at up to 64 rounds, or a full tripartite quantum device at up to 5
rounds to exercise the POVM plumbing.  An eavesdropper is never simulated;
the delta formula is the security claim and is computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Mapping, Sequence

import numpy as np

from . import linalg
from .bounds import BB84_ROUND_VALUE, binary_entropy
from .errors import CapacityError, DimensionError, DomainError, ValidationError
from .rand import rng_for
from .uncertainty import CqEnsemble

LOG2_INV_ROUND_VALUE = -math.log2(BB84_ROUND_VALUE)

MAX_DECODE_BLOCK = 20
_TRIAL_BATCH = 4096

# rng derivation streams so protocol randomness, code construction and
# Monte-Carlo batches never overlap
_ROUND_STREAM = 0
_CODE_STREAM = 1
_BATCH_STREAM = 2


# ---------------------------------------------------------------------------
# parameters and the closed-form bound


@dataclass(frozen=True)
class QkdParams:
    """Protocol parameters: rounds n, sample size t, syndrome bits s, key
    length ell, tolerated relative error gamma, sampling slack epsilon."""

    n: int
    t: int
    s: int
    ell: int
    gamma: float
    epsilon: float

    def __post_init__(self):
        for name in ("n", "t", "s", "ell"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if not 0 < self.t < self.n:
            raise DomainError(f"need 0 < t < n, got t={self.t}, n={self.n}")
        if self.s < 0 or self.ell < 0:
            raise DomainError("s and ell must be non-negative")
        if not 0.0 <= self.gamma < 0.5:
            raise DomainError(f"gamma must lie in [0, 1/2), got {self.gamma}")
        if self.epsilon <= 0.0:
            raise DomainError("epsilon must be positive")
        if self.gamma + self.epsilon >= 0.5:
            raise DomainError("gamma + epsilon must stay below 1/2")


@dataclass(frozen=True)
class QkdSecurityReport:
    delta: float
    sampling_term: float
    pa_term: float
    exponent_budget: float

    @property
    def vacuous(self) -> bool:
        return not self.delta < 1.0

    def to_dict(self) -> dict:
        return {"delta": self.delta, "sampling_term": self.sampling_term,
                "pa_term": self.pa_term, "exponent_budget": self.exponent_budget,
                "vacuous": self.vacuous}


def _pow2(exponent: float) -> float:
    if exponent >= 1024.0:
        return math.inf
    if exponent <= -1074.0:
        return 0.0
    return 2.0**exponent


def delta_terms(n: float, t: float, s: float, ell: float,
                gamma: float, epsilon: float) -> tuple[float, float, float, float]:
    """(sampling_term, exponent_budget, pa_term, delta) of the failure bound.

    Numeric core: accepts real-valued arguments so budgets can be probed
    exactly; the typed entry point is :func:`security_delta`.
    """
    if epsilon <= 0.0:
        raise DomainError("epsilon must be positive")
    if not 0.0 <= gamma < 0.5 or gamma + epsilon >= 0.5:
        raise DomainError("need 0 <= gamma and gamma + epsilon < 1/2")
    sampling = 5.0 * math.exp(-2.0 * epsilon**2 * t)
    budget = (LOG2_INV_ROUND_VALUE * n - binary_entropy(gamma + epsilon) * n
              - ell - t - s + 2.0)
    pa = _pow2(-budget / 2.0)
    return sampling, budget, pa, sampling + pa


def security_delta(params: QkdParams) -> QkdSecurityReport:
    """Evaluate the failure bound for a parameter set."""
    sampling, budget, pa, delta = delta_terms(params.n, params.t, params.s,
                                              params.ell, params.gamma,
                                              params.epsilon)
    return QkdSecurityReport(delta=delta, sampling_term=sampling, pa_term=pa,
                             exponent_budget=budget)


@dataclass(frozen=True)
class KeyLengthReport:
    """Result of inverting the failure bound for the key length."""

    feasible: bool
    ell: int
    delta: float
    note: str = ""

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "ell": self.ell, "delta": self.delta,
                "note": self.note}


def max_key_length(n: int, t: int, s: int, gamma: float, epsilon: float,
                   delta_target: float) -> KeyLengthReport:
    """Largest ell >= 0 whose failure bound stays within `delta_target`.

    Infeasible targets (the sampling term alone, or the bound already at
    ell = 0, exceeds the target) yield an explicit infeasibility report, not
    an exception.  A feasible ell = 0 means no extractable key.
    """
    if delta_target <= 0.0:
        raise DomainError("delta_target must be positive")
    sampling, budget0, _, delta0 = delta_terms(n, t, s, 0, gamma, epsilon)
    if delta_target <= sampling:
        return KeyLengthReport(False, 0, math.nan,
                               "sampling term alone exceeds the target")
    if delta0 > delta_target:
        return KeyLengthReport(False, 0, math.nan,
                               "bound exceeds the target even at ell = 0")
    # closed-form inversion, then float-safe adjustment by +-1
    ell = int(math.floor(budget0 + 2.0 * math.log2(delta_target - sampling)))
    ell = max(ell, 0)
    while delta_terms(n, t, s, ell + 1, gamma, epsilon)[3] <= delta_target:
        ell += 1
    while ell > 0 and delta_terms(n, t, s, ell, gamma, epsilon)[3] > delta_target:
        ell -= 1
    delta = delta_terms(n, t, s, ell, gamma, epsilon)[3]
    note = "" if ell > 0 else "no extractable key"
    return KeyLengthReport(True, ell, delta, note)


def noise_threshold() -> float:
    """The error rate where the asymptotic key rate hits zero.

    Unique root of 2 h(gamma) = log2(1/b) in (0, 1/2), found by bisection to
    1e-10.  Numerically about 1.5 percent.
    """
    target = LOG2_INV_ROUND_VALUE
    lo, hi = 1e-12, 0.5 - 1e-12
    while hi - lo > 1e-10:
        mid = (lo + hi) / 2.0
        if 2.0 * binary_entropy(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def suggested_syndrome_length(n: int, t: int, gamma: float, epsilon: float) -> int:
    """ceil((n - t) h(gamma + epsilon)): a reasonable preset, not a mandate."""
    return int(math.ceil((n - t) * binary_entropy(gamma + epsilon)))


# ---------------------------------------------------------------------------
# privacy amplification and error correction primitives


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise ValidationError("bit arrays may only contain 0 and 1")
    return arr


def toeplitz_hash(seed_bits, input_bits, ell: int) -> np.ndarray:
    """Toeplitz matrix-vector product over GF(2).

    Output bit j is the XOR over i of seed[j + L - 1 - i] * input[i] with
    L = len(input); the seed must have exactly L + ell - 1 bits.
    """
    ell = int(ell)
    if ell < 0:
        raise DomainError("ell must be non-negative")
    x = _as_bits(input_bits)
    seed = _as_bits(seed_bits)
    length = x.size
    if ell == 0:
        if seed.size != max(length - 1, 0) and seed.size != 0:
            # zero-row matrix: accept an empty seed or the L-1 convention
            raise DimensionError(f"seed length {seed.size} invalid for ell=0")
        return np.zeros(0, dtype=np.uint8)
    if seed.size != length + ell - 1:
        raise DimensionError(f"seed length {seed.size} != input length {length} "
                             f"+ ell {ell} - 1")
    idx = np.arange(ell)[:, None] + (length - 1) - np.arange(length)[None, :]
    matrix = seed[idx]
    return ((matrix @ x.astype(np.int64)) % 2).astype(np.uint8)


def _bits_to_int(bits: np.ndarray) -> int:
    # MSB first, so ascending integers sort like lexicographic bit strings
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def _int_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)],
                    dtype=np.uint8)


class LinearCode:
    """Seeded random linear code with chunked brute-force decoding.

    The input is split into chunks of at most `chunk_len` (<= 20) bits;
    syndrome rows are distributed across chunks proportionally.  Decoding
    finds, per chunk, the bit string consistent with the syndrome that is
    nearest in Hamming distance to the received chunk; ties go to the
    lexicographically smallest string.
    """

    def __init__(self, length: int, syndrome_bits: int, seed: int,
                 chunk_len: int = 16):
        if chunk_len < 1 or chunk_len > MAX_DECODE_BLOCK:
            raise CapacityError(f"chunk_len must lie in [1, {MAX_DECODE_BLOCK}]")
        if length < 0 or syndrome_bits < 0:
            raise DomainError("length and syndrome_bits must be non-negative")
        self.length = int(length)
        self.syndrome_bits = int(syndrome_bits)
        self.seed = int(seed)
        self._chunks: list[tuple[int, int]] = []  # (start, stop)
        start = 0
        while start < self.length:
            stop = min(start + chunk_len, self.length)
            self._chunks.append((start, stop))
            start = stop
        # proportional row allocation that sums exactly to syndrome_bits
        self._rows: list[int] = []
        prev = 0
        for _, stop in self._chunks:
            boundary = (self.syndrome_bits * stop) // self.length if self.length else 0
            self._rows.append(boundary - prev)
            prev = boundary
        self._h: list[np.ndarray] = []
        for i, ((start, stop), rows) in enumerate(zip(self._chunks, self._rows)):
            rng = rng_for(self.seed, _CODE_STREAM, i)
            self._h.append(rng.integers(0, 2, size=(rows, stop - start),
                                        dtype=np.uint8))
        self._tables: dict[int, np.ndarray] = {}

    def encode(self, x) -> np.ndarray:
        x = _as_bits(x)
        if x.size != self.length:
            raise DimensionError(f"input length {x.size} != code length {self.length}")
        parts = [(h @ x[a:b].astype(np.int64)) % 2
                 for (a, b), h in zip(self._chunks, self._h)]
        if not parts:
            return np.zeros(0, dtype=np.uint8)
        return np.concatenate(parts).astype(np.uint8)

    def _candidate_syndromes(self, chunk_index: int) -> np.ndarray:
        """Syndromes of every word of one chunk, as packed integers."""
        table = self._tables.get(chunk_index)
        if table is None:
            a, b = self._chunks[chunk_index]
            width = b - a
            h = self._h[chunk_index]
            words = np.arange(1 << width, dtype=np.uint32)
            shifts = width - 1 - np.arange(width)
            bits = ((words[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
            synd = (bits @ h.T.astype(np.int64)) % 2
            weights = 1 << (h.shape[0] - 1 - np.arange(h.shape[0], dtype=np.int64))
            table = (synd @ weights).astype(np.int64) if h.shape[0] else \
                np.zeros(1 << width, dtype=np.int64)
            self._tables[chunk_index] = table
        return table

    def decode(self, y, syndrome) -> np.ndarray:
        """Nearest consistent word to y, chunk by chunk."""
        y = _as_bits(y)
        syndrome = _as_bits(syndrome)
        if y.size != self.length:
            raise DimensionError(f"received length {y.size} != code length {self.length}")
        if syndrome.size != self.syndrome_bits:
            raise DimensionError(f"syndrome length {syndrome.size} != {self.syndrome_bits}")
        out = np.empty(self.length, dtype=np.uint8)
        pos = 0
        for i, ((a, b), rows) in enumerate(zip(self._chunks, self._rows)):
            y_chunk = y[a:b]
            syn_chunk = syndrome[pos:pos + rows]
            pos += rows
            h = self._h[i]
            if rows == 0 or np.array_equal((h @ y_chunk.astype(np.int64)) % 2,
                                           syn_chunk):
                out[a:b] = y_chunk
                continue
            width = b - a
            target = _bits_to_int(syn_chunk)
            table = self._candidate_syndromes(i)
            candidates = np.nonzero(table == target)[0]
            if candidates.size == 0:
                # cannot happen for a consistent syndrome of this code, but a
                # corrupted syndrome should not crash the decoder
                out[a:b] = y_chunk
                continue
            y_int = _bits_to_int(y_chunk)
            dist = np.bitwise_count(np.bitwise_xor(candidates, y_int))
            best = candidates[int(np.argmin(dist))]
            out[a:b] = _int_to_bits(int(best), width)
        return out


# ---------------------------------------------------------------------------
# device models


class HonestNoisyDevice:
    """Classical reference device: outcomes equal Alice's bits, flipped
    independently with probability `flip_prob`."""

    max_n = 1 << 20

    def __init__(self, flip_prob: float):
        if not 0.0 <= flip_prob <= 1.0:
            raise DomainError(f"flip probability must lie in [0, 1], got {flip_prob}")
        self.flip_prob = float(flip_prob)

    def sample_round(self, theta: np.ndarray, rng: np.random.Generator):
        n = theta.size
        x = rng.integers(0, 2, size=n, dtype=np.uint8)
        flips = (rng.random(n) < self.flip_prob).astype(np.uint8)
        return x, x ^ flips


class TripartiteQuantumDevice:
    """Measurement device holding a share of a joint quantum state.

    `state` lives on Alice's 2^n-dimensional register tensored with the
    device share (and optionally a third, traced-out share); `povms` maps a
    basis string to the device's outcome POVM, or is a callable producing it.
    Exact sampling keeps this at n <= 5 rounds.
    """

    max_n = 5

    def __init__(self, n: int, state, device_dim: int,
                 povms: Mapping[str, Sequence[np.ndarray]] | Callable[[str], Sequence[np.ndarray]]):
        if n < 1 or n > self.max_n:
            raise CapacityError(f"quantum device supports 1..{self.max_n} rounds")
        self.n = int(n)
        self.device_dim = int(device_dim)
        da = 2**self.n
        state = linalg.require_density(state, "device state")
        extra, rem = divmod(state.shape[0], da * self.device_dim)
        if rem:
            raise DimensionError("state dimension incompatible with 2^n x device_dim")
        if extra > 1:
            state = linalg.partial_trace(state, (da, self.device_dim, extra), keep=[0, 1])
        self.state = state
        self._povms = povms
        self._alice_cache: dict[str, list[np.ndarray]] = {}

    def _alice_projectors(self, theta_key: str) -> list[np.ndarray]:
        projs = self._alice_cache.get(theta_key)
        if projs is None:
            h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
            singles = []
            for ch in theta_key:
                basis = np.eye(2, dtype=complex) if ch == "0" else h
                singles.append([np.outer(basis[:, b], basis[:, b].conj()) for b in (0, 1)])
            projs = []
            for x in range(2**self.n):
                bits = [(x >> (self.n - 1 - i)) & 1 for i in range(self.n)]
                projs.append(reduce(np.kron, [singles[i][b] for i, b in enumerate(bits)]))
            self._alice_cache[theta_key] = projs
        return projs

    def _povm_for(self, theta_key: str) -> Sequence[np.ndarray]:
        if callable(self._povms):
            return self._povms(theta_key)
        return self._povms[theta_key]

    def sample_round(self, theta: np.ndarray, rng: np.random.Generator):
        if theta.size != self.n:
            raise DimensionError(f"device built for n={self.n}, got {theta.size} rounds")
        theta_key = "".join(str(int(b)) for b in theta)
        projs = self._alice_projectors(theta_key)
        povm = self._povm_for(theta_key)
        if len(povm) != 2**self.n:
            raise ValidationError("device POVM must have one element per outcome string")
        dims = (2**self.n, self.device_dim)
        probs = []
        conditionals = []
        for f in projs:
            op = linalg.tensor(f, np.eye(self.device_dim)) @ self.state
            p = float(np.trace(op).real)
            probs.append(max(p, 0.0))
            conditionals.append(op)
        probs = np.asarray(probs)
        probs = probs / probs.sum()
        x_idx = int(rng.choice(len(probs), p=probs))
        sigma = linalg.hermitianize(linalg.partial_trace(conditionals[x_idx], dims, keep=[1]))
        tr = float(np.trace(sigma).real)
        sigma = sigma / tr if tr > 1e-14 else np.eye(self.device_dim) / self.device_dim
        y_probs = np.array([max(float(np.trace(sigma @ e).real), 0.0) for e in povm])
        y_probs = y_probs / y_probs.sum()
        y_idx = int(rng.choice(len(y_probs), p=y_probs))
        return _int_to_bits(x_idx, self.n), _int_to_bits(y_idx, self.n)


def epr_device(n: int) -> TripartiteQuantumDevice:
    """Honest quantum device: maximally entangled pairs measured in the
    announced basis, so outcomes match Alice's exactly."""
    da = 2**n
    v = np.zeros(da * da, dtype=complex)
    for i in range(da):
        v[i * da + i] = 1.0
    v /= np.sqrt(da)
    state = np.outer(v, v.conj())

    def povms(theta_key: str) -> Sequence[np.ndarray]:
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        singles = []
        for ch in theta_key:
            basis = np.eye(2, dtype=complex) if ch == "0" else h
            singles.append([np.outer(basis[:, b], basis[:, b].conj()) for b in (0, 1)])
        out = []
        for y in range(2**n):
            bits = [(y >> (n - 1 - i)) & 1 for i in range(n)]
            out.append(reduce(np.kron, [singles[i][b] for i, b in enumerate(bits)]))
        return out

    return TripartiteQuantumDevice(n, state, da, povms)


# ---------------------------------------------------------------------------
# protocol simulation


@dataclass(frozen=True)
class ProtocolTranscript:
    seed: int
    params: QkdParams
    theta: np.ndarray
    x: np.ndarray
    y: np.ndarray
    sample_set: tuple[int, ...]
    x_sample: np.ndarray
    aborted: bool
    syndrome: np.ndarray | None
    hash_seed: np.ndarray | None
    key: np.ndarray | None
    key_hat: np.ndarray | None

    @property
    def sample_error_rate(self) -> float:
        idx = np.asarray(self.sample_set)
        return float(np.mean(self.x[idx] != self.y[idx]))

    @property
    def full_error_rate(self) -> float:
        return float(np.mean(self.x != self.y))


def simulate_eqkd(params: QkdParams, noise_flip_prob: float = 0.0,
                  device=None, seed: int = 0) -> ProtocolTranscript:
    """One protocol run: measurement, sampled comparison with abort rule,
    syndrome correction of the unsampled rounds, and Toeplitz hashing.

    With `device=None` the classical reference device with the given flip
    probability is used; any object with `sample_round(theta, rng)` and a
    `max_n` attribute can stand in.
    """
    if device is None:
        device = HonestNoisyDevice(noise_flip_prob)
    if params.n > device.max_n:
        raise CapacityError(f"device supports at most {device.max_n} rounds, "
                            f"got n={params.n}")
    if params.ell > params.n - params.t:
        raise ValidationError("key length cannot exceed the unsampled rounds")
    rng = rng_for(seed, _ROUND_STREAM)
    theta = rng.integers(0, 2, size=params.n, dtype=np.uint8)
    x, y = device.sample_round(theta, rng)
    x = _as_bits(x)
    y = _as_bits(y)
    if x.size != params.n or y.size != params.n:
        raise DimensionError("device output length mismatch")
    sample = np.sort(rng.choice(params.n, size=params.t, replace=False))
    aborted = bool(np.mean(x[sample] != y[sample]) > params.gamma)
    base = dict(seed=seed, params=params, theta=theta, x=x, y=y,
                sample_set=tuple(int(i) for i in sample), x_sample=x[sample].copy())
    if aborted:
        return ProtocolTranscript(aborted=True, syndrome=None, hash_seed=None,
                                  key=None, key_hat=None, **base)
    rest = np.setdiff1d(np.arange(params.n), sample)
    x_rest, y_rest = x[rest], y[rest]
    code = LinearCode(params.n - params.t, params.s, seed=seed)
    syndrome = code.encode(x_rest)
    x_hat = code.decode(y_rest, syndrome)
    hash_seed = rng.integers(0, 2, size=max(x_rest.size + params.ell - 1, 0),
                             dtype=np.uint8)
    key = toeplitz_hash(hash_seed, x_rest, params.ell)
    key_hat = toeplitz_hash(hash_seed, x_hat, params.ell)
    return ProtocolTranscript(aborted=False, syndrome=syndrome, hash_seed=hash_seed,
                              key=key, key_hat=key_hat, **base)


def run_eqkd_trials(params: QkdParams, noise_flip_prob: float, trials: int,
                    seed: int = 0, device=None) -> dict:
    """Aggregate statistics over many protocol runs.

    The classical device path vectorizes the measurement and abort stages in
    fixed-size batches with per-batch derived generators, so results do not
    depend on scheduling; quantum devices fall back to one full run per trial
    with per-trial derived seeds.  Reported Hoeffding violations count trials
    whose full error rate exceeds the sampled rate by more than epsilon.
    """
    if trials < 1:
        raise DomainError("trials must be positive")
    if device is not None and not isinstance(device, HonestNoisyDevice):
        aborts = key_matches = completed = violations = 0
        for trial in range(trials):
            tr = simulate_eqkd(params, noise_flip_prob, device=device,
                               seed=(seed << 20) + trial)
            if tr.aborted:
                aborts += 1
            else:
                completed += 1
                key_matches += int(np.array_equal(tr.key, tr.key_hat))
            if tr.full_error_rate > tr.sample_error_rate + params.epsilon:
                violations += 1
        return _aggregate(params, seed, trials, aborts, completed, key_matches,
                          violations)

    flip_prob = device.flip_prob if device is not None else float(noise_flip_prob)
    if not 0.0 <= flip_prob <= 1.0:
        raise DomainError("noise flip probability must lie in [0, 1]")
    if params.ell > params.n - params.t:
        raise ValidationError("key length cannot exceed the unsampled rounds")
    n, t = params.n, params.t
    code = LinearCode(n - t, params.s, seed=seed)
    aborts = key_matches = completed = violations = 0
    done = 0
    batch_index = 0
    while done < trials:
        nb = min(_TRIAL_BATCH, trials - done)
        rng = rng_for(seed, _BATCH_STREAM, batch_index)
        x = rng.integers(0, 2, size=(nb, n), dtype=np.uint8)
        y = x ^ (rng.random((nb, n)) < flip_prob).astype(np.uint8)
        order = np.argsort(rng.random((nb, n)), axis=1)
        sample_idx = np.sort(order[:, :t], axis=1)
        rest_idx = np.sort(order[:, t:], axis=1)
        diff = (x != y)
        d_sample = np.take_along_axis(diff, sample_idx, axis=1).mean(axis=1)
        d_full = diff.mean(axis=1)
        abort_mask = d_sample > params.gamma
        violations += int(np.sum(d_full > d_sample + params.epsilon))
        aborts += int(np.sum(abort_mask))
        for row in np.nonzero(~abort_mask)[0]:
            completed += 1
            x_rest = x[row, rest_idx[row]]
            y_rest = y[row, rest_idx[row]]
            syndrome = code.encode(x_rest)
            x_hat = code.decode(y_rest, syndrome)
            hash_seed = rng.integers(0, 2, size=max(x_rest.size + params.ell - 1, 0),
                                     dtype=np.uint8)
            key = toeplitz_hash(hash_seed, x_rest, params.ell)
            key_hat = toeplitz_hash(hash_seed, x_hat, params.ell)
            key_matches += int(np.array_equal(key, key_hat))
        done += nb
        batch_index += 1
    return _aggregate(params, seed, trials, aborts, completed, key_matches,
                      violations)


def _aggregate(params: QkdParams, seed: int, trials: int, aborts: int,
               completed: int, key_matches: int, violations: int) -> dict:
    return {
        "trials": trials,
        "seed": seed,
        "aborts": aborts,
        "abort_rate": aborts / trials,
        "completed": completed,
        "key_matches": key_matches,
        "key_match_rate": key_matches / completed if completed else None,
        "hoeffding_violations": violations,
        "hoeffding_violation_rate": violations / trials,
        "hoeffding_bound": math.exp(-2.0 * params.epsilon**2 * params.t),
    }


# ---------------------------------------------------------------------------
# security-definition comparison on classical-quantum states


def secdef_gap(rho: CqEnsemble, rho_tilde: CqEnsemble,
               predicate: Callable[[str], bool],
               tau_x: np.ndarray | None = None) -> tuple[float, float]:
    """Both sides of the conditioned-security comparison

        Pr_rho[L] D(rho_XB|L, tau ⊗ rho_B|L)
            <= 5 D(rho_XB, rho~_XB) + Pr_rho~[L] D(rho~_XB|L, tau ⊗ rho~_B|L)

    for CQ states over one alphabet and an event L determined by a predicate
    on the classical symbol.  Returns (lhs, rhs); the inequality is the
    caller's to assert.
    """
    if rho.alphabet != rho_tilde.alphabet:
        raise ValidationError("the two CQ states must share an alphabet")
    if rho.dim != rho_tilde.dim:
        raise DimensionError("the two CQ states must share the side-information "
                             "dimension")
    k = len(rho.alphabet)
    if tau_x is None:
        tau_x = np.eye(k, dtype=complex) / k
    tau_x = linalg.require_density(tau_x, "tau_x")
    if tau_x.shape[0] != k:
        raise DimensionError("tau_x must match the alphabet size")

    def conditioned_term(ens: CqEnsemble) -> float:
        mask = np.array([1.0 if predicate(x) else 0.0 for x in ens.alphabet])
        prob = float((ens.weights * mask).sum())
        if prob <= 0.0:
            return 0.0
        w_cond = ens.weights * mask / prob
        cond = CqEnsemble(ens.alphabet, w_cond, dict(ens.conditionals))
        side = cond.average_state()
        return prob * linalg.trace_distance(cond.joint_density(),
                                            linalg.tensor(tau_x, side))

    lhs = conditioned_term(rho)
    between = linalg.trace_distance(rho.joint_density(), rho_tilde.joint_density())
    rhs = 5.0 * between + conditioned_term(rho_tilde)
    return lhs, rhs
