"""Dense complex linear algebra for states, POVMs and operator-norm bounds.

Everything operates on plain 2-d complex ``numpy`` arrays.  Conventions fixed
once and used everywhere:

* row-major storage, 0-based indexing; in tensor products factor 0 is the
  leftmost factor,
* the deterministic Hermitian eigensolver (``numpy.linalg.eigh``) backs every
  spectral computation; singular values of a general matrix come from the
  eigenvalues of ``M^dagger M`` with non-negativity clipping,
* Hermiticity is checked entrywise with tolerance ``HERMITIAN_ATOL``,
  positive semi-definiteness with eigenvalue floor ``PSD_EIG_FLOOR``, and
  unit trace with ``TRACE_ATOL``; properties are always checked by these
  predicates, never assumed,
* functions never mutate their inputs and always return fresh arrays.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotPsdError, ValidationError

# Tolerances, documented here once and reused across the package.
HERMITIAN_ATOL = 1e-10
PSD_EIG_FLOOR = -1e-8
TRACE_ATOL = 1e-8
EQ_ATOL = 1e-8


def as_matrix(m) -> np.ndarray:
    """Coerce input to a 2-d complex array (copies, so results are safe to keep)."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got ndim={a.ndim}")
    return a


def require_square(m: np.ndarray) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitianize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M^dagger)/2."""
    m = as_matrix(m)
    return (m + m.conj().T) / 2


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    """Max absolute entry deviation between M and M^dagger is at most `atol`."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def is_psd(m, eig_floor: float = PSD_EIG_FLOOR, atol: float = HERMITIAN_ATOL) -> bool:
    """Hermitian within `atol` and no eigenvalue below `eig_floor`."""
    m = as_matrix(m)
    if not is_hermitian(m, atol=atol):
        return False
    evals = np.linalg.eigvalsh(hermitianize(m))
    return bool(evals.min() >= eig_floor)


def is_density(m, trace_atol: float = TRACE_ATOL) -> bool:
    """PSD with unit trace within `trace_atol`."""
    m = as_matrix(m)
    if not is_psd(m):
        return False
    return bool(abs(np.trace(m) - 1.0) <= trace_atol)


def require_density(m, what: str = "state") -> np.ndarray:
    m = require_square(m)
    if not is_psd(m):
        raise ValidationError(f"{what} is not positive semi-definite within tolerance")
    if abs(np.trace(m) - 1.0) > TRACE_ATOL:
        raise ValidationError(f"{what} has trace {np.trace(m).real!r}, expected 1")
    return m


def schatten_inf_norm(m) -> float:
    """Largest singular value.

    For Hermitian PSD input this coincides with the largest eigenvalue.
    Computed as sqrt of the top eigenvalue of M^dagger M, clipped at zero.
    """
    m = require_square(m)
    gram = m.conj().T @ m
    top = float(np.linalg.eigvalsh(hermitianize(gram))[-1])
    return float(np.sqrt(max(top, 0.0)))


def trace_norm(m) -> float:
    """Trace norm of a Hermitian matrix (sum of absolute eigenvalues)."""
    m = require_square(m)
    if not is_hermitian(m):
        raise ValidationError("trace_norm implemented for Hermitian input only")
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitianize(m)))))


def psd_sqrt(a) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Idempotent input (a projector) is its own square root and is returned
    unchanged, keeping projective measurements exact.  Eigenvalues in
    [PSD_EIG_FLOOR, 0) are clipped to 0 before square-rooting; anything below
    the floor raises NotPsdError.
    """
    a = require_square(a)
    if not is_hermitian(a):
        raise ValidationError("psd_sqrt requires Hermitian input")
    if np.max(np.abs(a @ a - a)) <= 1e-12:
        return as_matrix(a)
    evals, vecs = np.linalg.eigh(hermitianize(a))
    if evals.min() < PSD_EIG_FLOOR:
        raise NotPsdError(f"eigenvalue {evals.min():g} below PSD floor {PSD_EIG_FLOOR:g}")
    root = np.sqrt(np.clip(evals, 0.0, None))
    return hermitianize((vecs * root) @ vecs.conj().T)


def trace_distance(rho, sigma) -> float:
    """(1/2) tr |rho - sigma| for density matrices of equal dimension."""
    rho = require_density(rho, "rho")
    sigma = require_density(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise DimensionError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    evals = np.linalg.eigvalsh(hermitianize(rho - sigma))
    return float(0.5 * np.sum(np.abs(evals)))


def tensor(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, leftmost factor first."""
    if not mats:
        raise DimensionError("tensor() needs at least one matrix")
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if m.shape[0] != total:
        raise DimensionError(f"matrix dimension {m.shape[0]} != product of dims {dims}")
    return dims


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in `keep`.

    `dims` lists the subsystem dimensions left to right; kept factors stay in
    their original order.  An empty `keep` returns the 1x1 matrix [[tr m]].
    """
    m = require_square(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if keep and (keep[0] < 0 or keep[-1] >= n):
        raise DimensionError(f"keep indices {keep} out of range for {n} factors")
    if not keep:
        return np.array([[np.trace(m)]], dtype=complex)
    tens = m.reshape(dims + dims)
    # contract bra/ket axis pairs of the traced factors
    for j in reversed([i for i in range(n) if i not in keep]):
        tens = np.trace(tens, axis1=j, axis2=j + tens.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep]))
    return tens.reshape(d_keep, d_keep)


def reorder_systems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Permute tensor factors so factor order[i] becomes the i-th factor."""
    m = require_square(m)
    dims = _check_dims(m, dims)
    n = len(dims)
    order = [int(i) for i in order]
    if sorted(order) != list(range(n)):
        raise ValidationError(f"order {order} is not a permutation of 0..{n - 1}")
    tens = m.reshape(dims + dims)
    axes = order + [i + n for i in order]
    out = np.transpose(tens, axes)
    d = int(np.prod(dims))
    return out.reshape(d, d)


def overlap_of_pair(a, b) -> float:
    """Squared Schatten infinity norm of sqrt(A) sqrt(B) for PSD A, B.

    Evaluated as the top eigenvalue of the Gram matrix of sqrt(A) sqrt(B),
    avoiding a lossy sqrt-then-square round trip.
    """
    m = psd_sqrt(a) @ psd_sqrt(b)
    gram = m.conj().T @ m
    return float(max(np.linalg.eigvalsh(hermitianize(gram))[-1], 0.0))


def cyclic_permutations(n: int) -> list[tuple[int, ...]]:
    """The n cyclic shifts of [0..n-1]; a mutually orthogonal permutation set."""
    if n < 1:
        raise DimensionError("n must be positive")
    return [tuple((i + k) % n for i in range(n)) for k in range(n)]


def _validate_orthogonal_perms(perms: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    if len(perms) != n:
        raise ValidationError(f"need exactly {n} permutations, got {len(perms)}")
    clean = []
    for p in perms:
        p = tuple(int(i) for i in p)
        if sorted(p) != list(range(n)):
            raise ValidationError(f"{p} is not a permutation of 0..{n - 1}")
        clean.append(p)
    for i in range(n):
        for j in range(i + 1, n):
            if any(clean[i][k] == clean[j][k] for k in range(n)):
                raise ValidationError(
                    f"permutations {i} and {j} are not orthogonal (agree at some point)"
                )
    return clean


def kittaneh_sum_bound(ops: Sequence[np.ndarray],
                       perms: Sequence[Sequence[int]]) -> tuple[float, float]:
    """Operator-sum norm bound from pairwise square-root products.

    For PSD A_1..A_N and N mutually orthogonal permutations pi^k of [N],
    returns (lhs, rhs) with

        lhs = || sum_i A_i ||,    rhs = sum_k max_i || sqrt(A_i) sqrt(A_{pi^k(i)}) ||.

    The inequality lhs <= rhs is the caller's to assert.
    """
    if not ops:
        raise DimensionError("need at least one operator")
    mats = [require_square(a) for a in ops]
    dim = mats[0].shape[0]
    for a in mats:
        if a.shape[0] != dim:
            raise DimensionError("all operators must share one dimension")
        if not is_psd(a):
            raise NotPsdError("operators must be Hermitian PSD")
    n = len(mats)
    perms = _validate_orthogonal_perms(perms, n)
    roots = [psd_sqrt(a) for a in mats]
    lhs = schatten_inf_norm(sum(mats))
    rhs = 0.0
    for p in perms:
        rhs += max(schatten_inf_norm(roots[i] @ roots[p[i]]) for i in range(n))
    return lhs, rhs
