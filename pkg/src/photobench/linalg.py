"""Dense complex linear algebra for interferometer transfer matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The helpers here
validate the two contracts used throughout the package: unitary targets and
sub-unitary (lossy) transfer matrices.
"""
import json
import math
from itertools import permutations
from pathlib import Path

import numpy as np

UNITARY_TOL = 1e-10
SUBUNITARY_TOL = 1e-9
MAX_PERMANENT_SIZE = 20


class MatrixFormatError(ValueError):
    """Raised when a matrix file or array does not meet its contract.

    ``field`` names the offending key so command-line callers can report it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D complex array."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise MatrixFormatError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise MatrixFormatError("matrix has non-finite entries")
    return M


def _require_square(M):
    if M.shape[0] != M.shape[1]:
        raise MatrixFormatError(f"expected a square matrix, got shape {M.shape}")


def is_unitary(M, tol=UNITARY_TOL) -> bool:
    """True iff ``max |M^dagger M - I| <= tol``."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    err = np.abs(M.conj().T @ M - np.eye(M.shape[0]))
    return bool(err.max() <= tol)


def as_unitary(M, tol=UNITARY_TOL) -> np.ndarray:
    """Validate and return ``M`` as a unitary matrix."""
    M = as_matrix(M)
    _require_square(M)
    if not is_unitary(M, tol):
        err = np.abs(M.conj().T @ M - np.eye(M.shape[0])).max()
        raise MatrixFormatError(f"matrix is not unitary (max deviation {err:.3e} > {tol:g})")
    return M


def as_lossy_transfer(M, tol=SUBUNITARY_TOL) -> np.ndarray:
    """Validate a square transfer matrix whose largest singular value is <= 1."""
    M = as_matrix(M)
    _require_square(M)
    smax = max_singular_value(M)
    if smax > 1 + tol:
        raise MatrixFormatError(f"transfer matrix amplifies (max singular value {smax:.12f})")
    return M


def haar_random_unitary(m: int, rng=None) -> np.ndarray:
    """Sample an ``m x m`` unitary from the Haar measure.

    A complex Ginibre matrix is QR-factorised and the columns of Q are
    multiplied by the phases of the diagonal of R, which removes the bias
    the bare QR factorisation introduces.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    rng = np.random.default_rng(rng)
    Z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def dagger(M) -> np.ndarray:
    return np.asarray(M).conj().T


def matmul(A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B


def scale_rows(M, factors) -> np.ndarray:
    """Multiply row ``k`` of ``M`` by the real factor ``factors[k]``."""
    M = np.asarray(M, dtype=complex)
    factors = np.asarray(factors, dtype=float)
    if factors.shape != (M.shape[0],):
        raise ValueError(f"need {M.shape[0]} row factors, got shape {factors.shape}")
    if np.any(factors > 1.0) or np.any(factors < 0.0):
        raise ValueError("row factors must lie in [0, 1]")
    return M * factors[:, None]


def max_singular_value(M) -> float:
    return float(np.linalg.norm(np.asarray(M), 2))


def permanent_naive(M) -> complex:
    """Permanent as the explicit sum over all ``n!`` permutations."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    rows = np.arange(n)
    return complex(sum(np.prod(M[rows, list(p)]) for p in permutations(range(n))))


def _gray_flips(n):
    # Bit index flipped at step k (k = 1 .. 2^n - 1) of the reflected Gray code.
    k = np.arange(1, 2 ** n)
    return (np.log2(k & -k)).astype(int)


def permanent(M) -> complex:
    """Matrix permanent via Glynn's formula with Gray-code ordering.

    Cost is ``O(2^(n-1) n)``. Matrices up to 3x3 use the direct permutation
    sum.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise ValueError(f"permanent limited to n <= {MAX_PERMANENT_SIZE}, got n = {n}")
    if n == 0:
        return 1.0 + 0j
    if n <= 3:
        return permanent_naive(M)
    return complex(permanent_batch(M[None])[0])


def permanent_batch(M) -> np.ndarray:
    """Permanents of a stack of square matrices, shape ``(..., n, n)``.

    Glynn's formula: ``perm(M) = 2^(1-n) sum_d (prod_k d_k) prod_j sum_i d_i M_ij``
    over sign vectors ``d`` with ``d_0 = +1``. The ``2^(n-1)`` sign vectors are
    visited in Gray-code order so each step updates the column sums with a
    single row.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[-1]
    if M.shape[-2] != n:
        raise ValueError(f"permanent needs square matrices, got shape {M.shape}")
    if n > MAX_PERMANENT_SIZE:
        raise ValueError(f"permanent limited to n <= {MAX_PERMANENT_SIZE}, got n = {n}")
    if n == 0:
        return np.ones(M.shape[:-2], dtype=complex)
    if n == 1:
        return M[..., 0, 0].copy()
    colsum = M.sum(axis=-2)
    total = np.prod(colsum, axis=-1)
    signs = np.ones(n)
    sign = 1.0
    for bit in _gray_flips(n - 1):
        row = bit + 1
        signs[row] = -signs[row]
        colsum = colsum + 2.0 * signs[row] * M[..., row, :]
        sign = -sign
        total = total + sign * np.prod(colsum, axis=-1)
    return total / 2 ** (n - 1)


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"m": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(data, require_unitary=False, tol=UNITARY_TOL) -> np.ndarray:
    """Parse the ``{"m", "re", "im"}`` matrix format, validating the shape."""
    if not isinstance(data, dict):
        raise MatrixFormatError("matrix document must be a JSON object")
    for key in ("m", "re", "im"):
        if key not in data:
            raise MatrixFormatError(f"missing required key '{key}'", field=key)
    m = data["m"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise MatrixFormatError(f"'m' must be a positive integer, got {m!r}", field="m")
    parts = {}
    for key in ("re", "im"):
        try:
            arr = np.asarray(data[key], dtype=float)
        except (TypeError, ValueError):
            raise MatrixFormatError(f"'{key}' must be a nested list of numbers", field=key) from None
        if arr.shape != (m, m):
            raise MatrixFormatError(f"'{key}' has shape {arr.shape}, expected ({m}, {m})", field=key)
        parts[key] = arr
    M = as_matrix(parts["re"] + 1j * parts["im"])
    if require_unitary:
        M = as_unitary(M, tol)
    return M


def save_matrix(path, M):
    Path(path).write_text(json.dumps(matrix_to_json(M)))


def load_matrix(path, require_unitary=False, tol=UNITARY_TOL) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_json(data, require_unitary=require_unitary, tol=tol)
