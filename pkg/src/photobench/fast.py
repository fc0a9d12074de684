"""Logarithmic-depth ("fast") interferometers on ``m = 2^n`` modes.

Layer ``s`` (1-based, light meets layer 1 first) couples every mode with the
mode whose ``s``-th binary digit, counted from the most significant one,
differs. Each pair ``(k1, k2)``, ``k1 < k2``, gets a symmetric beam splitter

    [[tau, i sqrt(1 - tau^2)],
     [i sqrt(1 - tau^2), tau]]

preceded by a phase shifter on ``k2``. The interferometer is

    U = diag(exp(i out)) @ L_n @ ... @ L_1,   L_s = B_s @ diag(exp(i phi_s)).

``tau`` and ``phi`` are stored per layer and per mode (1-based mode ``k`` at
column ``k - 1``), so the preset phase ``phi_{s,k}`` is ``phi[s - 1, k - 1]``.
"""
import json
import math
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np

from .linalg import MatrixFormatError


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def fast_pairs(n, s):
    """Pairs ``(a + 2^s b, a + 2^s b + 2^(s-1))`` for ``a = 1..2^(s-1)``, ``b = 0..2^(n-s)-1``.

    These are the mode pairs that differ in the binary digit of weight
    ``2^(s-1)``; the pairs coupled by physical layer ``s`` of a
    :class:`FastParams` are ``fast_pairs(n, n + 1 - s)``.
    """
    n = _check_n(n)
    if not 1 <= s <= n:
        raise ValueError(f"layer s must lie in 1..{n}, got {s}")
    half = 2 ** (s - 1)
    return [
        (a + 2 ** s * b, a + 2 ** s * b + half)
        for b in range(2 ** (n - s))
        for a in range(1, half + 1)
    ]


def layer_pairs(n, s):
    """1-based mode pairs coupled by physical layer ``s`` (offset ``2^(n-s)``)."""
    return sorted(fast_pairs(n, n + 1 - s))


@dataclass(frozen=True)
class FastParams:
    n: int
    tau: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    output_phases: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        n = _check_n(self.n)
        m = 2 ** n
        tau = np.asarray(self.tau, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if tau.shape != (n, m) or phi.shape != (n, m):
            raise ValueError(f"tau and phi must have shape ({n}, {m}), got {tau.shape} and {phi.shape}")
        if np.any(tau < 0) or np.any(tau > 1):
            raise ValueError("transmissivities must lie in [0, 1]")
        for s in range(1, n + 1):
            for k1, k2 in layer_pairs(n, s):
                if tau[s - 1, k1 - 1] != tau[s - 1, k2 - 1]:
                    raise ValueError(f"layer {s}: modes {k1}, {k2} share one splitter but have different tau")
                if phi[s - 1, k1 - 1] != 0:
                    raise ValueError(f"layer {s}: phase on mode {k1} must sit on the pair's second mode {k2}")
        out = np.zeros(m) if self.output_phases is None else np.asarray(self.output_phases, dtype=float)
        if out.shape != (m,):
            raise ValueError(f"output_phases must have length {m}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "output_phases", out)

    @property
    def m(self):
        return 2 ** self.n

    def cells(self):
        """Yield ``(s, k1, k2, tau, phi)`` for every splitter, layer by layer."""
        for s in range(1, self.n + 1):
            for k1, k2 in layer_pairs(self.n, s):
                yield s, k1, k2, self.tau[s - 1, k1 - 1], self.phi[s - 1, k2 - 1]


def random_fast_params(n, rng=None, with_output=True) -> FastParams:
    """Uniformly random splitter and phase settings, mostly for testing."""
    rng = np.random.default_rng(rng)
    m = 2 ** n
    tau = np.zeros((n, m))
    phi = np.zeros((n, m))
    for s in range(1, n + 1):
        for k1, k2 in layer_pairs(n, s):
            tau[s - 1, k1 - 1] = tau[s - 1, k2 - 1] = rng.uniform(0, 1)
            phi[s - 1, k2 - 1] = rng.uniform(-math.pi, math.pi)
    out = rng.uniform(-math.pi, math.pi, m) if with_output else None
    return FastParams(n, tau, phi, out)


def splitter_block(tau):
    r = math.sqrt(max(0.0, 1.0 - tau * tau))
    return np.array([[tau, 1j * r], [1j * r, tau]])


def fast_layer_matrix(params: FastParams, s) -> np.ndarray:
    if not 1 <= s <= params.n:
        raise ValueError(f"layer s must lie in 1..{params.n}, got {s}")
    m = params.m
    L = np.zeros((m, m), dtype=complex)
    for k1, k2 in layer_pairs(params.n, s):
        a, b = k1 - 1, k2 - 1
        blk = splitter_block(params.tau[s - 1, a])
        L[[a, a, b, b], [a, b, a, b]] = blk.ravel()
    return L * np.exp(1j * params.phi[s - 1])[None, :]


def fast_unitary_product(params: FastParams) -> np.ndarray:
    U = np.eye(params.m, dtype=complex)
    for s in range(1, params.n + 1):
        U = fast_layer_matrix(params, s) @ U
    return np.exp(1j * params.output_phases)[:, None] * U


def _digits(x, n):
    # digits[..., r - 1] is the r-th binary digit of x, most significant first.
    return (np.asarray(x)[..., None] >> (n - 1 - np.arange(n))) & 1


def fast_unitary_closed_form(params: FastParams) -> np.ndarray:
    """Element-wise formula for the fast interferometer.

    For 0-based output ``a`` and input ``b`` with digits ``a_r``, ``b_r``
    (most significant first) and ``alpha_r = 2^(n-r)``::

        U[a, b] = exp(i out_a + i sum_r b_r phi[r, xi_r] + i pi/2 sum_r (a_r xor b_r))
                  * prod_s cos(theta[s, f_s] - pi/2 |a_s - b_s|)

    with ``theta = arccos(tau)``, ``xi_r = 1 + alpha_r + b mod alpha_r +
    floor(a / (2 alpha_r)) 2 alpha_r`` the mode entering layer ``r`` and
    ``f_s = 1 + b + sum_{r <= s} (a_r - b_r) alpha_r`` the mode leaving layer
    ``s`` (both 1-based).
    """
    n, m = params.n, params.m
    a = np.arange(m)[:, None] * np.ones((1, m), dtype=int)
    b = np.ones((m, 1), dtype=int) * np.arange(m)[None, :]
    ad, bd = _digits(a, n), _digits(b, n)
    alpha = 2 ** (n - np.arange(1, n + 1))
    theta = np.arccos(np.clip(params.tau, 0.0, 1.0))

    phase = params.output_phases[a] + (math.pi / 2) * (ad ^ bd).sum(axis=-1)
    amp = np.ones((m, m))
    f = b.copy()
    for r in range(1, n + 1):
        al = alpha[r - 1]
        xi = 1 + al + b % al + (a // (2 * al)) * 2 * al
        phase = phase + bd[..., r - 1] * params.phi[r - 1, xi - 1]
        f = f + (ad[..., r - 1] - bd[..., r - 1]) * al
        chi = theta[r - 1, f] - (math.pi / 2) * np.abs(ad[..., r - 1] - bd[..., r - 1])
        amp = amp * np.cos(chi)
    return amp * np.exp(1j * phase)


def check_closed_form(params: FastParams, tol=1e-9):
    """Compare the element formula with the layer product.

    Returns the per-entry absolute discrepancy; raises ``AssertionError`` if
    any entry exceeds ``tol``.
    """
    diff = np.abs(fast_unitary_closed_form(params) - fast_unitary_product(params))
    if diff.max() > tol:
        bad = np.argwhere(diff > tol)
        raise AssertionError(f"closed form disagrees with layer product at {len(bad)} entries, e.g. {bad[:5].tolist()}")
    return diff


def fourier_matrix(m) -> np.ndarray:
    """``U[a, b] = exp(2 pi i a b / m) / sqrt(m)`` with 0-based ``a, b``."""
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    k = np.arange(int(m))
    return np.exp(2j * np.pi * np.outer(k, k) / m) / math.sqrt(m)


def sylvester_matrix(m) -> np.ndarray:
    """Normalised Sylvester-Hadamard matrix built by the block recursion."""
    if int(m) != m or m < 1 or (int(m) & (int(m) - 1)):
        raise ValueError(f"Sylvester matrices need a power-of-two size, got {m!r}")
    S = np.ones((1, 1))
    while S.shape[0] < m:
        S = np.block([[S, S], [S, -S]])
    return S.astype(complex) / math.sqrt(m)


def fourier_twiddles(n) -> np.ndarray:
    """Layer phases of the radix-2 decimation-in-frequency Fourier network.

    These are the phases for *real* Hadamard splitters ``[[1, 1], [1, -1]]``:
    before layer ``s`` the mode ``x`` whose ``s``-th digit is 1 receives
    ``2 pi sum_{r < s} x_r 2^(r - 1 - s)``. Returned with the same
    ``(n, 2^n)`` layout as :attr:`FastParams.phi`.
    """
    n = _check_n(n)
    m = 2 ** n
    x = np.arange(m)
    d = _digits(x, n)
    phi = np.zeros((n, m))
    for s in range(1, n + 1):
        acc = np.zeros(m)
        for r in range(1, s):
            acc += d[:, r - 1] * 2.0 ** (r - 1 - s)
        phi[s - 1] = np.where(d[:, s - 1] == 1, 2 * math.pi * acc, 0.0)
    return wrap(phi)


def wrap(x):
    return math.pi - np.mod(math.pi - np.asarray(x, dtype=float), 2 * math.pi)


def hadamard_to_symmetric(n, twiddles) -> FastParams:
    """Re-express a real-Hadamard-splitter network with symmetric splitters.

    Each 50:50 cell ``H diag(1, e^{iq})`` is rebuilt as
    ``diag(d1, d2) B diag(1, e^{i phi}) diag(c1, c2)``, where ``c`` are phases
    carried in from earlier layers: ``d1 = c1``, ``d2 = i c1`` and
    ``e^{i phi} = -i c1 e^{iq} / c2``. The carry left after the last layer is
    cancelled by the output phases, so the two networks are equal.
    """
    n = _check_n(n)
    m = 2 ** n
    twiddles = np.asarray(twiddles, dtype=float)
    carry = np.ones(m, dtype=complex)
    phi = np.zeros((n, m))
    for s in range(1, n + 1):
        for k1, k2 in layer_pairs(n, s):
            a, b = k1 - 1, k2 - 1
            c1, c2 = carry[a], carry[b]
            phi[s - 1, b] = np.angle(-1j * c1 * np.exp(1j * twiddles[s - 1, b]) / c2)
            carry[a], carry[b] = c1, 1j * c1
    tau = np.full((n, m), 1 / math.sqrt(2))
    return FastParams(n, tau, phi, wrap(-np.angle(carry)))


def fourier_preset(n) -> FastParams:
    """Fast network equal to a row relabeling of :func:`fourier_matrix` (2^n).

    The network is the decimation-in-frequency butterfly of
    :func:`fourier_twiddles` (which for ``n = 3`` puts ``pi/2`` on modes 7, 8
    of layer 2 and ``pi/2, pi/4, 3 pi/4`` on modes 4, 6, 8 of layer 3),
    rewritten for symmetric splitters. Outputs come out in bit-reversed order.
    """
    return hadamard_to_symmetric(n, fourier_twiddles(n))


def sylvester_preset(n) -> FastParams:
    """All splitters balanced, all phases zero."""
    n = _check_n(n)
    m = 2 ** n
    return FastParams(n, np.full((n, m), 1 / math.sqrt(2)), np.zeros((n, m)))


@dataclass(frozen=True)
class Relabeling:
    """``B = diag(row_phases) @ A[perm] @ diag(col_phases)`` (0-based ``perm``)."""

    perm: tuple
    row_phases: np.ndarray = field(default=None, repr=False)
    col_phases: np.ndarray = field(default=None, repr=False)

    def apply(self, A):
        out = np.asarray(A)[list(self.perm)]
        if self.row_phases is not None:
            out = np.exp(1j * self.row_phases)[:, None] * out
        if self.col_phases is not None:
            out = out * np.exp(1j * self.col_phases)[None, :]
        return out


def _match_rows(A, B, tol, row_phases):
    m = A.shape[0]
    used = np.zeros(m, dtype=bool)
    perm = []
    phases = np.zeros(m)
    for i in range(m):
        hit = None
        for j in np.flatnonzero(~used):
            if row_phases:
                ov = np.vdot(A[j], B[i])
                alpha = np.angle(ov) if abs(ov) > 0 else 0.0
                if np.abs(np.exp(1j * alpha) * A[j] - B[i]).max() <= tol:
                    hit, phases[i] = j, alpha
                    break
            elif np.abs(A[j] - B[i]).max() <= tol:
                hit = j
                break
        if hit is None:
            return None
        used[hit] = True
        perm.append(int(hit))
    return tuple(perm), phases


def find_relabeling(A, B, phases=None, tol=1e-8):
    """Find a row permutation (and optionally phases) taking ``A`` to ``B``.

    ``phases`` is ``None`` (pure relabeling), ``"rows"`` (per-output phases)
    or ``"both"`` (per-output and per-input phases). Returns a
    :class:`Relabeling` or ``None``. In ``"both"`` mode the column phases are
    fixed by matching the first row of ``B`` against every row of ``A``, so
    that row must not contain zeros where ``A`` has none.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    if phases is None:
        hit = _match_rows(A, B, tol, False)
        return None if hit is None else Relabeling(hit[0])
    if phases == "rows":
        hit = _match_rows(A, B, tol, True)
        return None if hit is None else Relabeling(hit[0], hit[1])
    if phases != "both":
        raise ValueError(f"phases must be None, 'rows' or 'both', got {phases!r}")
    for j in range(A.shape[0]):
        ratio = np.where(np.abs(A[j]) > tol, B[0] / np.where(np.abs(A[j]) > tol, A[j], 1), 1)
        if np.abs(np.abs(ratio) - 1).max() > 1e-6:
            continue
        col = np.angle(ratio)
        hit = _match_rows(A * np.exp(1j * col)[None, :], B, tol, True)
        if hit is not None:
            return Relabeling(hit[0], hit[1], col)
    return None


def brute_force_relabeling(A, B, tol=1e-8):
    """Exhaustive permutation search; the oracle for :func:`find_relabeling` on small ``m``."""
    A = np.asarray(A)
    for perm in permutations(range(A.shape[0])):
        if np.abs(A[list(perm)] - B).max() <= tol:
            return perm
    return None


def params_to_json(p: FastParams) -> dict:
    return {
        "n": p.n,
        "tau": p.tau.tolist(),
        "phi": p.phi.tolist(),
        "output_phases": p.output_phases.tolist(),
    }


def params_from_json(data) -> FastParams:
    if not isinstance(data, dict):
        raise MatrixFormatError("fast-parameter document must be a JSON object")
    for key in ("n", "tau", "phi"):
        if key not in data:
            raise MatrixFormatError(f"missing required key '{key}'", field=key)
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFormatError(f"'n' must be a positive integer, got {n!r}", field="n")
    arrays = {}
    for key in ("tau", "phi"):
        try:
            arrays[key] = np.asarray(data[key], dtype=float)
        except (TypeError, ValueError):
            raise MatrixFormatError(f"'{key}' must be a nested list of numbers", field=key) from None
        if arrays[key].shape != (n, 2 ** n):
            raise MatrixFormatError(f"'{key}' has shape {arrays[key].shape}, expected ({n}, {2 ** n})", field=key)
    out = data.get("output_phases")
    try:
        return FastParams(n, arrays["tau"], arrays["phi"], out)
    except ValueError as exc:
        raise MatrixFormatError(str(exc), field="tau" if "tau" in str(exc) else "phi") from None


def save_params(path, p):
    Path(path).write_text(json.dumps(params_to_json(p), indent=1))


def load_params(path) -> FastParams:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    return params_from_json(data)
