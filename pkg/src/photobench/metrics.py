"""Figures of merit: loss-normalised process fidelity and multiphoton TVD.

Multiphoton distributions cover collision-free outputs only and are *not*
renormalised, so for a unitary ``T`` and ``n >= 2`` they sum to less than 1.
"""
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .linalg import MAX_PERMANENT_SIZE, as_matrix, permanent_batch

INPUT_BUDGET = 5000
SAMPLED_INPUTS = 1000


@dataclass(frozen=True)
class PhotonConfig:
    """``n`` photons in distinct 0-based ``input_modes`` of an ``m``-mode device."""

    m: int
    input_modes: tuple

    def __post_init__(self):
        modes = tuple(int(k) for k in self.input_modes)
        if not modes:
            raise ValueError("need at least one photon")
        if any(b <= a for a, b in zip(modes, modes[1:])):
            raise ValueError(f"input modes must be strictly increasing, got {modes}")
        if modes[0] < 0 or modes[-1] >= self.m:
            raise ValueError(f"input modes must lie in 0..{self.m - 1}")
        object.__setattr__(self, "input_modes", modes)

    @property
    def n(self):
        return len(self.input_modes)


def fidelity(U, U_imp) -> float:
    """``|Tr(U_imp^dagger U)|^2 / (m Tr(U_imp^dagger U_imp))``."""
    U = as_matrix(U)
    U_imp = as_matrix(U_imp)
    if U.shape != U_imp.shape:
        raise ValueError(f"dimension mismatch {U.shape} vs {U_imp.shape}")
    norm = float(np.vdot(U_imp, U_imp).real)
    if norm <= 0:
        raise ValueError("imperfect transfer matrix is zero")
    return abs(np.vdot(U_imp, U)) ** 2 / (U.shape[0] * norm)


def output_sets(m, n):
    """All collision-free ``n``-photon output sets, lexicographic, as an ``(C(m,n), n)`` array."""
    return np.array(list(combinations(range(m), n)), dtype=int).reshape(-1, n)


def output_distribution(T, photons: PhotonConfig) -> np.ndarray:
    """Probabilities of every collision-free output set (ordered as :func:`output_sets`)."""
    T = as_matrix(T)
    if photons.m != T.shape[0]:
        raise ValueError(f"photon config has m = {photons.m}, matrix has {T.shape[0]}")
    if photons.n > MAX_PERMANENT_SIZE:
        raise ValueError(f"n = {photons.n} photons exceeds permanent limit {MAX_PERMANENT_SIZE}")
    return _distributions(T, output_sets(T.shape[0], photons.n), np.array([photons.input_modes]))[0]


def _distributions(T, outs, ins):
    # (inputs, outputs) stack of n x n submatrices T[out_i, in_j]
    sub = T[outs[None, :, :, None], ins[:, None, None, :]]
    return np.abs(permanent_batch(sub)) ** 2


def tvd(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def choose_inputs(m, n, budget=INPUT_BUDGET, sampled=SAMPLED_INPUTS, rng=None):
    """All ``C(m, n)`` input sets, or ``sampled`` distinct random ones when that exceeds ``budget``."""
    total = comb(m, n)
    if total <= budget:
        return output_sets(m, n)
    rng = np.random.default_rng(rng)
    picked = set()
    while len(picked) < min(sampled, total):
        picked.add(tuple(sorted(rng.choice(m, n, replace=False).tolist())))
    return np.array(sorted(picked), dtype=int)


def mean_tvd(U, U_imp, n, budget=INPUT_BUDGET, sampled=SAMPLED_INPUTS, rng=0, inputs=None, chunk=256) -> float:
    """Average TVD between ideal and imperfect ``n``-photon distributions over inputs.

    Every collision-free input is used when there are at most ``budget`` of
    them; otherwise ``sampled`` inputs are drawn with ``rng``. An explicit
    ``(k, n)`` array of ``inputs`` overrides both.
    """
    U = as_matrix(U)
    U_imp = as_matrix(U_imp)
    if U.shape != U_imp.shape:
        raise ValueError(f"dimension mismatch {U.shape} vs {U_imp.shape}")
    m = U.shape[0]
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n = {n}")
    ins = choose_inputs(m, n, budget, sampled, rng) if inputs is None else np.asarray(inputs, dtype=int)
    outs = output_sets(m, n)
    total = 0.0
    for start in range(0, len(ins), chunk):
        block = ins[start:start + chunk]
        d = _distributions(U, outs, block) - _distributions(U_imp, outs, block)
        total += 0.5 * np.abs(d).sum()
    return total / len(ins)
