"""Monte-Carlo realization of interferometers as noisy Mach-Zehnder meshes.

Every two-mode cell, whatever the architecture, is rebuilt as a
Mach-Zehnder unit

    MZI = -i BS(tau2) diag(e^{-i omega}, e^{i omega}) BS(tau1) diag(1, e^{i phi})

with ideal ``tau1 = tau2 = 2^(-1/2)``. The splitter transmissivities and the
two phases are then redrawn around their ideal values, and a loss of
``eta_db`` decibels is applied to both outputs of every cell.

A balanced MZI evaluates to ``[[-sin w, e^{i phi} cos w], [cos w, e^{i phi} sin w]]``,
which is the decomposition cell ``T(phi', omega)`` with ``phi' = -phi``.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .decomposition import DecompositionPlan
from .fast import FastParams, splitter_block

BALANCED = 1 / math.sqrt(2)
SCHEME_CODES = {"reck": 0, "clements": 1, "fast": 2}
_ZERO = 1e-14


@dataclass(frozen=True)
class MziCell:
    """One Mach-Zehnder unit on 1-based modes ``k`` and ``k2`` (default ``k + 1``)."""

    k: int
    omega: float
    phi: float
    tau1: float = BALANCED
    tau2: float = BALANCED
    k2: int = None

    def __post_init__(self):
        if self.k2 is None:
            object.__setattr__(self, "k2", self.k + 1)
        if not 1 <= self.k < self.k2:
            raise ValueError(f"invalid mode pair ({self.k}, {self.k2})")
        object.__setattr__(self, "tau1", float(np.clip(self.tau1, 0.0, 1.0)))
        object.__setattr__(self, "tau2", float(np.clip(self.tau2, 0.0, 1.0)))


@dataclass(frozen=True)
class NoiseConfig:
    sigma_bs: float = 0.0
    sigma_ps: float = 0.0
    eta_db: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("sigma_bs", "sigma_ps", "eta_db"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be a finite number >= 0, got {v!r}")

    @property
    def loss_amplitude(self):
        return 10.0 ** (-self.eta_db / 20.0)


def mzi_blocks(tau1, tau2, omega, phi):
    """Stacked 2x2 MZI blocks, shape ``(..., 2, 2)``, for broadcastable parameters."""
    tau1, tau2, omega, phi = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (tau1, tau2, omega, phi)))
    r1 = np.sqrt(np.clip(1 - tau1 ** 2, 0, None))
    r2 = np.sqrt(np.clip(1 - tau2 ** 2, 0, None))
    em, ep, eph = np.exp(-1j * omega), np.exp(1j * omega), np.exp(1j * phi)
    # BS(t2) @ diag(em, ep) @ BS(t1), expanded
    a = tau2 * em * tau1 - r2 * ep * r1
    b = 1j * (tau2 * em * r1 + r2 * ep * tau1)
    c = 1j * (r2 * em * tau1 + tau2 * ep * r1)
    d = -r2 * em * r1 + tau2 * ep * tau1
    out = np.empty(tau1.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = -1j * a
    out[..., 0, 1] = -1j * b * eph
    out[..., 1, 0] = -1j * c
    out[..., 1, 1] = -1j * d * eph
    return out


def mzi_block(cell: MziCell) -> np.ndarray:
    return mzi_blocks(cell.tau1, cell.tau2, cell.omega, cell.phi)


def mzi_matrix(cell: MziCell, m: int) -> np.ndarray:
    """Embed the cell's MZI block in an ``m``-mode identity."""
    if cell.k2 > m:
        raise ValueError(f"cell modes ({cell.k}, {cell.k2}) exceed m = {m}")
    U = np.eye(m, dtype=complex)
    a, b = cell.k - 1, cell.k2 - 1
    U[np.ix_([a, b], [a, b])] = mzi_block(cell)
    return U


def perturb_cell(cell: MziCell, cfg: NoiseConfig, rng) -> MziCell:
    """Redraw the cell's parameters; draw order is ``tau1, tau2, omega, phi``."""
    z = rng.standard_normal(4)
    return replace(
        cell,
        tau1=cell.tau1 + cfg.sigma_bs * z[0],
        tau2=cell.tau2 + cfg.sigma_bs * z[1],
        omega=cell.omega + cfg.sigma_ps * z[2],
        phi=cell.phi + cfg.sigma_ps * z[3],
    )


@dataclass(frozen=True)
class Mesh:
    """An ideal MZI mesh in physical order with its output phase screen.

    ``k1``, ``k2`` are 0-based mode indices; ``layers`` lists cell indices
    that can be applied simultaneously, in order.
    """

    scheme: str
    m: int
    k1: np.ndarray
    k2: np.ndarray
    omega: np.ndarray
    phi: np.ndarray
    output_phases: np.ndarray
    layers: tuple

    @property
    def size(self):
        return len(self.k1)

    def cells(self):
        return [
            MziCell(int(a) + 1, float(w), float(p), k2=int(b) + 1)
            for a, b, w, p in zip(self.k1, self.k2, self.omega, self.phi)
        ]

    def depth(self):
        return len(self.layers)


def _schedule_pairs(k1, k2, m):
    busy = np.zeros(m, dtype=int)
    index = []
    for a, b in zip(k1, k2):
        layer = max(busy[a], busy[b])
        busy[a] = busy[b] = layer + 1
        index.append(layer)
    index = np.asarray(index, dtype=int)
    depth = int(index.max()) + 1 if len(index) else 0
    return tuple(np.flatnonzero(index == s) for s in range(depth))


def _split_into_mzi(W, tol=_ZERO):
    """Write a 2x2 unitary as ``diag(y1, y2) @ MZI(omega, phi)`` (balanced MZI)."""
    s, c = abs(W[0, 0]), abs(W[1, 0])
    omega = math.atan2(s, c)
    if c <= tol:
        y1, y2 = -W[0, 0] / s, W[1, 1] / s
        phi = 0.0
    elif s <= tol:
        y1, y2 = W[0, 1] / c, W[1, 0] / c
        phi = 0.0
    else:
        y1, y2 = -W[0, 0] / s, W[1, 0] / c
        phi = float(np.angle(W[0, 1] / (y1 * c)))
    return omega, phi, y1 / abs(y1), y2 / abs(y2)


def compile_mesh(design) -> Mesh:
    """Translate a decomposition plan or fast parameter set into an ideal MZI mesh.

    Decomposition cells map one-to-one with the sign bridge ``phi -> -phi``.
    Fast cells ``BS(tau) diag(1, e^{i phi})`` are split as
    ``diag(y) @ MZI``; the leftover phases ``y`` are pushed onto the
    following cells and finally into the output phase screen, so the
    noiseless mesh reproduces the design exactly.
    """
    if isinstance(design, DecompositionPlan):
        cells = design.ordered_cells
        m = design.m
        k1 = np.array([c.k - 1 for c in cells], dtype=int)
        return Mesh(
            design.scheme,
            m,
            k1,
            k1 + 1,
            np.array([c.omega for c in cells], dtype=float),
            np.array([-c.phi for c in cells], dtype=float),
            np.asarray(design.output_phases, dtype=float).copy(),
            _schedule_pairs(k1, k1 + 1, m),
        )
    if isinstance(design, FastParams):
        m = design.m
        carry = np.ones(m, dtype=complex)
        k1, k2, om, ph = [], [], [], []
        for s, a, b, tau, phi in design.cells():
            a, b = a - 1, b - 1
            G = splitter_block(tau) @ np.diag([1.0, np.exp(1j * phi)])
            w, p, y1, y2 = _split_into_mzi(G * carry[[a, b]][None, :])
            carry[a], carry[b] = y1, y2
            k1.append(a)
            k2.append(b)
            om.append(w)
            ph.append(p)
        k1, k2 = np.array(k1, dtype=int), np.array(k2, dtype=int)
        out = design.output_phases + np.angle(carry)
        return Mesh("fast", m, k1, k2, np.array(om), np.array(ph), out, _schedule_pairs(k1, k2, m))
    if isinstance(design, Mesh):
        return design
    raise TypeError(f"cannot realize object of type {type(design).__name__}")


def ideal_unitary(design) -> np.ndarray:
    """The noiseless, lossless transfer matrix of a design."""
    return realize_noisy(design, NoiseConfig(), np.random.default_rng(0))


def realize_noisy(design, cfg: NoiseConfig, rng=None) -> np.ndarray:
    """Sample one imperfect transfer matrix of ``design``.

    Noise is drawn as one ``(4, N)`` standard-normal block in the order
    ``tau1, tau2, omega, phi``; transmissivities are clamped to ``[0, 1]``.
    The output phase screen is applied without noise or loss.
    """
    mesh = compile_mesh(design)
    rng = np.random.default_rng(cfg.seed if rng is None else rng)
    n_cells = mesh.size
    tau1 = np.full(n_cells, BALANCED)
    tau2 = np.full(n_cells, BALANCED)
    omega, phi = mesh.omega, mesh.phi
    if n_cells and (cfg.sigma_bs > 0 or cfg.sigma_ps > 0):
        z = rng.standard_normal((4, n_cells))
        tau1 = np.clip(tau1 + cfg.sigma_bs * z[0], 0.0, 1.0)
        tau2 = np.clip(tau2 + cfg.sigma_bs * z[1], 0.0, 1.0)
        omega = omega + cfg.sigma_ps * z[2]
        phi = phi + cfg.sigma_ps * z[3]
    blocks = mzi_blocks(tau1, tau2, omega, phi) * cfg.loss_amplitude
    U = np.eye(mesh.m, dtype=complex)
    for idx in mesh.layers:
        a, b = mesh.k1[idx], mesh.k2[idx]
        B = blocks[idx]
        ra, rb = U[a], U[b]
        U[a] = B[:, 0, 0, None] * ra + B[:, 0, 1, None] * rb
        U[b] = B[:, 1, 0, None] * ra + B[:, 1, 1, None] * rb
    return np.exp(1j * mesh.output_phases)[:, None] * U


def target_rng(seed, m, trial):
    """Stream for Haar target ``trial`` of size ``m``; shared by every scheme and noise level."""
    return np.random.default_rng([seed, 0, m, trial])


def noise_rng(seed, scheme, m, point, trial):
    """Stream for the noise of ``trial`` at grid point ``point`` of ``scheme`` on ``m`` modes."""
    return np.random.default_rng([seed, 1, SCHEME_CODES[scheme], m, point, trial])
