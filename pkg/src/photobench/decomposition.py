"""Triangular (Reck) and square (Clements) decompositions into two-mode cells.

Every cell is the two-mode unitary

    T_k(phi, omega) = [[-sin(omega), exp(-i phi) cos(omega)],
                       [ cos(omega), exp(-i phi) sin(omega)]]

acting on modes ``k, k+1`` (1-based) and the identity elsewhere. A plan lists
its cells in the order light meets them, so

    reconstruct(plan) = diag(exp(i delta)) @ T_N @ ... @ T_2 @ T_1.

The eliminations only ever touch the two rows or columns a cell couples; no
``m x m`` product is formed while decomposing.
"""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import MatrixFormatError, as_unitary

SCHEMES = ("reck", "clements")

# Entries below this magnitude are treated as already nulled.
NULL_TOL = 1e-14


def wrap_angle(x):
    """Map angles into (-pi, pi]."""
    return math.pi - np.mod(math.pi - np.asarray(x, dtype=float), 2 * math.pi)


@dataclass(frozen=True)
class CellParams:
    """One two-mode cell: couples modes ``k`` and ``k + 1`` (1-based)."""

    k: int
    phi: float
    omega: float
    seq: int


@dataclass(frozen=True)
class DecompositionPlan:
    scheme: str
    m: int
    cells: tuple
    output_phases: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if len(self.output_phases) != self.m:
            raise ValueError("output_phases must have one entry per mode")
        for c in self.cells:
            if not 1 <= c.k <= self.m - 1:
                raise ValueError(f"cell couples modes ({c.k}, {c.k + 1}) outside 1..{self.m}")

    @property
    def ordered_cells(self):
        return sorted(self.cells, key=lambda c: c.seq)


class EliminationLog:
    """Records which rows/columns every elimination step modifies.

    With ``check_locality=True`` each step snapshots the working matrix and
    verifies that nothing outside the two coupled rows (left steps) or columns
    (right steps) changed; this is slow and meant for tests.
    """

    def __init__(self, check_locality=False):
        self.check_locality = check_locality
        self.steps = []

    def record(self, side, k, before, after):
        touched = (k, k + 1)
        if self.check_locality:
            changed = np.abs(after - before) > 0
            if side == "left":
                idx = np.flatnonzero(changed.any(axis=1))
            else:
                idx = np.flatnonzero(changed.any(axis=0))
            if not set((idx + 1).tolist()) <= set(touched):
                raise AssertionError(f"{side} step on {touched} modified {(idx + 1).tolist()}")
        self.steps.append((side, touched))

    @property
    def max_touched(self):
        return max((len(t) for _, t in self.steps), default=0)

    def count(self, side):
        return sum(1 for s, _ in self.steps if s == side)


def t_block(phi, omega):
    s, c = math.sin(omega), math.cos(omega)
    e = complex(math.cos(phi), -math.sin(phi))
    return np.array([[-s, e * c], [c, e * s]])


def t_matrix(m, k, phi, omega):
    """The cell unitary embedded in ``m`` modes; ``k`` is 1-based."""
    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in 1..{m - 1}, got {k}")
    M = np.eye(m, dtype=complex)
    M[k - 1:k + 1, k - 1:k + 1] = t_block(phi, omega)
    return M


def _apply_right_dagger(U, k0, phi, omega, log):
    # U <- U @ T^dagger on columns (k0, k0+1), 0-based.
    before = U.copy() if log is not None and log.check_locality else None
    B = t_block(phi, omega)
    U[:, k0:k0 + 2] = U[:, k0:k0 + 2] @ B.conj().T
    if log is not None:
        log.record("right", k0 + 1, before, U)


def _apply_left(U, k0, phi, omega, log):
    # U <- T @ U on rows (k0, k0+1), 0-based.
    before = U.copy() if log is not None and log.check_locality else None
    B = t_block(phi, omega)
    U[k0:k0 + 2, :] = B @ U[k0:k0 + 2, :]
    if log is not None:
        log.record("left", k0 + 1, before, U)


def _null_right(x, y):
    """(phi, omega) such that ``[x, y] @ T^dagger`` has a zero first entry."""
    if abs(x) <= NULL_TOL:
        return math.pi, -math.pi / 2  # exact pass-through
    phi = math.atan2(x.imag, x.real) - math.atan2(y.imag, y.real) if abs(y) > NULL_TOL else 0.0
    return phi, math.atan2(abs(y), abs(x))


def _null_left(x, y):
    """(phi, omega) such that ``T @ [x, y]^T`` has a zero second entry."""
    if abs(y) <= NULL_TOL:
        return math.pi, -math.pi / 2
    phi = math.atan2(y.imag, y.real) - math.atan2(x.imag, x.real) if abs(x) > NULL_TOL else 0.0
    return phi, -math.atan2(abs(x), abs(y))


def _make_plan(scheme, m, params, delta):
    cells = tuple(
        CellParams(k=int(k), phi=float(wrap_angle(phi)), omega=float(wrap_angle(om)), seq=i)
        for i, (k, phi, om) in enumerate(params)
    )
    return DecompositionPlan(scheme, m, cells, np.asarray(wrap_angle(delta), dtype=float))


def reck_decompose(U, log=None, tol=1e-10) -> DecompositionPlan:
    """Triangular decomposition by right-multiplication with ``T^dagger``.

    Rows are cleared from the bottom up; in row ``r`` the entries left of the
    diagonal are pushed one column to the right until only ``U[r, r]``
    remains.
    """
    U = as_unitary(U, tol).copy()
    m = U.shape[0]
    params = []
    for r in range(m - 1, 0, -1):
        for k0 in range(r):
            phi, om = _null_right(U[r, k0], U[r, k0 + 1])
            _apply_right_dagger(U, k0, phi, om, log)
            params.append((k0 + 1, phi, om))
    # U @ T_1^+ ... T_N^+ = D  =>  U = D T_N ... T_1
    return _make_plan("reck", m, params, np.angle(np.diagonal(U)))


def commute_diagonal(delta, chi, phis):
    """Move the residual diagonal to the output side of the left-applied cells.

    ``chi`` lists the 1-based mode pairs ``(k, k+1)`` of the left-applied
    cells and ``phis`` their phases, both in the order they should be
    processed (the cell adjacent to the diagonal first). Each step uses
    ``T(phi, w)^dagger diag(d1, d2) = diag(d1, d1 e^{i phi}) T(d1 - d2, w)``.
    Returns the updated phases and the final diagonal phases.
    """
    if len(chi) != len(phis):
        raise ValueError(f"chi has {len(chi)} pairs but {len(phis)} phases were given")
    delta = np.array(delta, dtype=float)
    out = []
    for (k1, k2), phi in zip(chi, phis):
        a, b = k1 - 1, k2 - 1
        tmp = delta[b]
        delta[b] = delta[a] + phi
        out.append(delta[a] - tmp)
    return out, delta


def clements_decompose(U, log=None, tol=1e-10) -> DecompositionPlan:
    """Square decomposition that alternates column and row eliminations.

    Odd diagonals are nulled from the right with ``T^dagger``, even ones from
    the left with ``T``; each update rewrites only the coupled pair of
    columns or rows. The remaining diagonal is then commuted through the
    left-applied cells, giving the physical order: right cells as applied,
    followed by the left cells in reverse order of application.
    """
    U = as_unitary(U, tol).copy()
    m = U.shape[0]
    right, left = [], []
    for i in range(1, m):
        if i % 2 == 1:
            for j in range(i):
                r, k0 = m - j - 1, i - j - 1
                phi, om = _null_right(U[r, k0], U[r, k0 + 1])
                _apply_right_dagger(U, k0, phi, om, log)
                right.append((k0 + 1, phi, om))
        else:
            for j in range(i):
                k0, c = m + j - i - 1, j
                phi, om = _null_left(U[k0, c], U[k0 + 1, c])
                _apply_left(U, k0, phi, om, log)
                left.append((k0 + 1, phi, om))
    # L_N ... L_1 U R_1^+ ... R_M^+ = D; start the commutation next to D.
    pending = left[::-1]
    chi = [(k, k + 1) for k, _, _ in pending]
    new_phis, delta = commute_diagonal(np.angle(np.diagonal(U)), chi, [p for _, p, _ in pending])
    moved = [(k, phi, om) for (k, _, om), phi in zip(pending, new_phis)]
    return _make_plan("clements", m, right + moved, delta)


def decompose(U, scheme, **kwargs) -> DecompositionPlan:
    if scheme == "reck":
        return reck_decompose(U, **kwargs)
    if scheme == "clements":
        return clements_decompose(U, **kwargs)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def reconstruct(plan: DecompositionPlan) -> np.ndarray:
    V = np.eye(plan.m, dtype=complex)
    for c in plan.ordered_cells:
        _apply_left(V, c.k - 1, c.phi, c.omega, None)
    return np.exp(1j * np.asarray(plan.output_phases))[:, None] * V


def cell_modes(scheme, m):
    """Top modes (1-based) of the cells of a scheme, in physical order.

    The sequence depends only on ``m``, never on the decomposed unitary.
    """
    if scheme == "reck":
        return [k0 + 1 for r in range(m - 1, 0, -1) for k0 in range(r)]
    if scheme == "clements":
        right = [i - j for i in range(1, m, 2) for j in range(i)]
        left = [m + j - i for i in range(2, m, 2) for j in range(i)]
        return right + left[::-1]
    raise ValueError(f"unknown scheme {scheme!r}")


def schedule_layers(ks, m):
    """Greedy as-soon-as-possible layering of cells ``(k, k+1)``.

    Returns the layer index (0-based) of every cell and the layers as lists
    of 1-based mode pairs.
    """
    busy = np.zeros(m + 1, dtype=int)
    index = []
    for k in ks:
        layer = max(busy[k], busy[k + 1])
        busy[k] = busy[k + 1] = layer + 1
        index.append(layer)
    layers = [[] for _ in range(max(index, default=-1) + 1)]
    for k, layer in zip(ks, index):
        layers[layer].append((k, k + 1))
    return index, [sorted(layer) for layer in layers]


def layout_geometry(scheme, m):
    """Physical layers of the mesh: ``m`` for Clements, ``2m - 3`` for Reck."""
    if m < 2:
        raise ValueError("a mesh needs at least two modes")
    _, layers = schedule_layers(cell_modes(scheme, m), m)
    if scheme == "clements":
        layers += [[] for _ in range(m - len(layers))]  # m = 2 has an empty second column
    return layers


def plan_to_json(plan: DecompositionPlan) -> dict:
    return {
        "scheme": plan.scheme,
        "m": plan.m,
        "cells": [{"k": c.k, "phi": c.phi, "omega": c.omega, "seq": c.seq} for c in plan.cells],
        "output_phases": [float(x) for x in plan.output_phases],
    }


def plan_from_json(data) -> DecompositionPlan:
    if not isinstance(data, dict):
        raise MatrixFormatError("plan document must be a JSON object")
    for key in ("scheme", "m", "cells", "output_phases"):
        if key not in data:
            raise MatrixFormatError(f"missing required key '{key}'", field=key)
    scheme, m = data["scheme"], data["m"]
    if scheme not in SCHEMES:
        raise MatrixFormatError(f"'scheme' must be one of {SCHEMES}, got {scheme!r}", field="scheme")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise MatrixFormatError(f"'m' must be a positive integer, got {m!r}", field="m")
    if not isinstance(data["cells"], list) or len(data["cells"]) != m * (m - 1) // 2:
        raise MatrixFormatError(f"'cells' must list {m * (m - 1) // 2} cells", field="cells")
    cells = []
    for i, c in enumerate(data["cells"]):
        try:
            k, phi, om, seq = int(c["k"]), float(c["phi"]), float(c["omega"]), int(c["seq"])
        except (KeyError, TypeError, ValueError):
            raise MatrixFormatError(f"cell {i} needs numeric 'k', 'phi', 'omega', 'seq'", field="cells") from None
        if not 1 <= k <= m - 1:
            raise MatrixFormatError(f"cell {i} has k = {k} outside 1..{m - 1}", field="cells")
        cells.append(CellParams(k, phi, om, seq))
    phases = data["output_phases"]
    if not isinstance(phases, list) or len(phases) != m:
        raise MatrixFormatError(f"'output_phases' must list {m} values", field="output_phases")
    return DecompositionPlan(scheme, m, tuple(cells), np.asarray(phases, dtype=float))


def save_plan(path, plan):
    Path(path).write_text(json.dumps(plan_to_json(plan), indent=1))


def load_plan(path) -> DecompositionPlan:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    return plan_from_json(data)
