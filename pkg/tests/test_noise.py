import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photobench.decomposition import clements_decompose, decompose, reck_decompose, t_block
from photobench.fast import fast_unitary_product, fourier_preset, random_fast_params, sylvester_preset
from photobench.linalg import haar_random_unitary, is_unitary, max_singular_value
from photobench.metrics import fidelity
from photobench.noise import (
    MziCell,
    NoiseConfig,
    compile_mesh,
    ideal_unitary,
    mzi_block,
    mzi_blocks,
    mzi_matrix,
    perturb_cell,
    realize_noisy,
)


def test_balanced_mzi_at_zero_is_cross_state():
    assert np.allclose(mzi_block(MziCell(1, 0.0, 0.0)), [[0, 1], [1, 0]], atol=1e-15)


def test_mzi_printed_product():
    # Direct product of the printed factors for unbalanced splitters.
    def bs(t):
        r = math.sqrt(1 - t * t)
        return np.array([[t, 1j * r], [1j * r, t]])

    t1, t2, w, p = 0.6, 0.75, 0.4, -1.2
    ref = -1j * bs(t2) @ np.diag([np.exp(-1j * w), np.exp(1j * w)]) @ bs(t1) @ np.diag([1, np.exp(1j * p)])
    assert np.allclose(mzi_block(MziCell(1, w, p, t1, t2)), ref)


@settings(max_examples=60, deadline=None)
@given(st.floats(-6, 6), st.floats(-6, 6))
def test_mzi_sign_bridge(w, p):
    assert np.allclose(mzi_block(MziCell(1, w, p)), t_block(-p, w), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(-6, 6), st.floats(-6, 6))
def test_mzi_is_unitary(t1, t2, w, p):
    assert is_unitary(mzi_matrix(MziCell(2, w, p, t1, t2), 4), 1e-12)


def test_mzi_embedding_and_range():
    M = mzi_matrix(MziCell(2, 0.3, 0.1), 4)
    assert np.allclose(M[[0, 3]][:, [0, 3]], np.eye(2))
    with pytest.raises(ValueError):
        mzi_matrix(MziCell(4, 0, 0), 4)
    with pytest.raises(ValueError):
        MziCell(3, 0, 0, k2=2)


def test_mzi_blocks_vectorised_matches_scalar():
    rng = np.random.default_rng(0)
    t1, t2 = rng.uniform(0, 1, (2, 5))
    w, p = rng.uniform(-3, 3, (2, 5))
    stack = mzi_blocks(t1, t2, w, p)
    for i in range(5):
        assert np.allclose(stack[i], mzi_block(MziCell(1, w[i], p[i], t1[i], t2[i])))


def test_cell_clamps_tau():
    c = MziCell(1, 0, 0, tau1=1.3, tau2=-0.2)
    assert (c.tau1, c.tau2) == (1.0, 0.0)


def test_noise_config_validation():
    with pytest.raises(ValueError, match="sigma_bs"):
        NoiseConfig(sigma_bs=-0.1)
    with pytest.raises(ValueError, match="eta_db"):
        NoiseConfig(eta_db=float("nan"))
    assert NoiseConfig(eta_db=20).loss_amplitude == pytest.approx(0.1)


def test_perturb_zero_noise_is_identity():
    c = MziCell(1, 0.3, -0.4)
    assert perturb_cell(c, NoiseConfig(), np.random.default_rng(0)) == c


def test_perturb_statistics():
    rng = np.random.default_rng(8)
    cfg = NoiseConfig(sigma_bs=0.01, sigma_ps=0.02)
    c = MziCell(1, 0.3, -0.4)
    N = 100_000
    draws = np.array([[d.tau1, d.tau2, d.omega, d.phi] for d in (perturb_cell(c, cfg, rng) for _ in range(N))])
    ideal = np.array([c.tau1, c.tau2, c.omega, c.phi])
    sig = np.array([0.01, 0.01, 0.02, 0.02])
    assert np.all(np.abs(draws.mean(axis=0) - ideal) < 3 * sig / math.sqrt(N))
    assert np.all(np.abs(draws.std(axis=0) / sig - 1) < 0.05)


def test_perturb_clamps_at_one():
    rng = np.random.default_rng(1)
    c = MziCell(1, 0, 0, tau1=1.0, tau2=1.0)
    outs = [perturb_cell(c, NoiseConfig(sigma_bs=0.01), rng) for _ in range(500)]
    assert max(max(o.tau1, o.tau2) for o in outs) <= 1.0
    assert any(o.tau1 == 1.0 for o in outs)


@pytest.mark.parametrize("scheme", ["reck", "clements"])
@pytest.mark.parametrize("m", [2, 5, 8, 16])
def test_noiseless_mesh_reproduces_plan(scheme, m):
    U = haar_random_unitary(m, m)
    plan = decompose(U, scheme)
    assert np.abs(ideal_unitary(plan) - U).max() < 1e-9
    assert fidelity(U, realize_noisy(plan, NoiseConfig(), np.random.default_rng(0))) >= 1 - 1e-9


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_noiseless_mesh_reproduces_fast_designs(n):
    for p in (fourier_preset(n), sylvester_preset(n), random_fast_params(n, n)):
        assert np.abs(ideal_unitary(p) - fast_unitary_product(p)).max() < 1e-9


def test_mesh_sizes_and_depths():
    m = 8
    assert compile_mesh(clements_decompose(haar_random_unitary(m, 0))).depth() == m
    assert compile_mesh(reck_decompose(haar_random_unitary(m, 0))).depth() == 2 * m - 3
    fast = compile_mesh(fourier_preset(3))
    assert fast.depth() == 3 and fast.size == 12


def test_mesh_rejects_unknown_design():
    with pytest.raises(TypeError):
        compile_mesh(np.eye(3))


@pytest.mark.parametrize("eta", [0.05, 0.2, 0.5, 3.0])
def test_fast_design_is_loss_immune(eta):
    for p in (fourier_preset(4), sylvester_preset(3)):
        U = fast_unitary_product(p)
        T = realize_noisy(p, NoiseConfig(eta_db=eta))
        assert abs(fidelity(U, T) - 1) <= 1e-9
        # every path crosses n cells, so loss is a global scalar
        assert np.allclose(T, 10 ** (-eta * p.n / 20) * U)


def test_lossless_noisy_realization_is_unitary():
    plan = clements_decompose(haar_random_unitary(10, 3))
    T = realize_noisy(plan, NoiseConfig(0.05, 0.05), np.random.default_rng(4))
    assert is_unitary(T, 1e-12)


def test_lossy_realization_is_contractive():
    plan = reck_decompose(haar_random_unitary(10, 3))
    T = realize_noisy(plan, NoiseConfig(0.02, 0.02, 0.3), np.random.default_rng(4))
    assert max_singular_value(T) <= 1 + 1e-12
    assert not is_unitary(T, 1e-6)


def test_realization_is_deterministic():
    plan = clements_decompose(haar_random_unitary(8, 3))
    cfg = NoiseConfig(0.01, 0.02, 0.1)
    a = realize_noisy(plan, cfg, np.random.default_rng(99))
    b = realize_noisy(plan, cfg, np.random.default_rng(99))
    c = realize_noisy(plan, cfg, np.random.default_rng(100))
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_realization_matches_cell_by_cell_product():
    # The layered fast path must equal the naive product of embedded cells.
    plan = clements_decompose(haar_random_unitary(6, 5))
    cfg = NoiseConfig(0.03, 0.03, 0.2)
    T = realize_noisy(plan, cfg, np.random.default_rng(7))
    mesh = compile_mesh(plan)
    z = np.random.default_rng(7).standard_normal((4, mesh.size))
    amp = cfg.loss_amplitude
    V = np.eye(6, dtype=complex)
    for i, cell in enumerate(mesh.cells()):
        noisy = MziCell(cell.k, cell.omega + 0.03 * z[2, i], cell.phi + 0.03 * z[3, i],
                        1 / math.sqrt(2) + 0.03 * z[0, i], 1 / math.sqrt(2) + 0.03 * z[1, i], cell.k2)
        E = mzi_matrix(noisy, 6)
        E[[cell.k - 1, cell.k2 - 1]] *= amp
        V = E @ V
    V = np.exp(1j * mesh.output_phases)[:, None] * V
    assert np.allclose(T, V, atol=1e-12)


def test_reck_loses_more_than_clements():
    m, eta = 16, 0.2
    fc, fr = [], []
    for t in range(100):
        U = haar_random_unitary(m, np.random.default_rng([5, t]))
        fc.append(fidelity(U, realize_noisy(clements_decompose(U), NoiseConfig(eta_db=eta))))
        fr.append(fidelity(U, realize_noisy(reck_decompose(U), NoiseConfig(eta_db=eta))))
    assert np.mean(fr) < np.mean(fc)


def test_mean_fidelity_decreases_with_noise():
    p = sylvester_preset(4)
    U = fast_unitary_product(p)
    means, ses = [], []
    for k, s in enumerate([0.0, 0.01, 0.02, 0.04]):
        f = [fidelity(U, realize_noisy(p, NoiseConfig(s, s), np.random.default_rng([k, t]))) for t in range(500)]
        means.append(np.mean(f))
        ses.append(np.std(f, ddof=1) / math.sqrt(500))
    for i in range(len(means) - 1):
        assert means[i + 1] < means[i] + 3 * math.hypot(ses[i], ses[i + 1])
