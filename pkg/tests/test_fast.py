import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photobench.fast import (
    FastParams,
    brute_force_relabeling,
    check_closed_form,
    fast_layer_matrix,
    fast_pairs,
    fast_unitary_closed_form,
    fast_unitary_product,
    find_relabeling,
    fourier_matrix,
    fourier_preset,
    fourier_twiddles,
    hadamard_to_symmetric,
    layer_pairs,
    load_params,
    params_from_json,
    params_to_json,
    random_fast_params,
    save_params,
    sylvester_matrix,
    sylvester_preset,
)
from photobench.linalg import MatrixFormatError, is_unitary

R2 = 1 / math.sqrt(2)


def identity_params(n):
    m = 2 ** n
    return FastParams(n, np.ones((n, m)), np.zeros((n, m)))


def bit_reverse(x, n):
    return int(format(x, f"0{n}b")[::-1], 2)


def test_fast_pairs_examples():
    assert fast_pairs(3, 1) == [(1, 2), (3, 4), (5, 6), (7, 8)]
    assert sorted(fast_pairs(3, 2)) == [(1, 3), (2, 4), (5, 7), (6, 8)]
    assert fast_pairs(3, 3) == [(1, 5), (2, 6), (3, 7), (4, 8)]


@pytest.mark.parametrize("n", range(1, 7))
def test_fast_pairs_cover_each_layer_once(n):
    seen = set()
    for s in range(1, n + 1):
        pairs = fast_pairs(n, s)
        assert len(pairs) == 2 ** (n - 1)
        modes = [k for p in pairs for k in p]
        assert sorted(modes) == list(range(1, 2 ** n + 1))
        assert not seen & set(pairs)
        seen |= set(pairs)
    assert len(seen) == (2 ** n // 2) * n


def test_fast_pairs_range():
    with pytest.raises(ValueError):
        fast_pairs(3, 0)
    with pytest.raises(ValueError):
        fast_pairs(3, 4)


def test_physical_layers_most_significant_first():
    assert layer_pairs(3, 1) == [(1, 5), (2, 6), (3, 7), (4, 8)]
    assert layer_pairs(3, 3) == [(1, 2), (3, 4), (5, 6), (7, 8)]


def test_identity_when_fully_transmitting():
    assert np.allclose(fast_unitary_product(identity_params(2)), np.eye(4))
    assert np.allclose(fast_unitary_closed_form(identity_params(3)), np.eye(8))


def test_single_splitter():
    p = FastParams(1, np.full((1, 2), R2), np.zeros((1, 2)))
    assert np.allclose(fast_layer_matrix(p, 1), R2 * np.array([[1, 1j], [1j, 1]]))


def test_layer_phase_sits_on_second_mode():
    phi = np.zeros((1, 2))
    phi[0, 1] = 0.3
    p = FastParams(1, np.ones((1, 2)), phi)
    assert np.allclose(fast_layer_matrix(p, 1), np.diag([1, np.exp(0.3j)]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_layers_are_unitary(n):
    p = random_fast_params(n, n)
    for s in range(1, n + 1):
        assert is_unitary(fast_layer_matrix(p, s))
    assert is_unitary(fast_unitary_product(p))


def test_params_validation():
    n, m = 2, 4
    tau = np.full((n, m), R2)
    with pytest.raises(ValueError, match="shape"):
        FastParams(n, tau[:1], np.zeros((n, m)))
    bad = tau.copy()
    bad[0, 0] = 1.2
    with pytest.raises(ValueError, match="0, 1"):
        FastParams(n, bad, np.zeros((n, m)))
    bad = tau.copy()
    bad[0, 0] = 0.5
    with pytest.raises(ValueError, match="share one splitter"):
        FastParams(n, bad, np.zeros((n, m)))
    phi = np.zeros((n, m))
    phi[0, 0] = 0.1
    with pytest.raises(ValueError, match="second mode"):
        FastParams(n, tau, phi)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_form_matches_product_random(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(50):
        p = random_fast_params(n, rng)
        assert check_closed_form(p, 1e-9).max() <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_closed_form_matches_product_presets(n):
    for p in (fourier_preset(n), sylvester_preset(n)):
        assert np.abs(fast_unitary_closed_form(p) - fast_unitary_product(p)).max() <= 1e-9


def test_check_closed_form_reports_mismatch():
    # A corrupted params object (bypassing validation) must be flagged.
    p = random_fast_params(2, 0)
    object.__setattr__(p, "tau", np.clip(p.tau + 0.1 * (np.arange(4) % 2), 0, 1))
    with pytest.raises(AssertionError, match="entries"):
        check_closed_form(p)


def test_fourier_twiddles_n3_values():
    t = fourier_twiddles(3)
    nz = {(s + 1, k + 1): t[s, k] for s, k in zip(*np.nonzero(np.abs(t) > 1e-12))}
    expected = {(2, 7): math.pi / 2, (2, 8): math.pi / 2, (3, 4): math.pi / 2,
                (3, 6): math.pi / 4, (3, 8): 3 * math.pi / 4}
    assert nz.keys() == expected.keys()
    for key, v in expected.items():
        assert nz[key] == pytest.approx(v)


def test_twiddles_give_dft_with_hadamard_splitters():
    # Independent butterfly with [[1, 1], [1, -1]]/sqrt2 splitters.
    n = 3
    m = 2 ** n
    t = fourier_twiddles(n)
    U = np.eye(m, dtype=complex)
    for s in range(1, n + 1):
        L = np.zeros((m, m), dtype=complex)
        for a, b in layer_pairs(n, s):
            a, b = a - 1, b - 1
            L[a, a], L[a, b], L[b, a], L[b, b] = R2, R2, R2, -R2
        U = L @ np.diag(np.exp(1j * t[s - 1])) @ U
    F = fourier_matrix(m)
    perm = [bit_reverse(x, n) for x in range(m)]
    assert np.abs(U - F[perm]).max() < 1e-12


@pytest.mark.parametrize("n", range(1, 7))
def test_fourier_preset_is_relabelled_dft(n):
    p = fourier_preset(n)
    assert np.allclose(p.tau, R2)
    U = fast_unitary_product(p)
    m = 2 ** n
    rel = find_relabeling(fourier_matrix(m), U)
    assert rel is not None
    assert list(rel.perm) == [bit_reverse(x, n) for x in range(m)]
    assert np.abs(rel.apply(fourier_matrix(m)) - U).max() <= 1e-8
    assert np.allclose(np.abs(U), 1 / math.sqrt(m))


def test_fourier_n1_is_two_mode_dft_up_to_phases():
    U = fast_unitary_product(fourier_preset(1))
    assert find_relabeling(fourier_matrix(2), U, phases="both") is not None


def test_hadamard_conversion_is_exact_for_random_twiddles():
    rng = np.random.default_rng(3)
    n, m = 3, 8
    t = np.zeros((n, m))
    for s in range(1, n + 1):
        for _, b in layer_pairs(n, s):
            t[s - 1, b - 1] = rng.uniform(-3, 3)
    ref = np.eye(m, dtype=complex)
    for s in range(1, n + 1):
        L = np.zeros((m, m), dtype=complex)
        for a, b in layer_pairs(n, s):
            a, b = a - 1, b - 1
            L[a, a], L[a, b], L[b, a], L[b, b] = R2, R2, R2, -R2
        ref = L @ np.diag(np.exp(1j * t[s - 1])) @ ref
    assert np.abs(fast_unitary_product(hadamard_to_symmetric(n, t)) - ref).max() < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sylvester_preset_matches_recursion(n):
    p = sylvester_preset(n)
    assert np.allclose(p.tau, R2) and not p.phi.any()
    U = fast_unitary_product(p)
    S = sylvester_matrix(2 ** n)
    rel = find_relabeling(S, U, phases="both")
    assert rel is not None
    assert np.abs(rel.apply(S) - U).max() <= 1e-8
    assert np.allclose(np.abs(U), 1 / math.sqrt(2 ** n))


def test_sylvester_phase_structure():
    # With symmetric splitters the product is i^popcount(a xor b) / sqrt(m).
    n = 3
    m = 2 ** n
    U = fast_unitary_product(sylvester_preset(n))
    a = np.arange(m)
    pop = np.vectorize(lambda x: bin(x).count("1"))(a[:, None] ^ a[None, :])
    assert np.allclose(U, 1j ** pop / math.sqrt(m))


def test_reference_matrices():
    assert np.allclose(fourier_matrix(2), np.array([[1, 1], [1, -1]]) * R2)
    assert np.allclose(sylvester_matrix(2), np.array([[1, 1], [1, -1]]) * R2)
    S4 = sylvester_matrix(4)
    assert np.allclose(np.abs(S4), 0.5)
    assert np.allclose(S4 @ S4.conj().T, np.eye(4))
    assert is_unitary(fourier_matrix(12))
    with pytest.raises(ValueError, match="power-of-two"):
        sylvester_matrix(6)


def test_fourier_vs_sylvester_fidelity_regression():
    F, S = fourier_matrix(8), sylvester_matrix(8)
    val = abs(np.trace(S.conj().T @ F)) ** 2 / 64
    from photobench.metrics import fidelity
    assert fidelity(F, S) == pytest.approx(val, abs=1e-14)


def test_relabeling_identity_and_swap():
    A = fourier_matrix(4)
    assert find_relabeling(A, A).perm == (0, 1, 2, 3)
    B = A[[1, 0, 2, 3]]
    assert find_relabeling(A, B).perm == (1, 0, 2, 3)
    assert brute_force_relabeling(A, B) == (1, 0, 2, 3)


def test_relabeling_rows_mode():
    A = fourier_matrix(4)
    B = np.diag(np.exp(1j * np.array([0.1, 0.2, 0.3, 0.4]))) @ A[[2, 0, 3, 1]]
    assert find_relabeling(A, B) is None
    rel = find_relabeling(A, B, phases="rows")
    assert rel.perm == (2, 0, 3, 1)
    assert np.allclose(rel.apply(A), B)


def test_relabeling_none_when_impossible():
    assert find_relabeling(fourier_matrix(4), sylvester_matrix(4)) is None
    with pytest.raises(ValueError):
        find_relabeling(np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        find_relabeling(np.eye(2), np.eye(2), phases="cols")


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 31))
def test_relabeling_finds_random_permutations(m, seed):
    rng = np.random.default_rng(seed)
    A = fourier_matrix(m)
    perm = tuple(int(i) for i in rng.permutation(m))
    assert find_relabeling(A, A[list(perm)]).perm == perm


def test_params_json_round_trip(tmp_path):
    p = fourier_preset(3)
    q = params_from_json(params_to_json(p))
    assert np.allclose(fast_unitary_product(q), fast_unitary_product(p))
    save_params(tmp_path / "f.json", p)
    assert np.allclose(load_params(tmp_path / "f.json").phi, p.phi)


def test_params_json_without_output_phases():
    doc = params_to_json(sylvester_preset(2))
    del doc["output_phases"]
    assert np.allclose(params_from_json(doc).output_phases, 0)


@pytest.mark.parametrize("key", ["n", "tau", "phi"])
def test_params_json_missing_key(key):
    doc = params_to_json(sylvester_preset(2))
    del doc[key]
    with pytest.raises(MatrixFormatError) as info:
        params_from_json(doc)
    assert info.value.field == key


def test_params_json_wrong_shape():
    doc = params_to_json(sylvester_preset(2))
    doc["tau"] = doc["tau"][:1]
    with pytest.raises(MatrixFormatError) as info:
        params_from_json(doc)
    assert info.value.field == "tau"
