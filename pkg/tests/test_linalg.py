import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import SIGMA_X, ginibre, max_abs, naive_kron, naive_matmul, random_hermitian
from qlinsys import linalg
from qlinsys.errors import DimensionError, HermiticityError, QuantumError

seeds = st.integers(0, 2**32 - 1)


def projector_onto(vectors):
    return vectors @ vectors.conj().T


def test_matmul_identity_and_flip():
    a = ginibre(np.random.default_rng(0), 2)
    assert np.array_equal(linalg.matmul(np.eye(2, dtype=complex), a), a)
    assert np.array_equal(linalg.matmul(SIGMA_X, SIGMA_X), np.eye(2))


def test_matmul_against_triple_loop():
    rng = np.random.default_rng(1)
    a, b = ginibre(rng, 3), ginibre(rng, 3)
    assert max_abs(linalg.matmul(a, b), naive_matmul(a, b)) < 1e-13


def test_matmul_shape_error_names_both_shapes():
    with pytest.raises(DimensionError, match=r"\(2, 3\).*\(2, 2\)"):
        linalg.matmul(np.zeros((2, 3)), np.zeros((2, 2)))


def test_adjoint_examples():
    d = np.diag([1.0, -2.0, 3.5]).astype(complex)
    assert np.array_equal(linalg.adjoint(d), d)
    a = np.array([[0, 1j], [0, 0]])
    assert np.array_equal(linalg.adjoint(a), np.array([[0, 0], [-1j, 0]]))


def test_adjoint_index_swap():
    a = ginibre(np.random.default_rng(2), 4, 2)
    expected = np.empty((2, 4), dtype=complex)
    for i in range(4):
        for j in range(2):
            expected[j, i] = np.conj(a[i, j])
    assert np.array_equal(linalg.adjoint(a), expected)


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_adjoint_is_an_involution(seed, n, m):
    a = ginibre(np.random.default_rng(seed), n, m)
    assert np.array_equal(linalg.adjoint(linalg.adjoint(a)), a)


def test_trace_examples():
    assert linalg.trace(np.eye(5)) == 5
    off = np.array([[0, 2], [3j, 0]])
    assert linalg.trace(off) == 0
    a = ginibre(np.random.default_rng(3), 5)
    s = 0j
    for k in range(5):
        s += a[k, k]
    assert linalg.trace(a) == s


def test_trace_needs_square():
    with pytest.raises(DimensionError):
        linalg.trace(np.zeros((2, 3)))


def test_kron_examples():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    p0 = np.diag([1.0, 0.0])
    assert np.array_equal(linalg.kron(p0, p0), np.diag([1.0, 0, 0, 0]))


def test_kron_against_four_index_loop():
    rng = np.random.default_rng(4)
    a, b = ginibre(rng, 2), ginibre(rng, 2)
    assert max_abs(linalg.kron(a, b), naive_kron(a, b)) < 1e-14
    a, b = ginibre(rng, 2, 3), ginibre(rng, 3, 1)
    assert max_abs(linalg.kron(a, b), naive_kron(a, b)) < 1e-14


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_kron_mixed_product(seed, n, m):
    rng = np.random.default_rng(seed)
    a, c = ginibre(rng, n), ginibre(rng, n)
    b, d = ginibre(rng, m), ginibre(rng, m)
    lhs = linalg.kron(a, b) @ linalg.kron(c, d)
    rhs = linalg.kron(a @ c, b @ d)
    assert max_abs(lhs, rhs) < 1e-12


@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_trace_is_cyclic(seed, n, m):
    rng = np.random.default_rng(seed)
    a, b = ginibre(rng, n, m), ginibre(rng, m, n)
    assert abs(linalg.trace(linalg.matmul(a, b)) - linalg.trace(linalg.matmul(b, a))) < 1e-12


def test_frobenius_distance_examples():
    a = ginibre(np.random.default_rng(5), 3)
    assert linalg.frobenius_distance(a, a) == 0
    assert linalg.frobenius_distance(np.zeros((2, 2)), np.eye(2)) == pytest.approx(np.sqrt(2), abs=1e-15)
    b = ginibre(np.random.default_rng(6), 3)
    s = 0.0
    for i in range(3):
        for j in range(3):
            s += abs(a[i, j] - b[i, j]) ** 2
    assert abs(linalg.frobenius_distance(a, b) - np.sqrt(s)) < 1e-14


def test_frobenius_distance_shape_mismatch():
    with pytest.raises(DimensionError):
        linalg.frobenius_distance(np.zeros((2, 2)), np.zeros((3, 3)))


def test_eigen_of_diagonal():
    r = linalg.hermitian_eigen(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert np.array_equal(r.eigenvalues, [1.0, 2.0, 3.0])
    e = np.eye(3)
    for k, idx in enumerate([1, 2, 0]):
        assert max_abs(projector_onto(r.eigenvectors[:, [k]]), np.outer(e[idx], e[idx])) < 1e-15


def test_eigen_of_sigma_x():
    r = linalg.hermitian_eigen(SIGMA_X)
    assert max_abs(r.eigenvalues, [-1.0, 1.0]) < 1e-15
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert max_abs(projector_onto(r.eigenvectors[:, [0]]), np.outer(minus, minus)) < 1e-15
    assert max_abs(projector_onto(r.eigenvectors[:, [1]]), np.outer(plus, plus)) < 1e-15


def test_eigen_reconstruction_4x4():
    h = random_hermitian(np.random.default_rng(7), 4)
    r = linalg.hermitian_eigen(h)
    assert np.linalg.norm(r.reconstruct() - h) <= 1e-10 * max(1, np.linalg.norm(h))


def test_eigen_rejects_non_hermitian():
    h = np.array([[1, 0.5], [0.2, 1]], dtype=complex)
    with pytest.raises(HermiticityError) as info:
        linalg.hermitian_eigen(h)
    assert info.value.asymmetry == pytest.approx(0.3)


@given(seeds, st.integers(1, 16))
def test_eigen_contract(seed, n):
    h = random_hermitian(np.random.default_rng(seed), n)
    r = linalg.hermitian_eigen(h)
    v = r.eigenvectors
    assert np.linalg.norm(v.conj().T @ v - np.eye(n)) < 1e-10
    assert np.all(np.diff(r.eigenvalues) >= 0)
    assert np.linalg.norm(r.reconstruct() - h) <= 1e-10 * max(1, np.linalg.norm(h))
    # LAPACK as an independent check on the spectrum
    assert max_abs(r.eigenvalues, np.linalg.eigvalsh(h)) < 1e-10 * max(1, np.linalg.norm(h))


@given(seeds, st.integers(2, 8), st.integers(1, 3))
def test_eigen_degenerate_spectrum_projectors(seed, n, mult):
    """Within a degenerate cluster only the spectral projector is meaningful."""
    rng = np.random.default_rng(seed)
    mult = min(mult, n)
    q, _ = np.linalg.qr(ginibre(rng, n))
    lam = np.concatenate([np.full(mult, 0.5), np.linspace(1.0, 2.0, n - mult)])
    h = (q * lam) @ q.conj().T
    h = (h + h.conj().T) / 2
    r = linalg.hermitian_eigen(h)
    got = projector_onto(r.eigenvectors[:, :mult])
    want = projector_onto(q[:, :mult])
    assert max_abs(got, want) < 1e-9


def test_as_matrix_rejects_non_finite_and_ragged():
    with pytest.raises(QuantumError):
        linalg.as_matrix([[1, np.nan]])
    with pytest.raises(QuantumError):
        linalg.as_matrix([[1, 2], [3]])
    with pytest.raises(DimensionError):
        linalg.as_matrix([1, 2])
