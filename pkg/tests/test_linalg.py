import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscord.linalg import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    hermitian_eig,
    kron,
    partial_trace,
    sandwich,
)

RNG = np.random.default_rng(20240817)


def random_hermitian(n, rng=RNG):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def test_kron_identity():
    assert np.array_equal(kron(IDENTITY_2, IDENTITY_2), np.eye(4))


def test_kron_sigma_z_pair():
    assert np.array_equal(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))


def test_kron_sigma_x_pair_off_diagonal():
    # (1/4)(I + sigma_x (x) sigma_x) puts 1/4 on the anti-diagonal pairs
    rho = (np.eye(4) + kron(SIGMA_X, SIGMA_X)) / 4
    for i, j in ((0, 3), (3, 0), (1, 2), (2, 1)):
        assert rho[i, j] == 0.25
    assert rho[0, 1] == 0.0


def test_kron_shape_and_entries():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 5], [6, 7]], dtype=complex)
    k = kron(a, b)
    assert k.shape == (4, 4)
    assert k[0, 1] == a[0, 0] * b[0, 1]
    assert k[2, 3] == a[1, 1] * b[0, 1]


def test_partial_trace_product_state():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0  # |00><00|
    assert np.allclose(partial_trace(rho, 2, 2, "A"), [[1, 0], [0, 0]])
    assert np.allclose(partial_trace(rho, 2, 2, "B"), [[1, 0], [0, 0]])


def test_partial_trace_preserves_trace():
    rho = random_hermitian(6)
    for keep, d in (("A", 2), ("B", 3)):
        marg = partial_trace(rho, 2, 3, keep)
        assert marg.shape == (d, d)
        assert np.isclose(np.trace(marg), np.trace(rho))


def test_partial_trace_of_kron_factorizes():
    a = random_hermitian(2)
    b = random_hermitian(2)
    b = b / np.trace(b)
    prod = kron(a, b)
    assert np.allclose(partial_trace(prod, 2, 2, "A"), a, atol=1e-12)


def test_partial_trace_rejects_bad_bipartition():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), 3, 2, "A")
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), 2, 2, "C")


def test_hermitian_eig_known_spectrum():
    # correlation triple (0.3, 0.2, 0.1): weights (0.1, 0.25, 0.3, 0.35)
    rho = (np.eye(4) + 0.3 * kron(SIGMA_X, SIGMA_X)
           + 0.2 * kron(SIGMA_Y, SIGMA_Y) + 0.1 * kron(SIGMA_Z, SIGMA_Z)) / 4
    spec = hermitian_eig(rho)
    assert np.allclose(spec.eigenvalues, [0.1, 0.25, 0.3, 0.35], atol=1e-12)


def test_hermitian_eig_diagonal_is_sorted_ascending():
    w = hermitian_eig(np.diag([3.0, -1.0, 2.0, 0.0])).eigenvalues
    assert np.array_equal(w, sorted(w))


def test_hermitian_eig_reconstruction_and_unitarity():
    for n in (1, 2, 3, 4, 8):
        a = random_hermitian(n)
        spec = hermitian_eig(a)
        v, w = spec.eigenvectors, spec.eigenvalues
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) < 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10


def test_hermitian_eig_matches_reference_solver():
    for n in (2, 4, 5, 8):
        a = random_hermitian(n)
        assert np.allclose(hermitian_eig(a).eigenvalues,
                           np.linalg.eigvalsh(a), atol=1e-11)


def test_hermitian_eig_degenerate_spectrum():
    w = hermitian_eig(np.eye(4) * 0.25).eigenvalues
    assert np.allclose(w, 0.25)


def test_hermitian_eig_rejects_non_hermitian():
    m = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(ValueError):
        hermitian_eig(m)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_hermitian_eig_random_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    a = random_hermitian(n, rng)
    spec = hermitian_eig(a)
    assert np.allclose(spec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-11)
    recon = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.conj().T
    assert np.max(np.abs(recon - a)) < 1e-10


def test_sandwich_projects_block():
    pi = kron(IDENTITY_2, np.array([[1, 0], [0, 0]], dtype=complex))
    phi_plus = np.zeros((4, 4), dtype=complex)
    for i, j in ((0, 0), (0, 3), (3, 0), (3, 3)):
        phi_plus[i, j] = 0.5
    cut = sandwich(pi, phi_plus)
    assert np.isclose(np.trace(cut), 0.5)
    assert np.isclose(cut[0, 0], 0.5)
    assert cut[3, 3] == 0.0


def test_sandwich_rejects_non_projector():
    with pytest.raises(ValueError):
        sandwich(np.eye(4) * 0.5, np.eye(4) / 4)


def test_sandwich_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        sandwich(np.eye(2), np.eye(4) / 4)
