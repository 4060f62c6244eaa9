"""Dense complex linear algebra for small matrices.

Kronecker products, partial traces over a bipartition, and a cyclic
Jacobi eigensolver for Hermitian matrices. Everything here operates on
plain ``numpy.ndarray`` values (row-major, complex); matrices are tiny
(at most 8x8), so clarity and determinism win over asymptotics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
PROJECTOR_TOL = 1e-10
JACOBI_OFFDIAG_TOL = 1e-13
_MAX_SWEEPS = 100


def _const(m: list) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.flags.writeable = False
    return a


SIGMA_X = _const([[0, 1], [1, 0]])
SIGMA_Y = _const([[0, -1j], [1j, 0]])
SIGMA_Z = _const([[1, 0], [0, -1]])
IDENTITY_2 = _const([[1, 0], [0, 1]])
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigenvalues (real, ascending) and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _as_square(mat: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(mat, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def partial_trace(rho: np.ndarray, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Trace out one subsystem of a (dim_a*dim_b)-dimensional operator.

    keep="A" returns the dim_a x dim_a marginal, keep="B" the dim_b one.
    """
    a = _as_square(rho, "rho")
    if dim_a < 1 or dim_b < 1 or dim_a * dim_b != a.shape[0]:
        raise ValueError(
            f"malformed bipartition: dim_a={dim_a}, dim_b={dim_b} for shape {a.shape}")
    r = a.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ibjb->ij", r)
    if keep == "B":
        return np.einsum("aiaj->ij", r)
    raise ValueError(f'keep must be "A" or "B", got {keep!r}')


def hermitian_eig(a: np.ndarray) -> HermitianSpectrum:
    """Full spectrum of a Hermitian matrix via cyclic Jacobi rotations.

    The input must be Hermitian within 1e-10 (max-abs entry); it is
    symmetrized before iterating. Sweeps stop once the off-diagonal
    Frobenius norm falls below 1e-13. Eigenvalues come back ascending.
    """
    m = _as_square(a, "a")
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise ValueError("matrix is not Hermitian within tolerance 1e-10")
    m = (m + m.conj().T) / 2.0
    n = m.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(_MAX_SWEEPS):
        off = m.copy()
        off[np.diag_indices(n)] = 0.0
        if np.linalg.norm(off) < JACOBI_OFFDIAG_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(m, v, p, q)
    else:
        raise ArithmeticError("Jacobi eigensolver failed to converge")
    w = np.real(np.diagonal(m)).copy()
    order = np.argsort(w, kind="stable")
    return HermitianSpectrum(w[order], v[:, order])


def _jacobi_rotate(m: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One complex rotation zeroing m[p, q] (and m[q, p]); updates m and v."""
    apq = m[p, q]
    absb = abs(apq)
    if absb == 0.0:
        return
    u = apq / absb
    tau = (m[q, q].real - m[p, p].real) / (2.0 * absb)
    sgn = 1.0 if tau >= 0.0 else -1.0
    t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # unitary G: G[p,p]=c, G[p,q]=s*u, G[q,p]=-s*conj(u), G[q,q]=c
    col_p = m[:, p].copy()
    col_q = m[:, q].copy()
    m[:, p] = c * col_p - s * np.conj(u) * col_q
    m[:, q] = s * u * col_p + c * col_q
    row_p = m[p, :].copy()
    row_q = m[q, :].copy()
    m[p, :] = c * row_p - s * u * row_q
    m[q, :] = s * np.conj(u) * row_p + c * row_q
    m[p, q] = 0.0
    m[q, p] = 0.0
    m[p, p] = m[p, p].real
    m[q, q] = m[q, q].real
    vcol_p = v[:, p].copy()
    vcol_q = v[:, q].copy()
    v[:, p] = c * vcol_p - s * np.conj(u) * vcol_q
    v[:, q] = s * u * vcol_p + c * vcol_q


def sandwich(pi: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """pi @ rho @ pi for a projector pi (pi^2 = pi within 1e-10); unnormalized."""
    p = _as_square(pi, "pi")
    r = _as_square(rho, "rho")
    if p.shape != r.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {r.shape}")
    if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
        raise ValueError("pi is not a projector within tolerance 1e-10")
    return p @ r @ p
