"""Two-qubit state constructors and random-state sampling.

Parametric families (Bell-diagonal, Werner, one- and two-parameter X
states, Schmidt pure states) plus Haar unitaries and flat-simplex
spectra for random mixed states. All randomness flows through
``RngStream`` so that a (seed, stream) pair pins the sample sequence
bit-for-bit, including under parallel execution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import IDENTITY_2, PAULIS, kron

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = -1e-10
BELL_PARAM_TOL = -1e-12
SIMPLEX_SUM_TOL = 1e-12

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class DensityMatrix:
    """Validated quantum state with its bipartition.

    mat must be Hermitian (1e-10), unit trace (1e-9), and PSD up to
    eigenvalue -1e-10; dim_a * dim_b must match its dimension.
    """

    mat: np.ndarray
    dim_a: int = 2
    dim_b: int = 2

    def __post_init__(self) -> None:
        m = np.array(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"state must be square, got shape {m.shape}")
        if self.dim_a < 1 or self.dim_b < 1 or self.dim_a * self.dim_b != m.shape[0]:
            raise ValueError(
                f"bipartition ({self.dim_a},{self.dim_b}) does not match dim {m.shape[0]}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("state is not Hermitian within 1e-10")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"state trace is {tr}, expected 1 within 1e-9")
        if float(np.linalg.eigvalsh(m).min()) < PSD_TOL:
            raise ValueError("state has an eigenvalue below -1e-10")
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None) -> np.ndarray:
        return self.mat if dtype is None else self.mat.astype(dtype)


def as_simplex_point(lams: np.ndarray) -> np.ndarray:
    """Validate a point on the probability simplex (sum 1 within 1e-12)."""
    v = np.array(lams, dtype=float).ravel()
    if v.size < 1:
        raise ValueError("simplex point must be nonempty")
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError(f"simplex entries must lie in [0,1], got {v}")
    if abs(v.sum() - 1.0) > SIMPLEX_SUM_TOL:
        raise ValueError(f"simplex entries sum to {v.sum()}, expected 1 within 1e-12")
    return v


class RngStream:
    """Counter-based random stream keyed by (seed, stream).

    Identical keys reproduce identical sample sequences regardless of
    what other streams were consumed, so Monte Carlo loops can hand each
    sample index its own stream and stay worker-count invariant.
    """

    __slots__ = ("seed", "stream", "generator")

    def __init__(self, seed: int, stream: int = 0) -> None:
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        self.generator = np.random.Generator(
            np.random.Philox(key=np.array([self.seed, self.stream], dtype=np.uint64)))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed:#x}, stream={self.stream})"


def bell_diagonal(c1: float, c2: float, c3: float) -> DensityMatrix:
    """rho = (1/4)(I + c1 X(x)X + c2 Y(x)Y + c3 Z(x)Z).

    The correlation triple must keep all four Bell-basis weights
    nonnegative (within -1e-12), otherwise the matrix is not a state.
    """
    c = (float(c1), float(c2), float(c3))
    lams = bell_diagonal_spectrum(*c)
    if lams.min() < BELL_PARAM_TOL:
        raise ValueError(
            f"invalid correlation triple {c}: Bell weight {lams.min()} < 0")
    m = kron(IDENTITY_2, IDENTITY_2)
    for cj, sigma in zip(c, PAULIS):
        m = m + cj * kron(sigma, sigma)
    return DensityMatrix(m / 4.0)


def bell_diagonal_spectrum(c1: float, c2: float, c3: float) -> np.ndarray:
    """The four Bell-basis weights of bell_diagonal(c1, c2, c3), in a
    fixed order: (1 -c1 -c2 -c3, 1 -c1 +c2 +c3, 1 +c1 -c2 +c3, 1 +c1 +c2 -c3)/4."""
    return np.array([
        1.0 - c1 - c2 - c3,
        1.0 - c1 + c2 + c3,
        1.0 + c1 - c2 + c3,
        1.0 + c1 + c2 - c3,
    ]) / 4.0


def werner(c: float) -> DensityMatrix:
    """(1-c) I/4 + c |Psi-><Psi-| for c in [0,1]; equals bell_diagonal(-c,-c,-c)."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"werner parameter must lie in [0,1], got {c}")
    psi_minus = np.zeros((4, 4), dtype=complex)
    psi_minus[1, 1] = psi_minus[2, 2] = 0.5
    psi_minus[1, 2] = psi_minus[2, 1] = -0.5
    return DensityMatrix((1.0 - c) * np.eye(4) / 4.0 + c * psi_minus)


def alpha_state(alpha: float) -> DensityMatrix:
    """alpha |Phi+><Phi+| + (1-alpha)(|01><01| + |10><10|)/2, alpha in [0,1].

    Spectrum {alpha, (1-alpha)/2, (1-alpha)/2, 0}; both marginals I/2.
    """
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"alpha must lie in [0,1], got {alpha}")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = m[0, 3] = m[3, 0] = a / 2.0
    m[1, 1] = m[2, 2] = (1.0 - a) / 2.0
    return DensityMatrix(m)


def alpha_beta_state(alpha: float, beta: float) -> DensityMatrix:
    """Two-parameter X state: alpha_state(alpha) with weight beta shifted
    between the |01> and |10> populations.

    Domain: 0 <= alpha <= 1 and alpha-1 <= beta <= 1-alpha. At beta=0
    this is exactly alpha_state(alpha).
    """
    a, b = float(alpha), float(beta)
    if not 0.0 <= a <= 1.0 or not a - 1.0 <= b <= 1.0 - a:
        raise ValueError(
            f"parameters (alpha={alpha}, beta={beta}) outside the valid domain")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = m[0, 3] = m[3, 0] = a / 2.0
    m[1, 1] = (1.0 - a + b) / 2.0
    m[2, 2] = (1.0 - a - b) / 2.0
    return DensityMatrix(m)


def pure_from_schmidt(lams) -> DensityMatrix:
    """|Psi><Psi| with |Psi> = sum_i sqrt(lams_i) |ii>, lams a 2-simplex point.

    The reduced state of either qubit has spectrum exactly {lams_i}.
    """
    v = as_simplex_point(lams)
    if v.size != 2:
        raise ValueError(f"expected 2 Schmidt weights, got {v.size}")
    psi = np.zeros(4, dtype=complex)
    psi[0] = np.sqrt(v[0])
    psi[3] = np.sqrt(v[1])
    return DensityMatrix(np.outer(psi, psi.conj()))


def random_unitary(n: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed n x n unitary.

    QR of a complex Ginibre matrix, with R's diagonal phases folded into
    Q; without that correction QR sampling is not Haar.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    g = rng.generator
    z = (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d = np.where(np.abs(d) == 0.0, 1.0, d / np.abs(d))
    return q * d[np.newaxis, :]


def random_simplex(n: int, rng: RngStream) -> np.ndarray:
    """Uniform point on the (n-1)-simplex: normalized standard exponentials."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    e = rng.generator.standard_exponential(n)
    return as_simplex_point(e / e.sum())


def _bipartition(n: int) -> tuple[int, int]:
    return (2, n // 2) if n % 2 == 0 else (1, n)


def random_mixed(n: int, rng: RngStream) -> DensityMatrix:
    """Random mixed state: flat-simplex spectrum conjugated by a Haar unitary.

    Draw order is pinned (spectrum first, then unitary) so the sampled
    spectrum can be reproduced from the same stream.
    """
    lams = random_simplex(n, rng)
    u = random_unitary(n, rng)
    m = (u * lams[np.newaxis, :]) @ u.conj().T
    dim_a, dim_b = _bipartition(n)
    return DensityMatrix((m + m.conj().T) / 2.0, dim_a, dim_b)


def random_pure(n: int, rng: RngStream) -> DensityMatrix:
    """Haar-random pure state |psi><psi|, |psi> the first Haar-unitary column."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    psi = random_unitary(n, rng)[:, 0]
    dim_a, dim_b = _bipartition(n)
    return DensityMatrix(np.outer(psi, psi.conj()), dim_a, dim_b)
