"""Tsallis q-entropy of probability vectors and density matrices.

The generalized entropy is S_q(p) = (1 - sum_i p_i^q) / (q - 1), which
recovers the von Neumann / Shannon entropy (natural log) as q -> 1.
Within |q - 1| < 1e-6 the limit form is used directly: the closed form
loses all precision to cancellation there. The deformed logarithm
ln_q(x) = (x^(1-q) - 1) / (1 - q) satisfies S_q(p) = -sum p_i^q ln_q p_i.
"""
from __future__ import annotations

import numpy as np

from .linalg import hermitian_eig

Q_MIN = 0.0
Q_MAX = 200.0
Q_CLASSICAL_EPS = 1e-6
PROB_CLAMP = -1e-12
PROB_SUM_TOL = 1e-9
EIG_CLAMP = -1e-10


def check_q(q: float) -> float:
    """Validate the entropic index: finite and in (0, 200]."""
    qf = float(q)
    if not np.isfinite(qf) or qf <= Q_MIN or qf > Q_MAX:
        raise ValueError(f"entropic index q must lie in (0, 200], got {q}")
    return qf


def is_classical_limit(q: float) -> bool:
    """True when q is close enough to 1 that the Shannon form applies."""
    return abs(q - 1.0) < Q_CLASSICAL_EPS


def q_log(x: float, q: float) -> float:
    """Deformed logarithm ln_q(x) = (x^(1-q) - 1)/(1 - q); ln(x) near q = 1.

    Defined for x > 0. ln_q(1) = 0 for every q.
    """
    check_q(q)
    if x <= 0.0:
        raise ValueError(f"q_log requires x > 0, got {x}")
    if is_classical_limit(q):
        return float(np.log(x))
    return (x ** (1.0 - q) - 1.0) / (1.0 - q)


def as_prob_vector(p: np.ndarray) -> np.ndarray:
    """Validate and tidy a probability vector.

    Entries in [-1e-12, 0) are clamped to zero; anything more negative is
    an error, as is a total differing from 1 by more than 1e-9. Returns a
    fresh float array; the input is never modified.
    """
    v = np.array(p, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("probability vector must be nonempty")
    if not np.all(np.isfinite(v)):
        raise ValueError("probability vector has non-finite entries")
    if np.any(v < PROB_CLAMP):
        raise ValueError(
            f"probability entries below {PROB_CLAMP}: min = {v.min()}")
    v = np.where(v < 0.0, 0.0, v)
    s = float(v.sum())
    if abs(s - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities sum to {s}, expected 1 within 1e-9")
    return v


def _pow_qlog(x: np.ndarray, q: float) -> np.ndarray:
    """x^q * ln_q(x) elementwise, safe at x = 0.

    For q != 1 this equals (x - x^q)/(1 - q), which avoids both the
    0 * inf indeterminacy at x = 0 and overflow from x^(1-q) at small x.
    """
    x = np.asarray(x, dtype=float)
    if is_classical_limit(q):
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = x[pos] * np.log(x[pos])
        return out
    return (x - x**q) / (1.0 - q)


def tsallis_probs(p: np.ndarray, q: float) -> float:
    """S_q of a classical probability vector. Always >= 0."""
    q = check_q(q)
    v = as_prob_vector(p)
    if is_classical_limit(q):
        return float(max(0.0, -_pow_qlog(v, q).sum()))
    return float(max(0.0, (1.0 - (v**q).sum()) / (q - 1.0)))


def tsallis_state(rho: np.ndarray, q: float) -> float:
    """S_q of a density matrix, from its full spectrum.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything more
    negative means the input was not a state and raises.
    """
    q = check_q(q)
    w = hermitian_eig(rho).eigenvalues
    if np.any(w < EIG_CLAMP):
        raise ValueError(
            f"density matrix has eigenvalue {w.min()} below -1e-10")
    w = np.where(w < 0.0, 0.0, w)
    return tsallis_probs(w, q)


def linear_entropy(rho: np.ndarray) -> float:
    """S_L = (4/3)(1 - Tr rho^2) for a two-qubit state; in [0, 1]."""
    a = np.asarray(rho, dtype=complex)
    if a.shape != (4, 4):
        raise ValueError(f"linear_entropy is defined for 4x4 states, got {a.shape}")
    purity = float(np.real(np.trace(a @ a)))
    return (4.0 / 3.0) * (1.0 - purity)


def norm_factor(q: float) -> float:
    """Scale fixing D_q = 1 on a maximally entangled pure state.

    (q - 1)/(1 - 2^(1-q)) away from q = 1; the limit 1/ln 2 at q = 1.
    """
    q = check_q(q)
    if is_classical_limit(q):
        return 1.0 / float(np.log(2.0))
    return (q - 1.0) / (1.0 - 2.0 ** (1.0 - q))


def conditional_q_entropy_classical(joint: np.ndarray, q: float) -> float:
    """sum_y p(y)^q S_q(X|Y=y) for a joint distribution p(x, y).

    Rows index X, columns index Y. At q = 1 this is the Shannon
    conditional entropy and obeys the chain rule H(X,Y) = H(Y) + H(X|Y)
    exactly; for q != 1 the chain rule holds in its q-deformed form.
    """
    q = check_q(q)
    j = np.asarray(joint, dtype=float)
    if j.ndim != 2:
        raise ValueError(f"joint distribution must be 2-D, got shape {j.shape}")
    as_prob_vector(j.ravel())
    j = np.where(j < 0.0, 0.0, j)
    total = 0.0
    for y in range(j.shape[1]):
        py = float(j[:, y].sum())
        if py <= 0.0:
            continue
        total += py**q * tsallis_probs(j[:, y] / py, q)
    return total
