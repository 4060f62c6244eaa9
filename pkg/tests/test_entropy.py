import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscord.entropy import (
    as_prob_vector,
    check_q,
    conditional_q_entropy_classical,
    is_classical_limit,
    linear_entropy,
    norm_factor,
    q_log,
    tsallis_probs,
    tsallis_state,
)
from qdiscord.linalg import kron
from qdiscord.states import bell_diagonal, random_unitary, werner, RngStream


def test_check_q_accepts_range():
    for q in (1e-9, 0.5, 1.0, 2.0, 200.0):
        check_q(q)


def test_check_q_rejects_out_of_range():
    for q in (0.0, -1.0, 200.0001, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            check_q(q)


def test_is_classical_limit_window():
    assert is_classical_limit(1.0)
    assert is_classical_limit(1.0 + 5e-7)
    assert not is_classical_limit(1.01)


def test_q_log_reduces_to_natural_log():
    for x in (0.25, 0.5, 1.0, 2.0):
        assert np.isclose(q_log(x, 1.0), np.log(x))


def test_q_log_known_values():
    # ln_2(x) = 1 - 1/x
    assert np.isclose(q_log(2.0, 2.0), 0.5)
    assert np.isclose(q_log(4.0, 0.5), 2.0)  # (x^{1-q}-1)/(1-q) at q=1/2


def test_as_prob_vector_clamps_tiny_negatives():
    p = as_prob_vector([1.0 + 5e-13, -5e-13])
    assert p[1] == 0.0
    assert np.all(p >= 0)


def test_as_prob_vector_rejects_bad_sum():
    with pytest.raises(ValueError):
        as_prob_vector([0.6, 0.6])


def test_as_prob_vector_rejects_large_negative():
    with pytest.raises(ValueError):
        as_prob_vector([1.1, -0.1])


def test_tsallis_probs_fair_coin_closed_form():
    for q in (0.3, 0.5, 2.0, 3.0, 7.5):
        expect = (1 - 2 ** (1 - q)) / (q - 1)
        assert np.isclose(tsallis_probs(np.array([0.5, 0.5]), q), expect,
                          rtol=1e-13)


def test_tsallis_probs_uniform_four_is_log4_at_q1():
    p = np.full(4, 0.25)
    assert np.isclose(tsallis_probs(p, 1.0), np.log(4.0), rtol=1e-13)


def test_tsallis_probs_pure_distribution_is_zero():
    for q in (0.5, 1.0, 2.0):
        assert tsallis_probs(np.array([1.0, 0.0, 0.0]), q) == 0.0


def test_tsallis_probs_continuous_at_q1():
    p = np.array([0.1, 0.2, 0.3, 0.4])
    shannon = -np.sum(p * np.log(p))
    for q in (1.0 - 1e-5, 1.0 + 1e-5):
        assert abs(tsallis_probs(p, q) - shannon) < 1e-4


def test_tsallis_probs_q2_is_one_minus_purity():
    p = np.array([0.1, 0.2, 0.3, 0.4])
    assert np.isclose(tsallis_probs(p, 2.0), 1 - np.sum(p**2), rtol=1e-14)


def test_tsallis_state_maximally_mixed_q2():
    assert np.isclose(tsallis_state(np.eye(4) / 4, 2.0), 0.75, rtol=1e-13)


def test_tsallis_state_matches_spectrum_route():
    rho = np.asarray(werner(0.5))
    w = np.linalg.eigvalsh(rho)
    for q in (0.5, 1.0, 2.0, 5.0):
        assert np.isclose(tsallis_state(rho, q), tsallis_probs(w, q),
                          rtol=1e-11)


def test_tsallis_state_basis_independent():
    rho = np.asarray(bell_diagonal(0.3, 0.2, 0.1))
    u = random_unitary(4, RngStream(11, 0))
    rotated = u @ rho @ u.conj().T
    for q in (0.5, 1.0, 2.0):
        assert np.isclose(tsallis_state(rotated, q), tsallis_state(rho, q),
                          rtol=1e-10)


def test_tsallis_state_rejects_negative_spectrum():
    m = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        tsallis_state(m, 2.0)


def test_linear_entropy_examples():
    assert np.isclose(linear_entropy(np.eye(4) / 4), 1.0, rtol=1e-13)
    assert np.isclose(linear_entropy(np.asarray(werner(0.5))), 0.75,
                      rtol=1e-13)
    pure = np.zeros((4, 4), dtype=complex)
    pure[0, 0] = 1.0
    assert linear_entropy(pure) == 0.0


def test_linear_entropy_rejects_other_dims():
    with pytest.raises(ValueError):
        linear_entropy(np.eye(2) / 2)


def test_norm_factor_examples():
    assert np.isclose(norm_factor(1.0), 1 / np.log(2.0), rtol=1e-13)
    assert np.isclose(norm_factor(2.0), 2.0, rtol=1e-13)


def test_norm_factor_scales_fair_coin_to_one_bit():
    for q in (0.3, 0.5, 1.0, 2.0, 5.0, 50.0):
        s = tsallis_probs(np.array([0.5, 0.5]), q)
        assert np.isclose(norm_factor(q) * s, 1.0, rtol=1e-12)


def test_conditional_entropy_product_factorizes():
    # independent X, Y at q=1: H(X|Y) = H(X)
    px = np.array([0.3, 0.7])
    py = np.array([0.6, 0.4])
    joint = np.outer(px, py)
    assert np.isclose(conditional_q_entropy_classical(joint, 1.0),
                      tsallis_probs(px, 1.0), rtol=1e-12)


def test_conditional_entropy_deterministic_is_zero():
    joint = np.diag([0.5, 0.5])
    for q in (0.5, 1.0, 2.0):
        assert np.isclose(conditional_q_entropy_classical(joint, q), 0.0,
                          atol=1e-15)


def test_conditional_entropy_rejects_non_matrix():
    with pytest.raises(ValueError):
        conditional_q_entropy_classical(np.array([0.5, 0.5]), 1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000),
       st.sampled_from([0.5, 1.0, 2.0]))
def test_conditional_entropy_chain_rule(seed, q):
    # S_q(X,Y) = S_q(Y) + sum_y p(y)^q S_q(X|y) holds for every q
    rng = np.random.default_rng(seed)
    joint = rng.dirichlet(np.ones(6)).reshape(2, 3)
    lhs = tsallis_probs(joint.ravel(), q)
    rhs = (tsallis_probs(joint.sum(axis=0), q)
           + conditional_q_entropy_classical(joint, q))
    assert abs(lhs - rhs) < 1e-12
