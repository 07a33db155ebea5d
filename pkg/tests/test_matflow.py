import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fovznn.matflow import (
    EPS,
    DimensionError,
    InputError,
    flow_derivative,
    flow_eval,
    hermitize,
    is_normal,
    normality_defect,
    quadratic_form,
    random_unitary,
    split_hermitian,
)

from conftest import crandn, random_hermitian


def test_as_matrix_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        split_hermitian(np.ones((2, 3)))
    with pytest.raises(InputError):
        split_hermitian(np.array([[np.nan]]))


def test_split_of_hermitian_has_zero_k():
    A = random_hermitian(6, 1)
    f = split_hermitian(A)
    assert np.all(f.K == 0)


def test_split_of_i_identity():
    f = split_hermitian(1j * np.eye(3))
    assert np.all(f.H == 0)
    assert np.allclose(f.K, np.eye(3), atol=0)


def test_split_of_shear_reconstructs():
    A = np.array([[1, 2], [0, 1]], dtype=complex)
    f = split_hermitian(A)
    assert np.array_equal(f.H, np.array([[1, 1], [1, 1]], dtype=complex))
    assert np.array_equal(f.K, np.array([[0, -1j], [1j, 0]]))
    assert np.array_equal(f.H + 1j * f.K, A)


def test_flow_at_axis_angles():
    f = split_hermitian(crandn(5, 2))
    assert np.array_equal(flow_eval(f, 0.0), f.H)
    assert np.allclose(flow_eval(f, np.pi / 2), f.K, atol=1e-15)
    assert np.array_equal(flow_derivative(f, 0.0), f.K)
    assert np.allclose(flow_derivative(f, np.pi / 2), -f.H, atol=1e-15)


def test_flow_derivative_matches_central_differences():
    f = split_hermitian(crandn(6, 3))
    t = 0.7
    errs = []
    for h in (1e-4, 1e-5):
        fd = (flow_eval(f, t + h) - flow_eval(f, t - h)) / (2 * h)
        errs.append(np.linalg.norm(fd - flow_derivative(f, t)))
    assert errs[1] < errs[0] / 50


def test_hermitize_examples():
    M = random_hermitian(5, 4)
    assert np.allclose(hermitize(M), M, atol=1e-15)
    assert np.array_equal(hermitize(np.array([[0, 2], [0, 0]])), np.array([[0, 1], [1, 0]]))
    S = hermitize(crandn(7, 5))
    assert np.linalg.norm(S - S.conj().T) == 0


def test_is_normal_examples(jordan2):
    assert is_normal(random_hermitian(8, 6))
    assert not is_normal(jordan2)
    Q = random_unitary(12, 9)
    D = np.diag(crandn(12, 1, 1)[:, 0])
    assert is_normal(Q.conj().T @ D @ Q)
    assert normality_defect(np.zeros((3, 3))) == 0


def test_quadratic_form_examples():
    x = np.array([0.6, 0.8j])
    assert quadratic_form(np.eye(2), x) == pytest.approx(1)
    assert quadratic_form(np.diag([2, -3]), np.array([1.0, 0])) == 2
    H = random_hermitian(4, 2)
    v = crandn(4, 5, 1)[:, 0]
    v /= np.linalg.norm(v)
    assert abs(quadratic_form(H, v).imag) < 1e-14
    with pytest.raises(InputError):
        quadratic_form(np.eye(2), np.array([1.0, 1.0]))


def test_random_unitary_contract():
    u = random_unitary(1, 0)
    assert abs(abs(u[0, 0]) - 1) < 1e-15
    for seed in range(3):
        U = random_unitary(15, seed)
        assert np.linalg.norm(U.conj().T @ U - np.eye(15)) < 1e-13
    assert np.array_equal(random_unitary(15, 4), random_unitary(15, 4))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**31), t=st.floats(-10, 10))
def test_flow_properties(n, seed, t):
    A = crandn(n, seed) * 10.0 ** (seed % 5 - 2)
    f = split_hermitian(A)
    F = flow_eval(f, t)
    assert np.linalg.norm(F - F.conj().T) == 0
    G = flow_eval(f, t + np.pi)
    scale = np.abs(f.H) + np.abs(f.K)
    assert np.all(np.abs(G + F) <= 4 * EPS * scale + 1e-300)
    assert np.linalg.norm(f.H + 1j * f.K - A) <= n * EPS * np.linalg.norm(A)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 2**31))
def test_quadratic_form_unitary_invariance(n, seed):
    A = crandn(n, seed)
    U = random_unitary(n, seed + 1)
    x = crandn(n, seed + 2, 1)[:, 0]
    x /= np.linalg.norm(x)
    lhs = quadratic_form(U.conj().T @ A @ U, x)
    rhs = quadratic_form(A, U @ x)
    assert abs(lhs - rhs) <= 1e-13 * (1 + np.linalg.norm(A))
