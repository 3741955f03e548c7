import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spinphase.errors import NonHermitianError
from spinphase.linalg import (
    check_hermitian,
    eig_hermitian,
    eig_hermitian_2x2,
    expm_i_hermitian,
    expm_i_series,
)

from conftest import random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


# --- oracles ----------------------------------------------------------------


def charpoly(M):
    """Faddeev-LeVerrier coefficients of det(x I - M), highest power first."""
    n = M.shape[0]
    coeffs = [1.0 + 0j]
    Mk = np.zeros_like(M)
    I = np.eye(n)
    for k in range(1, n + 1):
        Mk = M @ Mk + coeffs[-1] * I
        coeffs.append(-np.trace(M @ Mk) / k)
    return np.real(np.array(coeffs))


def bisect_roots(coeffs, lo, hi, grid=4000):
    """Real roots of a polynomial with only real roots, by sign scan + bisection."""
    f = lambda x: np.polyval(coeffs, x)
    xs = np.linspace(lo, hi, grid + 1)
    vals = f(xs)
    roots = []
    for a, b, fa, fb in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            for _ in range(200):
                m = 0.5 * (a + b)
                if f(m) * fa <= 0:
                    b = m
                else:
                    a, fa = m, f(m)
            roots.append(0.5 * (a + b))
    return np.array(roots)


def taylor_expm(A, order=12):
    """exp(A) by truncated Taylor series with scaling and squaring."""
    norm = np.abs(A).sum(axis=1).max()
    s = max(0, math.ceil(math.log2(norm / 0.25))) if norm > 0 else 0
    B = A / 2**s
    E = np.eye(A.shape[0], dtype=complex)
    term = np.eye(A.shape[0], dtype=complex)
    for k in range(1, order + 1):
        term = term @ B / k
        E = E + term
    for _ in range(s):
        E = E @ E
    return E


# --- eig_hermitian ----------------------------------------------------------


def test_identity_spectrum():
    w, V = eig_hermitian(np.eye(2))
    np.testing.assert_allclose(w, [1, 1])
    np.testing.assert_allclose(V.conj().T @ V, np.eye(2), atol=1e-15)


def test_pauli_x_spectrum():
    w, _ = eig_hermitian(PAULI_X)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)


def test_charpoly_oracle_self_check():
    np.testing.assert_allclose(charpoly(np.diag([1.0, 2.0, 3.0])), [1, -6, 11, -6])


@pytest.mark.parametrize("seed", range(5))
def test_eigenvalues_match_bisection_oracle(seed):
    rng = np.random.default_rng(seed)
    M = random_hermitian(rng, 4)
    bound = np.abs(M).sum(axis=1).max() + 1
    roots = bisect_roots(charpoly(M), -bound, bound)
    assert roots.size == 4
    w, _ = eig_hermitian(M)
    assert np.max(np.abs(w - roots)) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_degenerate_spectrum(n):
    rng = np.random.default_rng(n)
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    d = np.array([0.5] * (n - 1) + [2.0])
    M = (Q * d) @ Q.conj().T
    w, V = eig_hermitian(M)
    np.testing.assert_allclose(w, np.sort(d), atol=1e-12)
    np.testing.assert_allclose(M @ V, V * w, atol=1e-12)


def test_rejects_non_hermitian():
    with pytest.raises(NonHermitianError) as info:
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))
    assert info.value.max_asymmetry == pytest.approx(1.0)
    with pytest.raises(NonHermitianError):
        check_hermitian(np.array([[1j, 0], [0, 0]]))


def test_rejects_bad_shape():
    with pytest.raises(ValueError):
        eig_hermitian(np.eye(5))
    with pytest.raises(ValueError):
        eig_hermitian(np.ones((2, 3)))


hermitian_4 = arrays(np.float64, (2, 4, 4), elements=st.floats(-5, 5)).map(
    lambda a: 0.5 * ((a[0] + 1j * a[1]) + (a[0] + 1j * a[1]).conj().T)
)


@given(hermitian_4)
def test_eig_properties(M):
    w, V = eig_hermitian(M)
    assert np.all(np.diff(w) >= -1e-12)
    np.testing.assert_allclose(V.conj().T @ V, np.eye(4), atol=1e-10)
    np.testing.assert_allclose((V * w) @ V.conj().T, M, atol=1e-10)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(M), atol=1e-10)


@given(arrays(np.float64, (3, 2, 2, 2), elements=st.floats(-3, 3)))
def test_batched_2x2_matches_scalar(a):
    M = a[:, 0] + 1j * a[:, 1]
    M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
    w, V = eig_hermitian_2x2(M)
    for k in range(3):
        np.testing.assert_allclose(M[k] @ V[k], V[k] * w[k], atol=1e-12)
        np.testing.assert_allclose(V[k].conj().T @ V[k], np.eye(2), atol=1e-12)


# --- expm_i_hermitian -------------------------------------------------------


def test_zero_generator():
    np.testing.assert_allclose(expm_i_hermitian(np.zeros((4, 4)), 3.7), np.eye(4))


def test_pauli_z_at_pi():
    np.testing.assert_allclose(expm_i_hermitian(PAULI_Z, math.pi), -np.eye(2), atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_expm_matches_taylor_oracle(seed):
    M = random_hermitian(np.random.default_rng(100 + seed), 4)
    U = expm_i_hermitian(M, 0.7)
    assert np.max(np.abs(U - taylor_expm(-1j * 0.7 * M))) < 1e-9


@given(hermitian_4, st.floats(-4, 4), st.floats(-4, 4))
def test_expm_group_and_unitarity(M, t1, t2):
    U1 = expm_i_hermitian(M, t1)
    np.testing.assert_allclose(U1.conj().T @ U1, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(U1 @ expm_i_hermitian(M, t2), expm_i_hermitian(M, t1 + t2), atol=1e-9)


def test_series_matches_pointwise(rng):
    M = random_hermitian(rng, 3)
    times = np.array([0.0, 0.4, 2.5])
    w, V = eig_hermitian(M)
    stack = expm_i_series((w, V), times)
    for k, t in enumerate(times):
        np.testing.assert_allclose(stack[k], expm_i_hermitian(M, t), atol=1e-13)
