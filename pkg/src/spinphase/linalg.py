"""Dense complex linear algebra for matrices of dimension at most 4.

Hermitian eigenproblems use the closed form for 2x2 input and cyclic complex
Jacobi rotations otherwise. The matrix exponential of ``-i M t`` is assembled
from the eigendecomposition, which is exact for Hermitian generators.
"""
from typing import NamedTuple

import numpy as np

from .errors import NonHermitianError

HERMITIAN_TOL = 1e-10
_OFF_TOL = 1e-14
_MAX_SWEEPS = 60


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    """Real eigenvalues in ascending order."""
    eigenvectors: np.ndarray
    """Orthonormal eigenvectors stored as columns, paired with ``eigenvalues``."""


def max_asymmetry(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M - M.conj().swapaxes(-1, -2)), initial=0.0))


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    asym = max_asymmetry(M)
    if asym > tol:
        raise NonHermitianError(asym, tol)
    return M


def inner(u, v) -> complex:
    """``<u|v>``, conjugating the first argument."""
    return complex(np.vdot(u, v))


def eig_hermitian(M, tol: float = HERMITIAN_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with ``dim <= 4``.

    Parameters
    ----------
    M : array_like
        Square Hermitian matrix.
    tol : float
        Largest tolerated ``|M_ij - conj(M_ji)|``.

    Returns
    -------
    EigenSystem
        Ascending eigenvalues and orthonormal eigenvector columns.

    Raises
    ------
    NonHermitianError
        If ``M`` is not Hermitian within ``tol``.
    """
    M = check_hermitian(M, tol)
    n = M.shape[0]
    if n > 4:
        raise ValueError(f"dimension {n} > 4 is not supported")
    # symmetrise so rounding-level asymmetry cannot leak into the result
    M = 0.5 * (M + M.conj().T)
    if n == 1:
        return EigenSystem(np.array([M[0, 0].real]), np.ones((1, 1), dtype=complex))
    if n == 2:
        w, v = eig_hermitian_2x2(M[None])
        return EigenSystem(w[0], v[0])
    return _jacobi(M)


def _jacobi(A: np.ndarray) -> EigenSystem:
    A = A.copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(A)))
    for _ in range(_MAX_SWEEPS):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < _OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # phase-rotate so the pivot is real, then a real Jacobi rotation
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                U = np.eye(n, dtype=complex)
                U[p, p] = c
                U[q, q] = c
                U[p, q] = s * phase
                U[q, p] = -s * np.conj(phase)
                A = U.conj().T @ A @ U
                V = V @ U
    else:
        raise ArithmeticError("Jacobi sweeps did not converge")
    w = np.diag(A).real
    order = np.argsort(w, kind="stable")
    V = V[:, order]
    # deterministic column phase: largest-magnitude component real positive
    for k in range(n):
        j = int(np.argmax(np.abs(V[:, k]) + 1e-12 * np.arange(n, 0, -1)))
        V[:, k] *= np.conj(V[j, k]) / abs(V[j, k])
    return EigenSystem(w[order], V)


def eig_hermitian_2x2(M) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigendecomposition of a stack of 2x2 Hermitian matrices.

    ``M`` has shape ``(n, 2, 2)``. Returns ascending eigenvalues ``(n, 2)`` and
    eigenvectors ``(n, 2, 2)`` with ``vecs[i, :, m]`` paired to ``vals[i, m]``.
    A scalar matrix gets the computational basis.
    """
    M = np.asarray(M, dtype=complex)
    a = M[:, 0, 0].real
    d = M[:, 1, 1].real
    b = 0.5 * (M[:, 0, 1] + np.conj(M[:, 1, 0]))
    half = 0.5 * (a - d)
    r = np.hypot(half, np.abs(b))
    mean = 0.5 * (a + d)
    vals = np.stack([mean - r, mean + r], axis=1)

    # eigenvector of the upper eigenvalue, built from the better-conditioned row
    upper = np.empty((M.shape[0], 2), dtype=complex)
    use_first = half >= 0
    upper[:, 0] = np.where(use_first, half + r, b)
    upper[:, 1] = np.where(use_first, np.conj(b), r - half)
    norm = np.linalg.norm(upper, axis=1)
    scalar = norm == 0.0
    norm[scalar] = 1.0
    upper /= norm[:, None]
    upper[scalar] = (0.0, 1.0)
    lower = np.stack([np.conj(upper[:, 1]), -np.conj(upper[:, 0])], axis=1)

    vecs = np.stack([lower, upper], axis=2)
    return vals, vecs


def expm_i_hermitian(M, t: float) -> np.ndarray:
    """``exp(-i M t)`` for Hermitian ``M`` via its eigendecomposition."""
    w, V = eig_hermitian(M)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def expm_i_series(system: EigenSystem, times) -> np.ndarray:
    """Stack of ``exp(-i M t)`` for every ``t`` in ``times``, from a precomputed
    eigendecomposition. Shape ``(len(times), n, n)``."""
    w, V = system
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(times, w))
    return np.einsum("ij,tj,kj->tik", V, phases, V.conj())
