"""Time evolution of the two-spin state.

Three independent propagators are provided:

* ``propagate_analytic`` expands the state over the four closed-form mode
  solutions, each evolving as ``exp(i lambda_k t)``;
* ``propagate_expm`` exponentiates the constant co-rotating generator and
  maps back to the lab frame (also valid at alpha = 0);
* ``propagate_rk4`` integrates the lab-frame equation with classical RK4.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import UndefinedBasisError
from .linalg import eig_hermitian, expm_i_series
from .model import (
    ModelParams,
    check_state,
    derived_angles,
    hamiltonian_rotating,
    lab_from_rotating,
    mixing_trig,
    rabi_frequency,
)

PROPAGATORS = ("analytic", "expm", "rk4")
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    params: ModelParams
    norm_drift: float = 0.0
    """Largest ``| |psi(t)| - 1 |`` over the grid (raw RK4 states are kept)."""
    method: str = field(default="expm", compare=False)

    def __post_init__(self):
        if self.times.ndim != 1 or self.times.size < 1 or self.times[0] != 0.0:
            raise ValueError("trajectory grid must be 1-D and start at t = 0")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory grid must be strictly increasing")
        if self.states.shape != (self.times.size, 4):
            raise ValueError(f"states have shape {self.states.shape}, expected ({self.times.size}, 4)")

    @property
    def t_final(self) -> float:
        return float(self.times[-1])

    def normalized(self) -> np.ndarray:
        return self.states / np.linalg.norm(self.states, axis=1, keepdims=True)


def characteristic_frequencies(p: ModelParams) -> np.ndarray:
    """Mode frequencies ``(3J, -J, -J + alpha, -J - alpha)``."""
    alpha = rabi_frequency(p)
    return np.array([3 * p.J, -p.J, -p.J + alpha, -p.J - alpha])


def _mode_vectors(p: ModelParams) -> np.ndarray:
    """Co-rotating mode vectors as columns (the t = 0 basis)."""
    try:
        _, ce, se = mixing_trig(p)
    except UndefinedBasisError:
        raise UndefinedBasisError("analytic basis solutions need alpha > 0") from None
    return np.array(
        [
            [0.0, -se / _SQRT2, -(1 - ce) / 2, (1 + ce) / 2],
            [1 / _SQRT2, ce / _SQRT2, se / 2, se / 2],
            [-1 / _SQRT2, ce / _SQRT2, se / 2, se / 2],
            [0.0, se / _SQRT2, -(1 + ce) / 2, (1 - ce) / 2],
        ],
        dtype=complex,
    )


def _gauge(basis_phases) -> np.ndarray:
    if basis_phases is None:
        return np.ones(4, dtype=complex)
    phases = np.asarray(basis_phases, dtype=float)
    if phases.shape != (4,):
        raise ValueError("basis_phases needs one phase per mode")
    return np.exp(1j * phases)


def basis_matrix(p: ModelParams, t=0.0, basis_phases=None) -> np.ndarray:
    """All four basis solutions at time(s) ``t`` as columns, shape ``(..., 4, 4)``.

    ``basis_phases`` multiplies mode ``k`` by ``exp(i basis_phases[k])``.
    """
    t = np.asarray(t, dtype=float)
    modes = _mode_vectors(p) * _gauge(basis_phases)
    lam = characteristic_frequencies(p)
    evolved = modes * np.exp(1j * np.multiply.outer(t, lam))[..., None, :]
    return lab_from_rotating(np.swapaxes(evolved, -1, -2), p.omega, t[..., None]).swapaxes(-1, -2)


def basis_solution(p: ModelParams, k: int, t=0.0, basis_phases=None) -> np.ndarray:
    """Mode solution ``|psi_k(t)>`` for ``k`` in 1..4."""
    if k not in (1, 2, 3, 4):
        raise ValueError(f"mode index must be 1..4, got {k}")
    return basis_matrix(p, t, basis_phases)[..., :, k - 1]


def fit_coefficients(p: ModelParams, psi0, basis_phases=None) -> np.ndarray:
    """Coefficients ``c_k = <psi_k(0)|psi0>`` of the mode expansion."""
    psi0 = check_state(psi0, tol=1e-9)
    return basis_matrix(p, 0.0, basis_phases).conj().T @ psi0


def state_from_coefficients(p: ModelParams, c, basis_phases=None) -> np.ndarray:
    return basis_matrix(p, 0.0, basis_phases) @ np.asarray(c, dtype=complex)


def propagate_analytic(p: ModelParams, c, t, basis_phases=None) -> np.ndarray:
    """``sum_k c_k |psi_k(t)>``; vectorized over ``t``."""
    c = np.asarray(c, dtype=complex)
    return basis_matrix(p, t, basis_phases) @ c


def propagate_expm(p: ModelParams, psi0, t) -> np.ndarray:
    """Exact propagation via ``exp(-i H_rot t)``; vectorized over ``t``."""
    psi0 = np.asarray(psi0, dtype=complex)
    t = np.asarray(t, dtype=float)
    system = eig_hermitian(hamiltonian_rotating(p))
    U = expm_i_series(system, t.reshape(-1))
    fbar = (U @ psi0).reshape(t.shape + (4,))
    return lab_from_rotating(fbar, p.omega, t)


def propagate_rk4(p: ModelParams, psi0, t_final: float, steps: int) -> Trajectory:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    psi0 = np.asarray(psi0, dtype=complex)
    states = _backend.rk4_lab(p.B, p.theta, p.omega, p.J, psi0, float(t_final), int(steps))
    times = np.linspace(0.0, t_final, steps + 1)
    drift = float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)))
    return Trajectory(times, states, p, drift, "rk4")


def evolve(p: ModelParams, psi0, t_final: float, steps: int, method: str = "expm") -> Trajectory:
    """Uniform-grid trajectory with ``steps`` intervals from any propagator."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    psi0 = check_state(psi0, tol=1e-9)
    if method == "rk4":
        return propagate_rk4(p, psi0, t_final, steps)
    times = np.linspace(0.0, t_final, steps + 1)
    if method == "expm":
        states = propagate_expm(p, psi0, times)
    elif method == "analytic":
        states = propagate_analytic(p, fit_coefficients(p, psi0), times)
    else:
        raise ValueError(f"unknown propagator {method!r}; choose from {PROPAGATORS}")
    drift = float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)))
    return Trajectory(times, states, p, drift, method)


def is_analytic_defined(p: ModelParams) -> bool:
    try:
        derived_angles(p)
    except UndefinedBasisError:
        return False
    return True
