"""Geometric phases of the two-spin state and of its reduced subsystems.

Pure-state phase
    ``geometric = total - dynamic`` where ``total = arg <psi(0)|psi(tau)>`` and
    ``dynamic = -int <psi|H|psi> dt``. Equivalently ``total + i int <psi|psi_dot> dt``.

Mixed-state phase of a reduced density operator
    ``arg sum_m sqrt(w_m(0) w_m(tau)) <phi_m(0)|phi_m(tau)> exp(-int <phi_m|phi_m_dot> dt)``
    over eigenvalues ``w_m`` and continuously tracked eigenvectors ``phi_m``.
    The connection integral is the discrete sum of ``arg <phi_m(t_i)|phi_m(t_i+1)>``.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from . import _backend
from .dynamics import Trajectory
from .errors import DegeneracyError, ResolutionError, UndefinedPhaseError
from .linalg import eig_hermitian_2x2
from .model import hamiltonian_lab

OVERLAP_TOL = 1e-10
DEGENERACY_TOL = 1e-6
VANISHING_SUM = 1e-10
POLICIES = ("error", "skip")

TWO_PI = 2.0 * math.pi


def wrap(x):
    """Reduce angles into ``(-pi, pi]``."""
    r = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), TWO_PI)
    return float(r) if np.ndim(r) == 0 else r


def wrapped_distance(x, y):
    """``|((x - y + pi) mod 2pi) - pi|``."""
    d = np.abs(np.mod(np.asarray(x) - np.asarray(y) + np.pi, TWO_PI) - np.pi)
    return float(d) if np.ndim(d) == 0 else d


@dataclass(frozen=True)
class PhaseBreakdown:
    total: float
    dynamic: float
    geometric: float
    geometric_unwrapped: float


@dataclass(frozen=True)
class PhaseSeries:
    """Per-grid-point phases accumulated from ``t = 0``."""

    total: np.ndarray
    dynamic: np.ndarray
    geometric: np.ndarray
    geometric_unwrapped: np.ndarray


# ---------------------------------------------------------------- pure states


def total_phase(psi0, psiT) -> float:
    overlap = complex(np.vdot(psi0, psiT))
    if abs(overlap) <= OVERLAP_TOL:
        raise UndefinedPhaseError(
            f"endpoint states are orthogonal (|<psi0|psiT>| = {abs(overlap):.2e})"
        )
    return float(np.angle(overlap))


def energy_expectation(traj: Trajectory) -> np.ndarray:
    """``<psi|H_lab(t)|psi> / <psi|psi>`` on the trajectory grid."""
    H = hamiltonian_lab(traj.params, traj.times)
    psi = traj.states
    num = np.einsum("ti,tij,tj->t", psi.conj(), H, psi).real
    return num / np.einsum("ti,ti->t", psi.conj(), psi).real


def _require_points(traj: Trajectory, minimum: int = 3):
    if traj.times.size < minimum:
        raise ResolutionError(f"need at least {minimum} grid points, got {traj.times.size}")


def dynamic_phase(traj: Trajectory) -> float:
    """``-int <H> dt`` by composite Simpson quadrature over the grid."""
    _require_points(traj)
    return float(-simpson(energy_expectation(traj), x=traj.times))


def dynamic_phase_fd(traj: Trajectory) -> float:
    """Cross-check of :func:`dynamic_phase` from finite-difference derivatives,
    ``int Im <psi|psi_dot> dt``. Accurate to O(h^2) only."""
    _require_points(traj)
    psi = traj.normalized()
    dpsi = np.gradient(psi, traj.times, axis=0, edge_order=2)
    integrand = np.einsum("ti,ti->t", psi.conj(), dpsi).imag
    return float(simpson(integrand, x=traj.times))


def connection_integrand(traj: Trajectory) -> np.ndarray:
    """``<psi|psi_dot>`` with ``psi_dot = -i H psi``; its real part measures
    norm non-conservation and should vanish along unitary evolution."""
    H = hamiltonian_lab(traj.params, traj.times)
    psi = traj.normalized()
    return np.einsum("ti,tij,tj->t", psi.conj(), -1j * H, psi)


def _discrete_connection(states: np.ndarray) -> np.ndarray:
    """Cumulative ``sum arg <psi_i|psi_i+1>``, starting at 0."""
    steps = np.einsum("ti,ti->t", states[:-1].conj(), states[1:])
    return np.concatenate([[0.0], np.cumsum(np.angle(steps))])


def pure_phase_series(traj: Trajectory, method: str = "energy") -> PhaseSeries:
    """Total, dynamic and geometric phase at every grid point.

    ``method="energy"`` integrates ``<H>`` (cumulative Simpson);
    ``method="connection"`` uses the discrete connection of the stored states,
    which is exactly invariant under state-wise rephasing.
    """
    _require_points(traj)
    psi = traj.normalized()
    overlaps = psi @ psi[0].conj()
    total = np.angle(overlaps)
    if method == "energy":
        dynamic = -cumulative_simpson(energy_expectation(traj), x=traj.times, initial=0.0)
    elif method == "connection":
        dynamic = _discrete_connection(psi)
    else:
        raise ValueError(f"unknown method {method!r}")
    unwrapped = np.unwrap(total) - dynamic
    return PhaseSeries(total, dynamic, wrap(total - dynamic), unwrapped)


def geometric_phase_pure(traj: Trajectory, method: str = "energy") -> PhaseBreakdown:
    """Geometric phase of the whole two-spin state over the trajectory.

    Raises ``UndefinedPhaseError`` if the endpoint states are orthogonal.
    """
    _require_points(traj)
    psi = traj.normalized()
    total = total_phase(psi[0], psi[-1])
    if method == "energy":
        dynamic = dynamic_phase(traj)
    elif method == "connection":
        dynamic = float(_discrete_connection(psi)[-1])
    else:
        raise ValueError(f"unknown method {method!r}")
    geometric = wrap(total - dynamic)
    series = pure_phase_series(traj, method)
    turns = round((series.geometric_unwrapped[-1] - geometric) / TWO_PI)
    return PhaseBreakdown(total, dynamic, geometric, geometric + TWO_PI * turns)


# --------------------------------------------------------------- mixed states


def partial_trace(psi, subsystem: str) -> np.ndarray:
    """Reduced density operator of spin ``"a"`` (first factor) or ``"b"``.

    Accepts a single state ``(4,)`` or a stack ``(..., 4)``.
    """
    m = np.asarray(psi, dtype=complex).reshape(np.shape(psi)[:-1] + (2, 2))
    if subsystem == "a":
        return np.einsum("...ij,...kj->...ik", m, m.conj())
    if subsystem == "b":
        return np.einsum("...ji,...jk->...ik", m, m.conj())
    raise ValueError(f"subsystem must be 'a' or 'b', got {subsystem!r}")


def bloch_vectors(rhos) -> np.ndarray:
    rhos = np.asarray(rhos, dtype=complex)
    return np.stack(
        [2 * rhos[..., 0, 1].real, -2 * rhos[..., 0, 1].imag, (rhos[..., 0, 0] - rhos[..., 1, 1]).real],
        axis=-1,
    )


@dataclass(frozen=True)
class SpectralTrajectory:
    times: np.ndarray
    weights: np.ndarray
    """Eigenvalues per branch, shape ``(n, 2)``."""
    branches: np.ndarray
    """Gauge-aligned eigenvectors, ``branches[i, :, m]`` for branch ``m``."""
    degeneracy_flags: np.ndarray

    def subsample(self, stride: int) -> "SpectralTrajectory":
        sl = slice(None, None, stride)
        return SpectralTrajectory(
            self.times[sl], self.weights[sl], self.branches[sl], self.degeneracy_flags[sl]
        )


def eigen_trajectory(times, rhos, degeneracy_tol: float = DEGENERACY_TOL) -> SpectralTrajectory:
    """Eigen-decompose a series of 2x2 density operators with continuous branches.

    Consecutive Bloch vectors must turn by less than pi/2; a larger turn is
    accepted only when the chord between them passes through the maximally
    mixed point (a degeneracy crossing), and that sample is flagged. Samples
    with ``|w1 - w2| < degeneracy_tol`` are flagged and their branches frozen.

    Raises
    ------
    ResolutionError
        If the grid is too coarse to follow the eigenvectors.
    """
    times = np.asarray(times, dtype=float)
    rhos = np.asarray(rhos, dtype=complex)
    r = bloch_vectors(rhos)
    radius = np.linalg.norm(r, axis=1)
    degenerate = radius < degeneracy_tol
    flags = degenerate.copy()

    a, b = r[:-1], r[1:]
    ok = ~(degenerate[:-1] | degenerate[1:])
    turned = ok & (np.einsum("ij,ij->i", a, b) < 0)
    for i in np.flatnonzero(turned):
        chord = b[i] - a[i]
        length = np.linalg.norm(chord)
        s = np.clip(-np.dot(a[i], chord) / length**2, 0.0, 1.0)
        closest = np.linalg.norm(a[i] + s * chord)
        if closest < 0.1 * length and max(radius[i], radius[i + 1]) < 0.5:
            flags[i if radius[i] <= radius[i + 1] else i + 1] = True
        else:
            raise ResolutionError(
                f"eigenvectors turn by more than pi/2 between t={times[i]:.6g} and "
                f"t={times[i + 1]:.6g}; refine the time grid"
            )

    weights, vecs = eig_hermitian_2x2(rhos)
    branches, weights = _backend.track_branches(vecs, weights, degenerate)
    return SpectralTrajectory(times, weights, branches, flags)


def subsystem_spectrum(traj: Trajectory, subsystem: str,
                       degeneracy_tol: float = DEGENERACY_TOL) -> SpectralTrajectory:
    return eigen_trajectory(traj.times, partial_trace(traj.normalized(), subsystem), degeneracy_tol)


def _check_degeneracy(spec: SpectralTrajectory, policy: str):
    if policy not in POLICIES:
        raise ValueError(f"degeneracy policy must be one of {POLICIES}, got {policy!r}")
    flags = spec.degeneracy_flags
    if flags.all():
        # maximally mixed throughout: any frozen basis gives the same (zero) phase
        return
    if flags[0] or flags[-1]:
        t = spec.times[0] if flags[0] else spec.times[-1]
        raise DegeneracyError(f"density operator is degenerate at endpoint t={t:.6g}", t)
    interior = np.flatnonzero(flags)
    if interior.size:
        t = float(spec.times[interior[0]])
        if policy == "error":
            raise DegeneracyError(f"eigenvalues degenerate near t={t:.6g}", t)
        warnings.warn(
            f"passing {interior.size} degenerate sample(s), first at t={t:.6g}; "
            "branches carried through by continuity",
            RuntimeWarning,
            stacklevel=3,
        )


def _mixed_sum(spec: SpectralTrajectory) -> np.ndarray:
    """``sum_m sqrt(w_m(0) w_m(t)) <phi_m(0)|phi_m(t)> exp(-i A_m(t))`` at every
    grid point, with ``A_m`` the discrete connection of branch ``m``. Shape ``(n,)``."""
    phi = spec.branches
    steps = np.einsum("tam,tam->tm", phi[:-1].conj(), phi[1:])
    conn = np.concatenate([np.zeros((1, 2)), np.cumsum(np.angle(steps), axis=0)])
    ends = np.einsum("am,tam->tm", phi[0].conj(), phi)
    w = np.clip(spec.weights, 0.0, None)
    amp = np.sqrt(w[0] * w)
    return np.sum(amp * ends * np.exp(-1j * conn), axis=1)


def _mixed_once(spec: SpectralTrajectory) -> float:
    total = _mixed_sum(spec)[-1]
    if abs(total) < VANISHING_SUM:
        raise UndefinedPhaseError(
            f"mixed-state phase undefined at t={spec.times[-1]:.6g}: weighted sum vanishes"
        )
    return float(np.angle(total))


def geometric_phase_mixed(spec: SpectralTrajectory, policy: str = "error",
                          richardson: bool = True) -> float:
    """Mixed-state geometric phase over the whole spectral trajectory.

    The discrete connection converges as O(h^2); with ``richardson`` the value
    is extrapolated from the full grid and its every-other-sample subgrid
    (requires an even number of intervals, otherwise ignored).
    """
    if spec.times.size < 2:
        raise ResolutionError("need at least 2 grid points")
    _check_degeneracy(spec, policy)
    fine = _mixed_once(spec)
    intervals = spec.times.size - 1
    if not richardson or intervals < 4 or intervals % 2:
        return fine
    coarse = _mixed_once(spec.subsample(2))
    return wrap(fine + wrap(fine - coarse) / 3.0)


def mixed_phase_series(spec: SpectralTrajectory, policy: str = "error") -> np.ndarray:
    """Mixed-state phase from ``t = 0`` to every grid point; NaN where undefined."""
    _check_degeneracy(spec, policy)
    total = _mixed_sum(spec)
    out = np.angle(total)
    out[np.abs(total) < VANISHING_SUM] = np.nan
    return out


def subsystem_phase(traj: Trajectory, subsystem: str, policy: str = "error",
                    richardson: bool = True,
                    degeneracy_tol: float = DEGENERACY_TOL) -> float:
    return geometric_phase_mixed(subsystem_spectrum(traj, subsystem, degeneracy_tol),
                                 policy, richardson)
