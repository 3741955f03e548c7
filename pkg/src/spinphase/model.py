"""Model parameters, basis conventions and Hamiltonians.

States are length-4 complex arrays over the ordered product basis
``(|00>, |01>, |10>, |11>)`` with ``|0> = (1, 0)`` and ``|1> = (0, 1)``.
Units have hbar = 1 and the field magnitude ``B`` is the full energy scale
of ``B(t) . sigma``.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, UndefinedBasisError

NORM_TOL = 1e-12
ALPHA_MIN = 1e-12

KET00 = np.array([1, 0, 0, 0], dtype=complex)
KET01 = np.array([0, 1, 0, 0], dtype=complex)
KET10 = np.array([0, 0, 1, 0], dtype=complex)
KET11 = np.array([0, 0, 0, 1], dtype=complex)
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)

NAMED_STATES = {
    "ket00": KET00,
    "ket01": KET01,
    "ket10": KET10,
    "ket11": KET11,
    "singlet": SINGLET,
}


@dataclass(frozen=True)
class ModelParams:
    """Rotating field ``B (sin th cos wt, sin th sin wt, cos th)`` plus the
    exchange coupling ``J sigma_a . sigma_b`` (J > 0 antiferromagnetic)."""

    B: float
    theta: float
    omega: float
    J: float

    def __post_init__(self):
        for name in ("B", "theta", "omega", "J"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.B < 0:
            raise ConfigError(f"B must be >= 0, got {self.B}")
        if not 0.0 <= self.theta <= math.pi:
            raise ConfigError(f"theta must lie in [0, pi], got {self.theta}")

    def replace(self, **changes) -> "ModelParams":
        fields = {"B": self.B, "theta": self.theta, "omega": self.omega, "J": self.J}
        fields.update(changes)
        return ModelParams(**fields)


class DerivedAngles(NamedTuple):
    alpha: float
    """Generalized Rabi frequency ``sqrt(4B^2 sin^2 th + (2B cos th - w)^2)``."""
    eta: float
    """Mixing angle in ``[0, pi]`` with ``tan eta = 2B sin th / (2B cos th - w)``."""


def check_state(psi, tol: float = NORM_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized: |psi| = {norm!r}")
    return psi


def field_components(p: ModelParams) -> tuple[float, float]:
    """Transverse ``B sin th`` and longitudinal ``B cos th`` field strengths."""
    return p.B * math.sin(p.theta), p.B * math.cos(p.theta)


def rabi_frequency(p: ModelParams) -> float:
    transverse, longitudinal = field_components(p)
    return math.hypot(2.0 * transverse, 2.0 * longitudinal - p.omega)


def derived_angles(p: ModelParams) -> DerivedAngles:
    """``alpha`` and ``eta``; raises ``UndefinedBasisError`` when alpha = 0.

    The quadrant of eta comes from a two-argument arctangent, so
    ``sin eta >= 0`` always holds.
    """
    transverse, longitudinal = field_components(p)
    num = 2.0 * transverse
    den = 2.0 * longitudinal - p.omega
    alpha = math.hypot(num, den)
    if alpha < ALPHA_MIN:
        raise UndefinedBasisError(
            f"eta is undefined at alpha = 0 (theta={p.theta}, omega={p.omega}, B={p.B})"
        )
    return DerivedAngles(alpha, math.atan2(num, den))


def mixing_trig(p: ModelParams) -> tuple[float, float, float]:
    """``(alpha, cos eta, sin eta)`` computed without forming eta."""
    transverse, longitudinal = field_components(p)
    alpha = derived_angles(p).alpha
    return alpha, (2.0 * longitudinal - p.omega) / alpha, 2.0 * transverse / alpha


def hamiltonian_lab(p: ModelParams, t) -> np.ndarray:
    """Lab-frame Hamiltonian at time(s) ``t``; shape ``(..., 4, 4)``."""
    t = np.asarray(t, dtype=float)
    transverse, longitudinal = field_components(p)
    J = p.J
    down = transverse * np.exp(-1j * p.omega * t)
    up = np.conj(down)
    H = np.zeros(t.shape + (4, 4), dtype=complex)
    H[..., 0, 0] = J + 2.0 * longitudinal
    H[..., 1, 1] = -J
    H[..., 2, 2] = -J
    H[..., 3, 3] = J - 2.0 * longitudinal
    H[..., 1, 2] = H[..., 2, 1] = 2.0 * J
    H[..., 0, 1] = H[..., 0, 2] = down
    H[..., 1, 3] = H[..., 2, 3] = down
    H[..., 1, 0] = H[..., 2, 0] = up
    H[..., 3, 1] = H[..., 3, 2] = up
    return H


def hamiltonian_rotating(p: ModelParams) -> np.ndarray:
    """Time-independent real symmetric generator in the co-rotating frame."""
    transverse, longitudinal = field_components(p)
    J, w, s = p.J, p.omega, transverse
    return np.array(
        [
            [J + 2.0 * longitudinal - w, s, s, 0.0],
            [s, -J, 2.0 * J, s],
            [s, 2.0 * J, -J, s],
            [0.0, s, s, J - 2.0 * longitudinal + w],
        ],
        dtype=complex,
    )


def interaction_hamiltonian(J: float) -> np.ndarray:
    """``J sigma_a . sigma_b`` alone."""
    return np.array(
        [[J, 0, 0, 0], [0, -J, 2 * J, 0], [0, 2 * J, -J, 0], [0, 0, 0, J]], dtype=complex
    )


def frame_phases(omega: float, t) -> np.ndarray:
    """Diagonal of the rotating-to-lab map, shape ``(..., 4)``."""
    t = np.asarray(t, dtype=float)
    out = np.ones(t.shape + (4,), dtype=complex)
    out[..., 0] = np.exp(-1j * omega * t)
    out[..., 3] = np.exp(1j * omega * t)
    return out


def lab_from_rotating(fbar, omega: float, t) -> np.ndarray:
    """``(f1 e^{-iwt}, f2, f3, f4 e^{iwt})``; broadcasts over leading axes."""
    return np.asarray(fbar, dtype=complex) * frame_phases(omega, t)


def rotating_from_lab(f, omega: float, t) -> np.ndarray:
    return np.asarray(f, dtype=complex) * np.conj(frame_phases(omega, t))
