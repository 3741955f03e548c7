"""Closed-form phases and reduced density operators for the |01> and |00>
initial states, used as ground truth for the numerical pipelines.

Every arctangent is evaluated as a two-argument arctangent and unwrapped by
continuity from ``tau = 0``, where all phases vanish.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UndefinedPhaseError
from .model import ModelParams, derived_angles, mixing_trig

_SAMPLES_PER_RADIAN = 1000


@dataclass(frozen=True)
class OracleResult:
    value: float
    validity_window: tuple[float, float]
    branch_corrections: int
    boundary_points: tuple[float, ...] = field(default=())
    """Times where a printed ratio form hits 0/0 or a division by zero."""


def _grid(alpha: float, J: float, tau: float) -> np.ndarray:
    if not (math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tau must be finite and non-negative, got {tau}")
    rate = max(alpha, 4 * abs(J), 1.0)
    n = max(2, math.ceil(abs(tau) * rate * _SAMPLES_PER_RADIAN))
    return np.linspace(0.0, tau, n + 1)


def _unwrapped_atan2(y: np.ndarray, x: np.ndarray) -> tuple[float, int]:
    if np.any(np.hypot(y, x) < 1e-13):
        raise UndefinedPhaseError("arctangent argument vanishes on the path (0/0)")
    raw = np.arctan2(y, x)
    steps = np.diff(raw)
    corrections = int(np.count_nonzero(np.abs(steps) > np.pi))
    return float(np.unwrap(raw)[-1]), corrections


def _boundaries(alpha: float, tau: float) -> tuple[float, ...]:
    # cos(alpha tau) = -1: alpha tau = (2k + 1) pi
    k = np.arange(0, max(0, math.floor((alpha * tau / math.pi - 1) / 2)) + 1)
    pts = (2 * k + 1) * math.pi / alpha
    return tuple(float(x) for x in pts if 0 < x <= tau)


def gamma_ab_01(p: ModelParams, tau: float) -> OracleResult:
    """Geometric phase of the full system for initial ``|01>``."""
    alpha, ce, se = mixing_trig(p)
    J = p.J
    t = _grid(alpha, J, tau)
    y = np.sin(4 * J * t)
    x = ce**2 + se**2 * np.cos(alpha * t) + np.cos(4 * J * t)
    arc, k = _unwrapped_atan2(y, x)
    return OracleResult(arc - 2 * J * tau, (0.0, float(tau)), k)


def _secular_01(p: ModelParams, tau: float) -> tuple[float, float, float]:
    alpha, ce, se = mixing_trig(p)
    w = p.omega
    return (
        w * se**2 / (2 * alpha) * math.sin(alpha * tau)
        + 0.5 * alpha * tau * ce
        - 0.5 * w * tau * se**2,
        alpha,
        ce,
    )


def _sub_window(p: ModelParams, tau: float) -> tuple[float, float]:
    # the reduced state of |01> becomes maximally mixed at 4|J|t = pi/2
    if p.J == 0:
        return (0.0, float(tau))
    return (0.0, float(min(tau, math.pi / (8 * abs(p.J)))))


def gamma_a_01(p: ModelParams, tau: float) -> OracleResult:
    """Mixed-state phase of spin a for initial ``|01>``.

    The ratio ``sqrt(1 - cos at) / sqrt(1 + cos at)`` is ``|tan(at/2)|``; with
    the sign restored by continuity the arctangent term is
    ``atan2(-cos eta sin(at/2), cos(at/2))``.
    """
    secular, alpha, ce = _secular_01(p, tau)
    t = _grid(alpha, 0.0, tau)
    arc, k = _unwrapped_atan2(-ce * np.sin(alpha * t / 2), np.cos(alpha * t / 2))
    return OracleResult(arc + secular, _sub_window(p, tau), k, _boundaries(alpha, tau))


def gamma_b_01(p: ModelParams, tau: float) -> OracleResult:
    """Mixed-state phase of spin b for initial ``|01>``."""
    secular, alpha, ce = _secular_01(p, tau)
    t = _grid(alpha, 0.0, tau)
    arc, k = _unwrapped_atan2(ce * np.sin(alpha * t / 2), np.cos(alpha * t / 2))
    return OracleResult(arc - secular, _sub_window(p, tau), k, _boundaries(alpha, tau))


def gamma_ab_00(p: ModelParams, tau: float) -> OracleResult:
    """Geometric phase of the full system for initial ``|00>`` (J-independent)."""
    alpha, ce, se = mixing_trig(p)
    w = p.omega
    t = _grid(alpha, 0.0, tau)
    y = -2 * ce * np.sin(alpha * t)
    x = se**2 + (1 + ce**2) * np.cos(alpha * t)
    arc, k = _unwrapped_atan2(y, x)
    value = arc + w * se**2 / alpha * math.sin(alpha * tau) + alpha * tau * ce - w * tau * se**2
    return OracleResult(value, (0.0, float(tau)), k)


def gamma_sub_00(p: ModelParams, tau: float) -> OracleResult:
    """Phase of either spin for initial ``|00>``; half of :func:`gamma_ab_00`."""
    alpha, ce, se = mixing_trig(p)
    w = p.omega
    t = _grid(alpha, 0.0, tau)
    arc, k = _unwrapped_atan2(-ce * np.sin(alpha * t / 2), np.cos(alpha * t / 2))
    value = (arc + w * se**2 / (2 * alpha) * math.sin(alpha * tau)
             + 0.5 * alpha * tau * ce - 0.5 * w * tau * se**2)
    return OracleResult(value, (0.0, float(tau)), k, _boundaries(alpha, tau))


def rho_closed_form(initial: str, p: ModelParams, t) -> tuple[np.ndarray, np.ndarray]:
    """Reduced density operators ``(rho_a, rho_b)`` at time(s) ``t``.

    ``initial`` is ``"ket01"`` or ``"ket00"``. Output shapes ``(..., 2, 2)``.
    """
    alpha, ce, se = mixing_trig(p)
    t = np.asarray(t, dtype=float)
    ca = np.cos(alpha * t)
    off = 0.5 * (se * ce * (1 - ca) + 1j * se * np.sin(alpha * t)) * np.exp(-1j * p.omega * t)
    if initial == "ket01":
        env = np.cos(4 * p.J * t)
        pop = (ce**2 + se**2 * ca) * env
        rho_a = _assemble(0.5 * (1 + pop), off * env)
        rho_b = _assemble(0.5 * (1 - pop), -off * env)
    elif initial == "ket00":
        rho_a = _assemble(0.5 * (1 + ce**2 + se**2 * ca), off)
        rho_b = rho_a.copy()
    else:
        raise ValueError(f"closed forms exist for 'ket01' and 'ket00', not {initial!r}")
    return rho_a, rho_b


def _assemble(r11, r12) -> np.ndarray:
    r11 = np.asarray(r11, dtype=float)
    rho = np.empty(r11.shape + (2, 2), dtype=complex)
    rho[..., 0, 0] = r11
    rho[..., 1, 1] = 1 - r11
    rho[..., 0, 1] = r12
    rho[..., 1, 0] = np.conj(r12)
    return rho


def eta_of(p: ModelParams) -> float:
    return derived_angles(p).eta
