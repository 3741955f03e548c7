"""Oracle-equivalence and property checks behind ``spinphase verify``.

Each check returns one or more :class:`CheckResult` rows. Random draws use
fixed seeds so reports are reproducible.
"""
import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracles
from .dynamics import (
    basis_matrix,
    evolve,
    fit_coefficients,
    propagate_analytic,
    propagate_expm,
    propagate_rk4,
)
from .entanglement import concurrence, concurrence_closed_form, is_always_separable
from .linalg import eig_hermitian, expm_i_hermitian
from .model import KET00, KET01, ModelParams, rabi_frequency
from .phases import dynamic_phase, geometric_phase_pure, subsystem_phase, wrapped_distance


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float | tuple[float, float]
    op: str
    """``"<"`` (value below threshold), ``">"`` (above) or ``"in"`` (inside interval)."""
    detail: str = ""

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.op == "<":
            return self.value < self.threshold
        if self.op == ">":
            return self.value > self.threshold
        lo, hi = self.threshold
        return lo <= self.value <= hi

    def line(self) -> str:
        if self.op == "in":
            bound = f"in [{self.threshold[0]:g}, {self.threshold[1]:g}]"
        else:
            bound = f"{self.op} {self.threshold:.1e}"
        status = "PASS" if self.passed else "FAIL"
        text = f"{self.name:<34} {self.value:12.4e}  {bound:<16} {status}"
        return f"{text}  ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class Check:
    name: str
    criterion: int
    group: str
    run: Callable[[], list[CheckResult]]


def _random_params(rng, J=None, alpha_min=1e-3) -> ModelParams:
    while True:
        p = ModelParams(
            rng.uniform(0, 2),
            rng.uniform(0, math.pi),
            rng.uniform(-2, 2),
            rng.uniform(-1, 1) if J is None else J,
        )
        if rabi_frequency(p) > alpha_min:
            return p


def _random_state(rng) -> np.ndarray:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def always_separable_coefficients(rng, sign_flip: bool = False) -> np.ndarray:
    """Random ``c`` with ``c1 = 0`` and ``c2^2 + 2 c3 c4 = 0``
    (``c2^2 - 2 c3 c4 = 0`` when ``sign_flip``)."""
    c3, c4 = rng.normal(size=2) + 1j * rng.normal(size=2)
    c2 = np.sqrt((2 if sign_flip else -2) * c3 * c4) * rng.choice([-1, 1])
    c = np.array([0, c2, c3, c4], dtype=complex)
    return c / np.linalg.norm(c)


# ------------------------------------------------------------------ criteria


def check_propagators(count: int = 50, steps: int = 2**14, t_final: float = 10.0):
    rng = np.random.default_rng(20101)
    worst, worst_p = 0.0, None
    for _ in range(count):
        p = _random_params(rng)
        psi0 = _random_state(rng)
        rk = propagate_rk4(p, psi0, t_final, steps)
        an = propagate_analytic(p, fit_coefficients(p, psi0), rk.times)
        ex = propagate_expm(p, psi0, rk.times)
        d = max(np.abs(an - ex).max(), np.abs(an - rk.states).max(), np.abs(ex - rk.states).max())
        if d > worst:
            worst, worst_p = d, p
    return [CheckResult("propagator_agreement", worst, 1e-7, "<", f"{count} random sets, worst {worst_p}")]


PHASE_GRID_THETA = tuple(math.pi * k / 10 for k in (1, 3, 5, 7, 9))
PHASE_GRID_OMEGA = (-2.0, -1.0, 0.0, 1.0, 2.0)
PHASE_GRID_J = (-1.0, -0.5, 0.0, 0.5, 1.0)
PHASE_GRID_TAU = (0.5, 2.0, 5.0)


def _phase_grid():
    for theta in PHASE_GRID_THETA:
        for omega in PHASE_GRID_OMEGA:
            for J in PHASE_GRID_J:
                yield ModelParams(1.0, theta, omega, J)


def check_pure_phase_oracle(steps: int = 2048):
    worst, n = 0.0, 0
    for p in _phase_grid():
        for tau in PHASE_GRID_TAU:
            traj = evolve(p, KET01, tau, steps)
            d = wrapped_distance(geometric_phase_pure(traj).geometric, oracles.gamma_ab_01(p, tau).value)
            worst = max(worst, d)
            n += 1
    return [CheckResult("pure_phase_oracle_01", worst, 1e-6, "<", f"{n} grid points")]


def check_mixed_phase_oracle(steps: int = 2**12):
    worst, n = 0.0, 0
    for p in _phase_grid():
        for tau in PHASE_GRID_TAU:
            if 4 * abs(p.J) * tau >= math.pi / 2 - 0.1:
                continue
            traj = evolve(p, KET01, tau, steps)
            ga = subsystem_phase(traj, "a")
            gb = subsystem_phase(traj, "b")
            worst = max(
                worst,
                wrapped_distance(ga, oracles.gamma_a_01(p, tau).value),
                wrapped_distance(gb, oracles.gamma_b_01(p, tau).value),
            )
            n += 1
    return [CheckResult("mixed_phase_oracle_01", worst, 1e-4, "<", f"{n} grid points in window")]


KET00_GRID_THETA = tuple(math.pi * k / 8 for k in (1, 3, 5, 7))
KET00_GRID_OMEGA = (-1.5, -0.5, 0.5, 1.5)
KET00_GRID_J = (0.0, 0.5)
KET00_TAU = (1.0, 4.0)


def check_ket00_example(steps: int = 4096):
    d_ab = d_sub = d_half = c_max = 0.0
    for theta in KET00_GRID_THETA:
        for omega in KET00_GRID_OMEGA:
            for J in KET00_GRID_J:
                p = ModelParams(1.0, theta, omega, J)
                for tau in KET00_TAU:
                    traj = evolve(p, KET00, tau, steps)
                    gab = geometric_phase_pure(traj).geometric
                    ga = subsystem_phase(traj, "a")
                    gb = subsystem_phase(traj, "b")
                    sub = oracles.gamma_sub_00(p, tau).value
                    d_ab = max(d_ab, wrapped_distance(gab, oracles.gamma_ab_00(p, tau).value))
                    d_sub = max(d_sub, wrapped_distance(ga, sub), wrapped_distance(gb, sub))
                    d_half = max(d_half, wrapped_distance(gab, 2 * ga))
                scan = propagate_expm(p, KET00, np.linspace(0.0, 10.0, 2001))
                c_max = max(c_max, float(np.max(concurrence(scan))))
    return [
        CheckResult("ket00_gamma_ab_oracle", d_ab, 1e-6, "<"),
        CheckResult("ket00_gamma_sub_oracle", d_sub, 1e-6, "<"),
        CheckResult("ket00_gamma_ab_minus_2gamma_a", d_half, 1e-6, "<"),
        CheckResult("ket00_concurrence", c_max, 1e-10, "<"),
    ]


def check_concurrence_closed_form(count: int = 200):
    rng = np.random.default_rng(20105)
    worst = 0.0
    for _ in range(count):
        p = _random_params(rng)
        psi0 = _random_state(rng)
        t = rng.uniform(0, 10)
        numeric = concurrence(propagate_expm(p, psi0, t))
        closed = concurrence_closed_form(fit_coefficients(p, psi0), p.J, t)
        worst = max(worst, abs(numeric - closed))
    return [CheckResult("concurrence_closed_form", worst, 1e-9, "<", f"{count} samples")]


def check_separability_condition(count: int = 100):
    rng = np.random.default_rng(20106)
    times = np.linspace(0.0, 10.0, 1001)
    keep = 0.0
    for _ in range(count):
        p = _random_params(rng)
        psi0 = basis_matrix(p) @ always_separable_coefficients(rng)
        keep = max(keep, float(np.max(concurrence(propagate_expm(p, psi0, times)))))
    reach = math.inf
    drawn = 0
    while drawn < count:
        c = _random_state(rng)
        if max(abs(c[0]), abs(c[1] ** 2 + 2 * c[2] * c[3])) <= 0.1:
            continue
        drawn += 1
        p = _random_params(rng, J=0.5)
        psi0 = basis_matrix(p) @ c
        reach = min(reach, float(np.max(concurrence(propagate_expm(p, psi0, times)))))
    return [
        CheckResult("separable_set_stays_separable", keep, 1e-9, "<", f"{count} states"),
        CheckResult("violating_set_gets_entangled", reach, 1e-3, ">", f"min over {count} states of max C"),
    ]


RECURRENCE_PARAMS = ModelParams(1.0, math.pi / 3, 0.5, 0.5)
# the weighted sum of the mixed-phase formula vanishes exactly at pi/(4J)
RECURRENCE_OFFSET = 1e-6


def recurrence_residual(steps: int = 8192) -> float:
    p = RECURRENCE_PARAMS
    tau = math.pi / (4 * abs(p.J)) - RECURRENCE_OFFSET
    traj = evolve(p, KET01, tau, steps)
    gab = geometric_phase_pure(traj).geometric
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        ga = subsystem_phase(traj, "a", policy="skip")
        gb = subsystem_phase(traj, "b", policy="skip")
    return wrapped_distance(gab, ga + gb)


def check_recurrence():
    p = RECURRENCE_PARAMS
    period = math.pi / (4 * abs(p.J))
    c = concurrence(propagate_expm(p, KET01, [period, 2 * period]))
    report = is_always_separable(fit_coefficients(p, KET01), p.J)
    return [
        CheckResult("recurrence_concurrence", float(np.max(c)), 1e-8, "<",
                    f"cyclic={report.cyclic_separable}, period={report.recurrence_period:.6g}"),
        CheckResult("recurrence_nonadditivity", recurrence_residual(), 1e-3, ">",
                    f"|gamma_ab - (gamma_a + gamma_b)| at pi/4J - {RECURRENCE_OFFSET:g}"),
    ]


def check_separable_additivity(count: int = 50, taus: int = 5, steps: int = 4096):
    rng = np.random.default_rng(20108)
    worst = 0.0
    for _ in range(count):
        p = _random_params(rng)
        psi0 = basis_matrix(p) @ always_separable_coefficients(rng)
        for tau in rng.uniform(0.2, 6.0, size=taus):
            traj = evolve(p, psi0, tau, steps)
            gab = geometric_phase_pure(traj).geometric
            ga = subsystem_phase(traj, "a")
            gb = subsystem_phase(traj, "b")
            worst = max(worst, wrapped_distance(gab, ga + gb))
    return [CheckResult("separable_additivity", worst, 1e-6, "<", f"{count}x{taus} samples")]


GAUGE_FLIP = (0.0, 0.0, math.pi, 0.0)


def check_gauge_convention(count: int = 50):
    rng = np.random.default_rng(20109)
    residual_gap = 0.0
    misclassified = 0
    c_max = 0.0
    times = np.linspace(0.0, 10.0, 501)
    for _ in range(count):
        p = _random_params(rng)
        psi0 = _random_state(rng)
        c = fit_coefficients(p, psi0)
        cf = fit_coefficients(p, psi0, GAUGE_FLIP)
        residual_gap = max(residual_gap, abs(abs(cf[1] ** 2 - 2 * cf[2] * cf[3]) - abs(c[1] ** 2 + 2 * c[2] * c[3])))

        flipped = always_separable_coefficients(rng, sign_flip=True)
        canonical = always_separable_coefficients(rng)
        misclassified += not is_always_separable(flipped, p.J, basis_phases=GAUGE_FLIP).always_separable
        misclassified += is_always_separable(canonical, p.J, basis_phases=GAUGE_FLIP).always_separable
        misclassified += is_always_separable(flipped, p.J).always_separable
        state = basis_matrix(p, 0.0, GAUGE_FLIP) @ flipped
        c_max = max(c_max, float(np.max(concurrence(propagate_expm(p, state, times)))))
    return [
        CheckResult("gauge_residual_flip", residual_gap, 1e-12, "<"),
        CheckResult("gauge_classifier_misclassified", float(misclassified), 0.5, "<", f"{3 * count} decisions"),
        CheckResult("gauge_flipped_family_separable", c_max, 1e-9, "<"),
    ]


RK4_ORDER_PARAMS = ModelParams(1.0, 1.0, 0.7, 0.3)


def rk4_order(t_final: float = 5.0, steps: int = 200) -> float:
    psi0 = _random_state(np.random.default_rng(20110))
    exact = propagate_expm(RK4_ORDER_PARAMS, psi0, t_final)
    errs = [
        np.abs(propagate_rk4(RK4_ORDER_PARAMS, psi0, t_final, n).states[-1] - exact).max()
        for n in (steps, 2 * steps)
    ]
    return float(math.log2(errs[0] / errs[1]))


def simpson_richardson(t_final: float = 5.0, steps: int = 1024) -> float:
    psi0 = _random_state(np.random.default_rng(20111))
    values = [dynamic_phase(evolve(RK4_ORDER_PARAMS, psi0, t_final, n)) for n in (steps, 2 * steps)]
    return abs(values[1] - values[0])


def linalg_suite(count: int = 1000) -> float:
    rng = np.random.default_rng(20112)
    worst = 0.0
    for i in range(count):
        n = 2 + i % 3
        X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        M = 0.5 * (X + X.conj().T)
        w, V = eig_hermitian(M)
        I = np.eye(n)
        t1, t2 = rng.uniform(-3, 3, size=2)
        U1, U2 = expm_i_hermitian(M, t1), expm_i_hermitian(M, t2)
        worst = max(
            worst,
            np.abs(M @ V - V * w).max(),
            np.abs(V.conj().T @ V - I).max(),
            np.abs((V * w) @ V.conj().T - M).max(),
            np.abs(U1.conj().T @ U1 - I).max(),
            np.abs(U1 @ U2 - expm_i_hermitian(M, t1 + t2)).max(),
        )
    return float(worst)


def check_numerics():
    return [
        CheckResult("rk4_convergence_order", rk4_order(), (3.7, 4.3), "in"),
        CheckResult("simpson_richardson_residual", simpson_richardson(), 1e-10, "<"),
        CheckResult("linalg_property_suite", linalg_suite(), 1e-10, "<", "1000 random Hermitian"),
    ]


CHECKS = (
    Check("propagator_agreement", 1, "propagation", check_propagators),
    Check("pure_phase_oracle", 2, "phases", check_pure_phase_oracle),
    Check("mixed_phase_oracle", 3, "phases", check_mixed_phase_oracle),
    Check("ket00_example", 4, "phases", check_ket00_example),
    Check("concurrence_closed_form", 5, "concurrence", check_concurrence_closed_form),
    Check("separability_condition", 6, "concurrence", check_separability_condition),
    Check("recurrence", 7, "phases", check_recurrence),
    Check("separable_additivity", 8, "phases", check_separable_additivity),
    Check("gauge_convention", 9, "concurrence", check_gauge_convention),
    Check("numerics", 10, "numerics", check_numerics),
)


def select_checks(only: str | None = None) -> list[Check]:
    """Filter by check name, group name or criterion number (comma separated)."""
    if not only:
        return list(CHECKS)
    wanted = {w.strip() for w in only.split(",") if w.strip()}
    chosen = [c for c in CHECKS if c.name in wanted or c.group in wanted or str(c.criterion) in wanted]
    if not chosen:
        names = sorted({c.name for c in CHECKS} | {c.group for c in CHECKS})
        raise ValueError(f"--only {only!r} matches no check; choose from {', '.join(names)}")
    return chosen


def run_checks(checks, emit=print) -> list[CheckResult]:
    results = []
    for check in checks:
        start = time.perf_counter()
        rows = check.run()
        elapsed = time.perf_counter() - start
        for row in rows:
            emit(f"[{check.criterion:>2}] {row.line()}")
        results.extend(rows)
        emit(f"     {check.name} finished in {elapsed:.2f}s")
    return results
