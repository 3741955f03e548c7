import math

import numpy as np
import pytest

from spinphase import ModelParams
from spinphase.dynamics import (
    basis_matrix,
    basis_solution,
    characteristic_frequencies,
    evolve,
    fit_coefficients,
    propagate_analytic,
    propagate_expm,
    propagate_rk4,
)
from spinphase.errors import UndefinedBasisError
from spinphase.model import KET00, KET01, SINGLET, derived_angles, hamiltonian_lab

from conftest import random_params, random_state


def test_characteristic_frequencies():
    lam = characteristic_frequencies(ModelParams(1.0, math.pi / 2, 0.0, 0.25))
    np.testing.assert_allclose(lam, [0.75, -0.25, 1.75, -2.25])
    lam = characteristic_frequencies(ModelParams(1.0, 0.0, 2.0, 0.3))
    assert lam[2] == lam[3] == pytest.approx(-0.3)
    lam = characteristic_frequencies(ModelParams(1.0, 1.0, 0.4, 0.0))
    alpha = derived_angles(ModelParams(1.0, 1.0, 0.4, 0.0)).alpha
    np.testing.assert_allclose(lam, [0, 0, alpha, -alpha])


def test_singlet_mode():
    p = ModelParams(0.7, 1.1, -0.4, 0.35)
    for t in (0.0, 1.3):
        np.testing.assert_allclose(basis_solution(p, 1, t), np.exp(3j * p.J * t) * SINGLET, atol=1e-15)


def test_second_mode_transverse():
    psi = basis_solution(ModelParams(1.0, math.pi / 2, 0.0, 0.2), 2, 0.0)
    np.testing.assert_allclose(psi, np.array([-1, 0, 0, 1]) / math.sqrt(2), atol=1e-15)


def test_basis_orthonormal(rng):
    for _ in range(20):
        V = basis_matrix(random_params(rng))
        np.testing.assert_allclose(V.conj().T @ V, np.eye(4), atol=1e-12)


def test_basis_solves_schrodinger(rng):
    # i d/dt psi_k = H_lab psi_k, checked by central differences
    p = random_params(rng)
    t, h = 0.9, 1e-5
    for k in range(1, 5):
        d = (basis_solution(p, k, t + h) - basis_solution(p, k, t - h)) / (2 * h)
        np.testing.assert_allclose(1j * d, hamiltonian_lab(p, t) @ basis_solution(p, k, t), atol=1e-8)


def test_fit_named_states(reference):
    eta = derived_angles(reference).eta
    s, c = math.sin(eta), math.cos(eta)
    np.testing.assert_allclose(fit_coefficients(reference, SINGLET), [1, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(
        fit_coefficients(reference, KET01), [1 / math.sqrt(2), c / math.sqrt(2), s / 2, s / 2], atol=1e-15
    )
    np.testing.assert_allclose(
        fit_coefficients(reference, KET00),
        [0, -s / math.sqrt(2), -math.sin(eta / 2) ** 2, math.cos(eta / 2) ** 2],
        atol=1e-15,
    )


def test_analytic_single_mode_phase(reference):
    t = math.pi / (3 * reference.J)
    np.testing.assert_allclose(propagate_analytic(reference, [1, 0, 0, 0], t), -SINGLET, atol=1e-14)


def test_analytic_round_trip(rng):
    p, psi = random_params(rng), random_state(rng)
    np.testing.assert_allclose(propagate_analytic(p, fit_coefficients(p, psi), 0.0), psi, atol=1e-14)


def test_analytic_matches_expm(rng):
    for _ in range(10):
        p, psi = random_params(rng), random_state(rng)
        for t in (0.3, 1.7, 4.9):
            a = propagate_analytic(p, fit_coefficients(p, psi), t)
            assert np.abs(a - propagate_expm(p, psi, t)).max() < 1e-10


def test_expm_free_spin():
    p = ModelParams(0.8, 0.0, 0.3, 0.0)
    for t in (0.5, 3.0):
        np.testing.assert_allclose(propagate_expm(p, KET00, t), np.exp(-2j * 0.8 * t) * KET00, atol=1e-14)


def test_expm_identity_at_zero(rng):
    psi = random_state(rng)
    np.testing.assert_allclose(propagate_expm(random_params(rng), psi, 0.0), psi, atol=1e-15)


def test_expm_norm_preserved(rng):
    worst = 0.0
    for _ in range(1000):
        p, psi = random_params(rng), random_state(rng)
        worst = max(worst, abs(np.linalg.norm(propagate_expm(p, psi, rng.uniform(0, 20))) - 1))
    assert worst < 1e-12


def test_rk4_singlet_ray():
    p = ModelParams(1.4, 0.9, 1.1, -0.6)
    traj = propagate_rk4(p, SINGLET, 5.0, 2000)
    assert np.min(np.abs(traj.normalized() @ SINGLET.conj())) > 1 - 1e-8


def test_rk4_order(rng):
    p, psi = random_params(rng), random_state(rng)
    exact = propagate_expm(p, psi, 4.0)
    e1 = np.abs(propagate_rk4(p, psi, 4.0, 200).states[-1] - exact).max()
    e2 = np.abs(propagate_rk4(p, psi, 4.0, 400).states[-1] - exact).max()
    assert 3.7 <= math.log2(e1 / e2) <= 4.3


def test_rk4_zero_hamiltonian(rng):
    psi = random_state(rng)
    traj = propagate_rk4(ModelParams(0.0, 0.5, 1.0, 0.0), psi, 3.0, 64)
    np.testing.assert_allclose(traj.states, np.broadcast_to(psi, traj.states.shape), atol=1e-15)


@pytest.mark.parametrize("method", ["analytic", "expm", "rk4"])
def test_evolve_grid(method, reference):
    traj = evolve(reference, KET01, 2.0, 512, method)
    assert traj.times.shape == (513,)
    assert traj.times[-1] == 2.0
    assert traj.method == method
    assert traj.norm_drift < 1e-10
    np.testing.assert_allclose(traj.states[-1], propagate_expm(reference, KET01, 2.0), atol=1e-9)


def test_analytic_needs_alpha():
    p = ModelParams(1.0, 0.0, 2.0, 0.3)
    with pytest.raises(UndefinedBasisError):
        fit_coefficients(p, KET01)
    # the exponential propagator has no such restriction
    assert evolve(p, KET01, 1.0, 16, "expm").states.shape == (17, 4)


def test_evolve_rejects_bad_input(reference):
    with pytest.raises(ValueError):
        evolve(reference, KET01, 1.0, 16, "euler")
    with pytest.raises(ValueError):
        evolve(reference, KET01, -1.0, 16)
    with pytest.raises(ValueError):
        evolve(reference, np.array([1, 1, 0, 0]), 1.0, 16)
