import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinphase import ModelParams
from spinphase.dynamics import basis_matrix, fit_coefficients, propagate_expm
from spinphase.entanglement import (
    concurrence,
    concurrence_closed_form,
    concurrence_purity,
    is_always_separable,
    separability_invariant,
    separability_scan,
)
from spinphase.model import KET00, KET01, SINGLET

from conftest import REFERENCE, random_params, random_state

SEPARABLE_C = np.array([0, 1 / math.sqrt(2), -0.5, 0.5])


def test_named_states():
    assert concurrence(KET00) == 0.0
    assert concurrence(SINGLET) == pytest.approx(1.0)


@given(st.floats(0, math.pi / 2), st.floats(-math.pi, math.pi))
def test_schmidt_pair(mu, phi):
    psi = np.array([math.cos(mu), 0, 0, math.sin(mu) * np.exp(1j * phi)])
    assert concurrence(psi) == pytest.approx(2 * math.cos(mu) * math.sin(mu), abs=1e-15)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_local_products_are_separable(a, b, c, d):
    u = np.array([math.cos(a), np.exp(1j * b) * math.sin(a)])
    v = np.array([math.cos(c), np.exp(1j * d) * math.sin(c)])
    assert concurrence(np.kron(u, v)) < 1e-15


def test_purity_route_agrees(rng):
    psi = np.stack([random_state(rng) for _ in range(100)])
    np.testing.assert_allclose(concurrence(psi), concurrence_purity(psi), atol=1e-7)
    assert np.all((concurrence(psi) >= 0) & (concurrence(psi) <= 1))


def test_closed_form_ket00_vanishes(rng):
    for _ in range(10):
        p = random_params(rng)
        c = fit_coefficients(p, KET00)
        assert np.max(concurrence_closed_form(c, p.J, np.linspace(0, 10, 101))) < 1e-15


def test_closed_form_ket01():
    c = fit_coefficients(REFERENCE, KET01)
    t = np.linspace(0, 10, 101)
    np.testing.assert_allclose(concurrence_closed_form(c, REFERENCE.J, t), np.abs(np.sin(4 * REFERENCE.J * t)), atol=1e-14)


def test_closed_form_singlet():
    np.testing.assert_allclose(concurrence_closed_form([1, 0, 0, 0], 0.3, np.linspace(0, 5, 7)), 1.0)


def test_closed_form_matches_numerics(rng):
    for _ in range(50):
        p, psi = random_params(rng), random_state(rng)
        t = rng.uniform(0, 10)
        numeric = concurrence(propagate_expm(p, psi, t))
        assert abs(numeric - concurrence_closed_form(fit_coefficients(p, psi), p.J, t)) < 1e-9


def test_classifier_separable_family():
    report = is_always_separable(SEPARABLE_C, 0.5)
    assert report.always_separable and report.cyclic_separable
    assert report.recurrence_period is None
    p = ModelParams(1.1, 0.9, -0.3, 0.5)
    _, conc = separability_scan(p, basis_matrix(p) @ SEPARABLE_C, 10.0, 1001)
    assert conc.max() < 1e-10


def test_classifier_ket01():
    report = is_always_separable(fit_coefficients(REFERENCE, KET01), REFERENCE.J)
    assert not report.always_separable
    assert report.cyclic_separable
    assert report.recurrence_period == pytest.approx(math.pi / (4 * REFERENCE.J))
    period = report.recurrence_period
    assert np.max(concurrence(propagate_expm(REFERENCE, KET01, [period, 2 * period, 3 * period]))) < 1e-12


def test_classifier_singlet():
    report = is_always_separable([1, 0, 0, 0], 0.5)
    assert not report.always_separable and not report.cyclic_separable
    assert report.condition_residual == 0
    assert report.c1_residual == 1


def test_gauge_override_flips_sign():
    flip = (0, 0, math.pi, 0)
    c = np.array([0.2, 0.5 + 0.1j, -0.3, 0.6j])
    assert separability_invariant(c, flip) == pytest.approx(c[1] ** 2 - 2 * c[2] * c[3])
    flipped = np.array([0, 1 / math.sqrt(2), 0.5, 0.5])
    assert is_always_separable(flipped, 0.5, basis_phases=flip).always_separable
    assert not is_always_separable(SEPARABLE_C, 0.5, basis_phases=flip).always_separable
    # same physical state described in both gauges
    p = random_params(np.random.default_rng(3))
    psi = basis_matrix(p, 0.0, flip) @ flipped
    np.testing.assert_allclose(fit_coefficients(p, psi), SEPARABLE_C, atol=1e-14)


def test_scan_examples():
    _, conc = separability_scan(REFERENCE, KET00, 10.0, 501)
    assert conc.max() < 1e-10
    p = REFERENCE.replace(J=0.5)
    t, conc = separability_scan(p, KET01, 2.0, 2001)
    k = int(np.argmax(conc))
    assert conc[k] == pytest.approx(1.0, abs=1e-6)
    assert t[k] == pytest.approx(math.pi / 4, abs=2e-3)


@pytest.mark.parametrize("propagator", ["analytic", "expm", "rk4"])
def test_scan_local_evolution(propagator, rng):
    p = random_params(rng).replace(J=0.0)
    u, v = random_state(rng)[:2], random_state(rng)[2:]
    psi = np.kron(u / np.linalg.norm(u), v / np.linalg.norm(v))
    _, conc = separability_scan(p, psi, 5.0, 51, propagator)
    assert conc.max() < 1e-10


def test_scan_rejects_bad_input():
    with pytest.raises(ValueError):
        separability_scan(REFERENCE, KET01, 1.0, 1)
    with pytest.raises(ValueError):
        separability_scan(REFERENCE, KET01, 1.0, 10, "euler")
