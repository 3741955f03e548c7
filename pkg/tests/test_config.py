import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinphase import ModelParams
from spinphase.config import ScenarioConfig, dump_config, load_config, parse_config
from spinphase.errors import ConfigError
from spinphase.model import KET01

CUSTOM = """
B = 0.9
theta = 1.2
omega = -0.4
J = 0.3
initial_state = "custom"
amplitudes = ["0,0", "0.70710678,0", "-0.5,0", "0.5,0"]
t_final = 2.5
steps = 256
propagator = "rk4"
degeneracy_policy = "skip"

[tolerances]
degeneracy = 1e-7
"""


def test_defaults():
    cfg = parse_config("")
    assert cfg == ScenarioConfig()
    np.testing.assert_array_equal(cfg.initial_vector(), KET01)


def test_custom_renormalized():
    cfg = parse_config(CUSTOM)
    assert cfg.params == ModelParams(0.9, 1.2, -0.4, 0.3)
    assert np.linalg.norm(cfg.amplitudes) == pytest.approx(1, abs=1e-15)
    assert cfg.tolerances == {"degeneracy": 1e-7, "separability": 1e-9}
    assert cfg.propagator == "rk4" and cfg.degeneracy_policy == "skip"


def test_solution_amplitudes():
    cfg = parse_config(CUSTOM.replace('degeneracy_policy = "skip"', 'degeneracy_policy = "skip"\namplitude_basis = "solutions"'))
    from spinphase.dynamics import fit_coefficients

    np.testing.assert_allclose(fit_coefficients(cfg.params, cfg.initial_vector()), cfg.amplitudes, atol=1e-14)


def test_round_trip_identity():
    for cfg in (ScenarioConfig(), parse_config(CUSTOM)):
        again = parse_config(dump_config(cfg))
        assert again == cfg
        assert dump_config(again) == dump_config(cfg)


@given(
    st.floats(0, 5), st.floats(0, math.pi), st.floats(-5, 5), st.floats(-2, 2),
    st.floats(1e-3, 50), st.integers(16, 10_000),
    st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
)
def test_round_trip_property(B, theta, omega, J, t_final, steps, amps):
    amps = np.array(amps)
    if np.linalg.norm(amps) < 1e-3:
        return
    amps = tuple(amps / np.linalg.norm(amps))
    cfg = ScenarioConfig(ModelParams(B, theta, omega, J), "custom", amps, t_final=t_final, steps=steps)
    assert parse_config(dump_config(cfg)) == cfg


def test_load_from_file(tmp_path):
    path = tmp_path / "s.toml"
    path.write_text(CUSTOM)
    assert load_config(path) == parse_config(CUSTOM)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.toml")


@pytest.mark.parametrize(
    "text, field",
    [
        ("steps = 8", "steps"),
        ("steps = 1.5", "steps"),
        ("t_final = -1", "t_final"),
        ("propagator = 'euler'", "propagator"),
        ("degeneracy_policy = 'ignore'", "degeneracy_policy"),
        ("initial_state = 'ket02'", "initial_state"),
        ("initial_state = 'custom'", "amplitudes"),
        ("initial_state = 'custom'\namplitudes = ['1,0', '1,0', '0,0', '0,0']", "amplitudes"),
        ("initial_state = 'custom'\namplitudes = ['1;0', '0,0', '0,0', '0,0']", "amplitudes[0]"),
        ("amplitudes = ['1,0', '0,0', '0,0', '0,0']", "amplitudes"),
        ("B = -1", "B"),
        ("colour = 'red'", "unknown key"),
        ("[tolerances]\nfoo = 1", "tolerances.foo"),
        ("[tolerances]\ndegeneracy = 0", "tolerances.degeneracy"),
        ("amplitude_basis = 'polar'", "amplitude_basis"),
        ("steps = \nB = 1", "line 1"),
    ],
)
def test_errors_name_the_field(text, field):
    with pytest.raises(ConfigError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_config(text)
