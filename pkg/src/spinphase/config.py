"""Scenario configuration files.

A scenario is a flat TOML file::

    B = 1.0
    theta = 1.0471975511965976
    omega = 0.5
    J = 0.2
    initial_state = "custom"          # ket00 | ket01 | ket10 | ket11 | singlet | custom
    amplitudes = ["0,0", "0.70710678,0", "-0.5,0", "0.5,0"]   # "re,im" per basis state
    amplitude_basis = "solutions"     # computational (|00>,|01>,|10>,|11>) | solutions
    t_final = 1.5
    steps = 1024
    propagator = "expm"               # analytic | expm | rk4
    degeneracy_policy = "error"       # error | skip

    [tolerances]
    degeneracy = 1e-6
    separability = 1e-9
"""
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import tomli
import tomli_w

from .dynamics import PROPAGATORS, state_from_coefficients
from .errors import ConfigError
from .model import NAMED_STATES, ModelParams
from .phases import DEGENERACY_TOL, POLICIES

DEFAULT_TOLERANCES = {"degeneracy": DEGENERACY_TOL, "separability": 1e-9}
INITIAL_STATES = tuple(NAMED_STATES) + ("custom",)
AMPLITUDE_BASES = ("computational", "solutions")
MIN_STEPS = 16
_RENORM_TOL = 1e-6
_KNOWN_KEYS = {
    "B", "theta", "omega", "J", "initial_state", "amplitudes", "amplitude_basis", "t_final", "steps",
    "propagator", "degeneracy_policy", "tolerances",
}


@dataclass(frozen=True)
class ScenarioConfig:
    params: ModelParams = field(default_factory=lambda: ModelParams(1.0, math.pi / 3, 0.5, 0.2))
    initial_state: str = "ket01"
    amplitudes: tuple[complex, ...] | None = None
    amplitude_basis: str = "computational"
    """How custom amplitudes are read: computational-basis components, or
    coefficients ``c_k`` of the analytic basis solutions at ``t = 0``."""
    t_final: float = 1.5
    steps: int = 1024
    propagator: str = "expm"
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    degeneracy_policy: str = "error"

    def __post_init__(self):
        if self.initial_state not in INITIAL_STATES:
            raise ConfigError(f"initial_state: expected one of {INITIAL_STATES}, got {self.initial_state!r}")
        if self.initial_state == "custom":
            if self.amplitudes is None or len(self.amplitudes) != 4:
                raise ConfigError("amplitudes: custom initial_state needs four 're,im' amplitudes")
            amps = np.array(self.amplitudes, dtype=complex)
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1.0) > _RENORM_TOL:
                raise ConfigError(f"amplitudes: norm {norm:.9g} is not within {_RENORM_TOL} of 1")
            if abs(norm - 1.0) > 1e-14:
                amps = amps / norm
            object.__setattr__(self, "amplitudes", tuple(complex(a) for a in amps))
        elif self.amplitudes is not None:
            raise ConfigError("amplitudes: only allowed with initial_state = 'custom'")
        if self.amplitude_basis not in AMPLITUDE_BASES:
            raise ConfigError(f"amplitude_basis: expected one of {AMPLITUDE_BASES}, got {self.amplitude_basis!r}")
        if not (isinstance(self.t_final, (int, float)) and math.isfinite(self.t_final) and self.t_final > 0):
            raise ConfigError(f"t_final: must be a positive number, got {self.t_final!r}")
        object.__setattr__(self, "t_final", float(self.t_final))
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < MIN_STEPS:
            raise ConfigError(f"steps: must be an integer >= {MIN_STEPS}, got {self.steps!r}")
        if self.propagator not in PROPAGATORS:
            raise ConfigError(f"propagator: expected one of {PROPAGATORS}, got {self.propagator!r}")
        if self.degeneracy_policy not in POLICIES:
            raise ConfigError(f"degeneracy_policy: expected one of {POLICIES}, got {self.degeneracy_policy!r}")
        tols = dict(DEFAULT_TOLERANCES)
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"tolerances.{name}: unknown tolerance (known: {sorted(DEFAULT_TOLERANCES)})")
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(f"tolerances.{name}: must be a positive number, got {value!r}")
            tols[name] = float(value)
        object.__setattr__(self, "tolerances", tols)

    def initial_vector(self) -> np.ndarray:
        if self.initial_state == "custom":
            amps = np.array(self.amplitudes, dtype=complex)
            if self.amplitude_basis == "solutions":
                return state_from_coefficients(self.params, amps)
            return amps
        return NAMED_STATES[self.initial_state].copy()

    def with_tolerance(self, name: str, value: float) -> "ScenarioConfig":
        return replace(self, tolerances={**self.tolerances, name: value})


def _parse_amplitude(item, index: int) -> complex:
    where = f"amplitudes[{index}]"
    if isinstance(item, str):
        parts = item.split(",")
        if len(parts) != 2:
            raise ConfigError(f"{where}: expected 're,im', got {item!r}")
        try:
            return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise ConfigError(f"{where}: expected 're,im', got {item!r}") from None
    if isinstance(item, list) and len(item) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in item
    ):
        return complex(item[0], item[1])
    raise ConfigError(f"{where}: expected 're,im', got {item!r}")


def config_from_mapping(data: dict) -> ScenarioConfig:
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    defaults = ScenarioConfig()
    p = defaults.params
    try:
        params = ModelParams(
            data.get("B", p.B), data.get("theta", p.theta), data.get("omega", p.omega), data.get("J", p.J)
        )
    except ConfigError as exc:
        raise ConfigError(f"params: {exc}") from None
    amplitudes = data.get("amplitudes")
    if amplitudes is not None:
        if not isinstance(amplitudes, list):
            raise ConfigError("amplitudes: expected a list of four 're,im' strings")
        amplitudes = tuple(_parse_amplitude(a, i) for i, a in enumerate(amplitudes))
    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances: expected a table of name = value")
    return ScenarioConfig(
        params=params,
        initial_state=data.get("initial_state", defaults.initial_state),
        amplitudes=amplitudes,
        amplitude_basis=data.get("amplitude_basis", defaults.amplitude_basis),
        t_final=data.get("t_final", defaults.t_final),
        steps=data.get("steps", defaults.steps),
        propagator=data.get("propagator", defaults.propagator),
        tolerances=tolerances,
        degeneracy_policy=data.get("degeneracy_policy", defaults.degeneracy_policy),
    )


def parse_config(text: str) -> ScenarioConfig:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from None
    return config_from_mapping(data)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_config(text)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def config_to_mapping(cfg: ScenarioConfig) -> dict:
    data = {
        "B": cfg.params.B,
        "theta": cfg.params.theta,
        "omega": cfg.params.omega,
        "J": cfg.params.J,
        "initial_state": cfg.initial_state,
        "t_final": cfg.t_final,
        "steps": cfg.steps,
        "propagator": cfg.propagator,
        "degeneracy_policy": cfg.degeneracy_policy,
    }
    if cfg.amplitudes is not None:
        data["amplitudes"] = [f"{a.real!r},{a.imag!r}" for a in cfg.amplitudes]
        data["amplitude_basis"] = cfg.amplitude_basis
    data["tolerances"] = dict(cfg.tolerances)
    return data


def dump_config(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(config_to_mapping(cfg))
