"""Scenario configuration: physical constants, orbit, ground devices and radios.

Angles are stored in degrees (the unit used in configuration files) and
exposed in radians through properties. Every invariant is checked once, at
construction time, so downstream modules never re-validate.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration value. ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 3e8
    g: float = 9.8
    R: float = 6_371_000.0
    omega_E: float = 7.292e-5

    def __post_init__(self):
        for name in ("c", "g", "R", "omega_E"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"constants.{name}", "must be strictly positive")


@dataclass(frozen=True)
class OrbitConfig:
    H: float = 550e3
    inclination_deg: float = 15.0

    def __post_init__(self):
        if not self.H > 0:
            raise ConfigError("orbit.H", "must be > 0")
        if not 0.0 <= self.inclination_deg <= 180.0:
            raise ConfigError("orbit.inclination_deg", "must lie in [0, 180]")

    @property
    def inclination(self) -> float:
        return math.radians(self.inclination_deg)


@dataclass(frozen=True)
class GroundDevice:
    theta_c_deg: float = 56.0
    theta_min_deg: float = 10.0
    theta_max_deg: float = 50.0
    t_cv: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta_min_deg <= self.theta_max_deg <= self.theta_c_deg <= 90.0:
            raise ConfigError(
                "theta",
                "need 0 <= theta_min <= theta_max <= theta_c <= 90 deg, got "
                f"{self.theta_min_deg}, {self.theta_max_deg}, {self.theta_c_deg}",
            )

    @property
    def theta_c(self) -> float:
        return math.radians(self.theta_c_deg)

    @property
    def theta_min(self) -> float:
        return math.radians(self.theta_min_deg)

    @property
    def theta_max(self) -> float:
        return math.radians(self.theta_max_deg)


@dataclass(frozen=True)
class RadioConfig:
    f_c: float = 868e6
    B: float = 250e3
    SF: int = 7
    s_exp: int = 0
    t0: float = 0.0

    def __post_init__(self):
        if isinstance(self.SF, bool) or int(self.SF) != self.SF or not 5 <= self.SF <= 12:
            raise ConfigError("SF", f"must be an integer in [5, 12], got {self.SF!r}")
        if not self.B > 0:
            raise ConfigError("B", "must be > 0")
        if not self.f_c > self.B / 2:
            raise ConfigError("f_c", "must exceed B/2")
        if int(self.s_exp) != self.s_exp or not 0 <= self.s_exp <= self.SF:
            raise ConfigError("s_exp", f"must be an integer in [0, SF], got {self.s_exp!r}")
        object.__setattr__(self, "SF", int(self.SF))
        object.__setattr__(self, "s_exp", int(self.s_exp))

    # derived chirp quantities
    @property
    def M(self) -> int:
        return 1 << self.SF

    @property
    def T(self) -> float:
        return 1.0 / self.B

    @property
    def Ts(self) -> float:
        return self.M / self.B

    @property
    def Td(self) -> float:
        return (1 << self.s_exp) / self.B

    @property
    def N(self) -> int:
        return self.M >> self.s_exp

    @property
    def f_min(self) -> float:
        return self.f_c - self.B / 2

    @property
    def chirp_rate(self) -> float:
        """Frequency sweep slope B**2 / 2**SF in Hz/s."""
        return self.B**2 / self.M


@dataclass(frozen=True)
class ScenarioConfig:
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    orbit: OrbitConfig = field(default_factory=OrbitConfig)
    device_A: GroundDevice = field(default_factory=GroundDevice)
    device_B: GroundDevice = field(
        default_factory=lambda: GroundDevice(theta_c_deg=56.2, t_cv=math.nan)
    )
    distance_d: float = 10e3
    radio_A: RadioConfig = field(default_factory=RadioConfig)
    radio_B: RadioConfig = field(default_factory=RadioConfig)
    tau: float = 0.0

    def __post_init__(self):
        if not self.distance_d >= 0:
            raise ConfigError("distance_d", "must be >= 0")
        if math.isnan(self.device_B.t_cv):
            # deferred import: visibility depends on this module
            from .visibility import delta_t_AB_for

            dt = delta_t_AB_for(self.constants, self.orbit, self.device_A, self.device_B, self.distance_d)
            object.__setattr__(self, "device_B", replace(self.device_B, t_cv=self.device_A.t_cv + dt))
        if self.device_A.t_cv > self.device_B.t_cv:
            raise ConfigError("device_B.t_cv", "device A must reach its central time first")

    def with_radios(self, radio_A: RadioConfig, radio_B: RadioConfig | None = None) -> "ScenarioConfig":
        return replace(self, radio_A=radio_A, radio_B=radio_B if radio_B is not None else radio_A)

    def rederive(self, **changes) -> "ScenarioConfig":
        """Copy with ``changes`` applied and device B's central time derived afresh."""
        base = replace(self, **changes)
        return replace(base, device_B=replace(base.device_B, t_cv=math.nan))


_SECTIONS = {
    "constants": PhysicalConstants,
    "orbit": OrbitConfig,
    "device_A": GroundDevice,
    "device_B": GroundDevice,
    "radio_A": RadioConfig,
    "radio_B": RadioConfig,
}

PRESETS: dict[str, dict[str, Any]] = {
    "default": {},
    "ber-paper": {
        "device_A": {"theta_c_deg": 89.0, "theta_min_deg": 10.0, "theta_max_deg": 88.0},
        "device_B": {"theta_c_deg": 89.2, "theta_min_deg": 10.0, "theta_max_deg": 88.0},
    },
}


def _merge(base: Mapping[str, Any], over: Mapping[str, Any]) -> dict[str, Any]:
    out = dict(base)
    for key, value in over.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), Mapping):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def scenario_from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    """Build a validated scenario; omitted fields take the defaults."""
    if not isinstance(data, Mapping):
        raise ConfigError("<root>", "configuration must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r}")
    preset = data.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}")
        data = _merge(PRESETS[preset], {k: v for k, v in data.items() if k != "preset"})

    unknown = set(data) - set(_SECTIONS) - {"schema_version", "distance_d", "tau", "radio"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")

    kwargs: dict[str, Any] = {}
    shared_radio = data.get("radio", {})
    for name, cls in _SECTIONS.items():
        section = data.get(name)
        if name.startswith("radio"):
            section = _merge(shared_radio, section or {})
        if section is None:
            if name == "device_B":
                section = {"theta_c_deg": 56.2}
            else:
                continue
        if not isinstance(section, Mapping):
            raise ConfigError(name, "must be an object")
        allowed = set(cls.__dataclass_fields__)
        bad = set(section) - allowed
        if bad:
            raise ConfigError(f"{name}.{sorted(bad)[0]}", "unknown field")
        section = dict(section)
        if name == "device_B" and section.get("t_cv") is None:
            section["t_cv"] = math.nan
        try:
            kwargs[name] = cls(**section)
        except ConfigError as exc:
            raise ConfigError(f"{name}.{exc.field}" if "." not in exc.field else exc.field,
                              str(exc).split(": ", 1)[1]) from None
        except TypeError as exc:
            raise ConfigError(name, str(exc)) from None
    for key in ("distance_d", "tau"):
        if key in data:
            kwargs[key] = float(data[key])
    return ScenarioConfig(**kwargs)


def load_scenario(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("<file>", str(exc)) from None
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError("<parse>", str(exc)) from None
    return scenario_from_dict(data)


def scenario_to_dict(scenario: ScenarioConfig) -> dict[str, Any]:
    out: dict[str, Any] = {"schema_version": SCHEMA_VERSION}
    for name in _SECTIONS:
        out[name] = asdict(getattr(scenario, name))
    out["distance_d"] = scenario.distance_d
    out["tau"] = scenario.tau
    return out


def dump_scenario(scenario: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2))


def preset_scenario(name: str = "default", **overrides: Any) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}")
    return scenario_from_dict(_merge(PRESETS[name], overrides))
