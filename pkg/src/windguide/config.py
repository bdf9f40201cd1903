"""INI-style run configuration.

Every section and key is optional; missing keys keep the library defaults.
Angles are given in degrees under keys ending in ``_deg``. Example::

    [aircraft]
    cd0 = 0.015
    mu_max_deg = 30

    [wind]
    kind = sinusoidal
    w_m = 2.0
    omega_w = 0.01

    [scenario]
    kind = adjusted
    flight_time = 1200

    [sweep]
    omegas = 0.005, 0.0085, 0.0143

Unknown sections or keys raise :class:`ConfigError` naming the key and line.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace

from .airframe import AircraftParams, GuidanceConfig, NormalizationBasis
from .dynamics import State
from .scenario import DEFAULT_ALTITUDE_FT, ScenarioSpec
from .tracking import TrackingGains
from .windfield import WindFieldParams

DEFAULT_OMEGAS = (0.005, 0.0085, 0.0143, 0.0242, 0.041, 0.069, 0.118, 0.2)


class ConfigError(ValueError):
    """Invalid configuration text or value."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class SweepSettings:
    d_psi0: float = math.radians(5.0)
    omegas: tuple = DEFAULT_OMEGAS
    kinds: tuple = ("adjusted", "adjusted-airspeed-only")


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: a scenario plus sweep settings."""

    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    sweep: SweepSettings = field(default_factory=SweepSettings)


def _float(text):
    return float(text)


def _optional_float(text):
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


def _optional_int(text):
    return None if text.strip().lower() in ("", "none") else int(text)


def _floats(text):
    items = [item for item in re.split(r"[,\s]+", text.strip()) if item]
    if not items:
        raise ValueError("empty list")
    return tuple(float(item) for item in items)


def _words(text):
    items = [item for item in re.split(r"[,\s]+", text.strip()) if item]
    if not items:
        raise ValueError("empty list")
    return tuple(items)


def _deg(text):
    return math.radians(float(text))


# section -> key -> (target field, parser)
SCHEMA = {
    "aircraft": {
        "cd0": ("cd0", _float), "k_induced": ("k_induced", _float),
        "rho_bar": ("rho_bar", _float),
        "cl_min": ("cl_min", _float), "cl_max": ("cl_max", _float),
        "cl_cruise": ("cl_cruise", _float),
        "p_min": ("p_min", _float), "p_max": ("p_max", _float),
        "mu_max_deg": ("mu_max", _deg),
        "p_rate_max": ("p_rate_max", _float), "cl_rate_max": ("cl_rate_max", _float),
        "mu_rate_max": ("mu_rate_max", _float),
        "v_bar_min": ("v_bar_min", _optional_float), "v_bar_max": ("v_bar_max", _optional_float),
    },
    "basis": {
        "v_n": ("v_n", _float), "mass": ("mass", _float),
        "gravity": ("gravity", _float), "wing_area": ("wing_area", _float),
    },
    "wind": {
        "kind": ("kind", str.strip), "w_m": ("w_m", _float),
        "psi_w_deg": ("psi_w", _deg), "omega_w": ("omega_w", _float),
        "phase_deg": ("phase", _deg),
        "ou_sigma": ("ou_sigma", _float), "ou_tau": ("ou_tau", _float),
        "seed": ("seed", _optional_int),
    },
    "guidance": {
        "dt_update": ("dt_update", _float), "dv_max": ("dv_max", _float),
        "dpsi_max_deg": ("dpsi_max", _deg),
        "fd_step_v": ("fd_step_v", _float), "fd_step_psi": ("fd_step_psi", _float),
        "levenberg_lambda0": ("levenberg_lambda0", _float),
    },
    "gains": {
        "k_v": ("k_v", _float), "k_psi": ("k_psi", _float), "k_gamma": ("k_gamma", _float),
    },
    "scenario": {
        "kind": ("kind", str.strip), "flight_time": ("flight_time", _float),
        "sim_rate": ("sim_rate", _float), "output_rate": ("output_rate", _float),
        "psi0_deg": ("psi0", _deg), "altitude": ("altitude", _float),
        "v0": ("v0", _optional_float),
    },
    "sweep": {
        "d_psi0_deg": ("d_psi0", _deg), "omegas": ("omegas", _floats),
        "kinds": ("kinds", _words),
    },
}


def _key_lines(text: str) -> dict:
    """Map ``(section, key)`` to its 1-based line number."""
    lines, section = {}, None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        header = re.fullmatch(r"\[([^\]]+)\]", line)
        if header:
            section = header.group(1).strip()
            lines.setdefault((section, None), number)
            continue
        match = re.match(r"([^=:]+)[=:]", line)
        if match and section is not None:
            lines.setdefault((section, match.group(1).strip().lower()), number)
    return lines


def _parse_value(section: str, key: str, text: str, line: int | None):
    known = SCHEMA.get(section)
    if known is None:
        raise ConfigError(f"unknown section [{section}]", key=section, line=line)
    if key not in known:
        raise ConfigError(f"unknown key in [{section}]", key=f"{section}.{key}", line=line)
    target, parser = known[key]
    try:
        return target, parser(text)
    except ValueError as exc:
        raise ConfigError(f"bad value {text!r}: {exc}", key=f"{section}.{key}", line=line) from None


def parse_overrides(pairs) -> dict:
    """Turn ``["wind.w_m=3", ...]`` into ``{("wind", "w_m"): "3"}``."""
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ConfigError(f"override {pair!r} is not of the form section.key=value")
        name, value = pair.split("=", 1)
        if "." not in name:
            raise ConfigError(f"override key {name!r} needs a section prefix", key=name)
        section, key = name.strip().split(".", 1)
        out[(section.strip().lower(), key.strip().lower())] = value.strip()
    return out


def load_config(text: str | None = None, overrides=None, seed: int | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from INI ``text`` plus ``section.key=value`` overrides.

    Parameters
    ----------
    text : str, optional
        Configuration file contents; ``None`` means all defaults.
    overrides : iterable of str or dict, optional
        Applied after the file.
    seed : int, optional
        Shortcut for ``wind.seed``.
    """
    values = {name: {} for name in SCHEMA}
    if text:
        parser = configparser.ConfigParser(interpolation=None, strict=True,
                                           default_section="__none__")
        try:
            parser.read_string(text)
        except configparser.DuplicateOptionError as exc:
            raise ConfigError("duplicate key", key=f"{exc.section}.{exc.option}", line=exc.lineno) from None
        except configparser.DuplicateSectionError as exc:
            raise ConfigError("duplicate section", key=exc.section, line=exc.lineno) from None
        except configparser.MissingSectionHeaderError as exc:
            raise ConfigError("key outside any section", line=exc.lineno) from None
        except configparser.ParsingError as exc:
            line = exc.errors[0][0] if exc.errors else None
            raise ConfigError("unparseable line", line=line) from None
        lines = _key_lines(text)
        for section in parser.sections():
            name = section.strip().lower()
            if name not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]", key=section,
                                  line=lines.get((section, None)))
            for key, raw in parser.items(section):
                target, value = _parse_value(name, key, raw, lines.get((section, key)))
                values[name][target] = value
    if isinstance(overrides, dict):
        pairs = overrides
    else:
        pairs = parse_overrides(overrides)
    for (section, key), raw in pairs.items():
        target, value = _parse_value(section, key, raw, None)
        values[section][target] = value
    if seed is not None:
        values["wind"]["seed"] = int(seed)
    return _build(values)


def _build(values: dict) -> RunConfig:
    def make(cls, section, **extra):
        try:
            return cls(**values[section], **extra)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), key=section) from None

    basis = make(NormalizationBasis, "basis")
    aircraft = make(AircraftParams, "aircraft")
    wind = make(WindFieldParams, "wind")
    guidance = make(GuidanceConfig, "guidance")
    gains = make(TrackingGains, "gains")
    sweep = make(SweepSettings, "sweep")

    scen = dict(values["scenario"])
    psi0 = scen.pop("psi0", 0.0)
    altitude = scen.pop("altitude", DEFAULT_ALTITUDE_FT)
    v0 = scen.pop("v0", None)
    initial = None
    if psi0 != 0.0 or altitude != DEFAULT_ALTITUDE_FT or v0 is not None:
        v_start = aircraft.endurance_speed if v0 is None else v0 / basis.v_n
        initial = State(v_start, psi0, 0.0, 0.0, 0.0, altitude / basis.length_unit)
    try:
        spec = ScenarioSpec(initial_state=initial, guidance=guidance, wind=wind, gains=gains,
                            aircraft=aircraft, basis=basis, **scen)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), key="scenario") from None
    return RunConfig(scenario=spec, sweep=sweep)


def load_config_file(path, overrides=None, seed: int | None = None) -> RunConfig:
    """Read ``path`` (``None`` for defaults) and call :func:`load_config`."""
    text = None
    if path is not None:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return load_config(text, overrides, seed)


def dump_config(config: RunConfig) -> str:
    """Render ``config`` back to INI text (round-trips through :func:`load_config`)."""
    spec, sweep = config.scenario, config.sweep
    sources = {
        "aircraft": spec.aircraft, "basis": spec.basis, "wind": spec.wind,
        "guidance": spec.guidance, "gains": spec.gains, "sweep": sweep,
    }
    out = []
    for section, keys in SCHEMA.items():
        out.append(f"[{section}]")
        for key, (target, parser) in keys.items():
            if section == "scenario":
                state = spec.start_state()
                explicit = state.v_bar != spec.aircraft.endurance_speed
                value = {
                    "kind": spec.kind, "flight_time": spec.flight_time, "sim_rate": spec.sim_rate,
                    "output_rate": spec.output_rate, "psi0": state.psi,
                    "altitude": state.h_bar * spec.basis.length_unit,
                    "v0": state.v_bar * spec.basis.v_n if explicit else None,
                }[target]
            else:
                value = getattr(sources[section], target)
            if parser is _deg:
                value = math.degrees(value)
            if isinstance(value, tuple):
                value = ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            elif value is None:
                value = "none"
            elif isinstance(value, float):
                value = repr(value)
            out.append(f"{key} = {value}")
        out.append("")
    return "\n".join(out)


def with_overrides(config: RunConfig, **scenario_fields) -> RunConfig:
    """Copy of ``config`` with :class:`ScenarioSpec` fields replaced."""
    return replace(config, scenario=replace(config.scenario, **scenario_fields))


__all__ = [
    "ConfigError", "RunConfig", "SweepSettings", "SCHEMA", "DEFAULT_OMEGAS",
    "load_config", "load_config_file", "parse_overrides", "dump_config", "with_overrides",
]
