"""
Run configuration: JSON files plus command-line overrides.

User-facing frequencies are Omega/2pi and Delta/2pi in MHz; they are
converted to angular rad/us here and nowhere else.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .experiments import (DurationSweep, Protocol, RobustnessSweep,
                          ScenarioKind, ScenarioSpec, default_phase)
from .propagator import Method, PropagationConfig
from .pulses import CorrectionParams, PulseFamily, PulseParams

__all__ = ["ConfigError", "RunConfig", "parse_config", "emit_config",
           "mhz_to_angular", "angular_to_mhz", "DEFAULTS"]


class ConfigError(ValueError):
    pass


def mhz_to_angular(f_mhz):
    """Omega/2pi in MHz -> Omega in rad/us."""
    return 2 * math.pi * f_mhz


def angular_to_mhz(w):
    return w / (2 * math.pi)


DEFAULTS = {
    "kind": "trace",
    "protocol": "sa",
    "phase_a_deg": "auto",
    "initial_state": "auto",
    "step_count": 20000,
    "method": "magnus4",
    "record_stride": 20,
    "workers": 1,
    "preview_points": 401,
    "output_dir": ".",
    "csv": True,
    "plot": False,
    # duration sweep
    "T_min_us": 0.5,
    "T_max_us": 6.0,
    "T_count": 24,
    "protocols": ["stirap", "sa"],
    # robustness grid
    "sigma_min_us": 0.2,
    "sigma_max_us": 1.0,
    "sigma_count": 9,
    "dt_ratio_max": 2.0,
    "dt_count": 9,
    "center_sigma_us": 0.6,
    "center_delta_t_us": 0.6,
}

_OPTIONAL_NO_DEFAULT = ("family", "omega0_mhz", "delta_mhz", "T_us",
                        "sigma_us", "sigma_over_T", "delta_t_us", "dt_over_T")
KNOWN_KEYS = frozenset(DEFAULTS) | frozenset(_OPTIONAL_NO_DEFAULT)


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved invocation.

    ``resolved`` holds the user-facing key/value pairs after defaults and
    overrides; it is what gets echoed into output metadata.
    """

    scenario: ScenarioSpec
    output_dir: Path
    csv: bool = True
    plot: bool = False
    resolved: dict = field(default_factory=dict, compare=False)


def _load(path):
    if path is None:
        return {}
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not text.strip():
        return {}
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def _number(cfg, key, positive=False, nonneg=False, integer=False):
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{key} must be finite")
    if integer and int(v) != v:
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    if positive and not v > 0:
        raise ConfigError(f"{key} must be > 0, got {v!r}")
    if nonneg and not v >= 0:
        raise ConfigError(f"{key} must be >= 0, got {v!r}")
    return int(v) if integer else float(v)


def _choice(cfg, key, enum_cls):
    try:
        return enum_cls(cfg[key])
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"{key} must be one of {{{allowed}}}, "
                          f"got {cfg[key]!r}") from None


def _uses_sa(kind, protocol, protocols):
    if kind is ScenarioKind.PULSE_PREVIEW:
        return True
    if kind is ScenarioKind.POPULATION_TRACE:
        return protocol is Protocol.SA_STIRAP
    return Protocol.SA_STIRAP in protocols


def _missing(cfg, kind, family, protocol, protocols):
    need = ["family", "omega0_mhz"]
    single = kind in (ScenarioKind.POPULATION_TRACE, ScenarioKind.PULSE_PREVIEW)
    if single:
        need.append("T_us")
    missing = [k for k in need if k not in cfg]
    if family in (PulseFamily.GAUSSIAN, PulseFamily.EXPONENTIAL) \
            and kind is not ScenarioKind.ROBUSTNESS_GRID:
        keys = ("sigma_us", "sigma_over_T") if single else ("sigma_over_T",)
        if not any(k in cfg for k in keys):
            missing.append(" or ".join(keys))
    if family is PulseFamily.GAUSSIAN and single:
        if "delta_t_us" not in cfg and "dt_over_T" not in cfg:
            missing.append("delta_t_us or dt_over_T")
    if family is PulseFamily.GAUSSIAN and kind is ScenarioKind.EFFICIENCY_VS_DURATION:
        if "dt_over_T" not in cfg:
            missing.append("dt_over_T")
    if _uses_sa(kind, protocol, protocols) and "delta_mhz" not in cfg:
        missing.append("delta_mhz")
    return missing


def parse_config(path=None, overrides=None, kind=None):
    """Resolve a JSON config file and flag overrides into a RunConfig.

    Parameters
    ----------
    path : str or Path, optional
        JSON object with flat keys; see ``DEFAULTS`` and the README.
    overrides : dict, optional
        Values from flags; they win over the file. ``None`` values are
        ignored.
    kind : str, optional
        Scenario kind from the subcommand; wins over a ``kind`` key.

    Raises
    ------
    ConfigError
        On unknown keys, missing required keys (all listed at once) and
        out-of-range values.
    """
    raw = _load(path)
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if kind is not None:
        raw["kind"] = kind
    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    cfg = dict(DEFAULTS)
    cfg.update(raw)

    kind = _choice(cfg, "kind", ScenarioKind)
    protocol = _choice(cfg, "protocol", Protocol)
    if not isinstance(cfg["protocols"], (list, tuple)):
        raise ConfigError("protocols must be a list")
    protocols = []
    for p in cfg["protocols"]:
        try:
            protocols.append(Protocol(p))
        except ValueError:
            raise ConfigError(f"unknown protocol {p!r} in protocols") from None
    family = None
    if "family" in cfg:
        family = _choice(cfg, "family", PulseFamily)
    missing = _missing(cfg, kind, family, protocol, protocols)
    if missing:
        raise ConfigError(f"missing required fields: {', '.join(missing)}")

    omega0 = mhz_to_angular(_number(cfg, "omega0_mhz", positive=True))
    if kind is ScenarioKind.ROBUSTNESS_GRID:
        T = 6 * cfg["center_sigma_us"] + 2 * cfg["center_delta_t_us"]
    elif kind is ScenarioKind.EFFICIENCY_VS_DURATION:
        T = cfg.get("T_us", cfg["T_max_us"])
    else:
        T = _number(cfg, "T_us", positive=True)

    def width(abs_key, rel_key, allow_zero):
        if abs_key in cfg and kind in (ScenarioKind.POPULATION_TRACE,
                                       ScenarioKind.PULSE_PREVIEW):
            return _number(cfg, abs_key, positive=not allow_zero,
                           nonneg=allow_zero)
        if rel_key in cfg:
            return _number(cfg, rel_key, positive=not allow_zero,
                           nonneg=allow_zero) * T
        return None

    sigma = width("sigma_us", "sigma_over_T", False)
    delta_t = width("delta_t_us", "dt_over_T", True)
    if kind is ScenarioKind.ROBUSTNESS_GRID:
        sigma, delta_t = cfg["center_sigma_us"], cfg["center_delta_t_us"]
    try:
        pulse = PulseParams(family, omega0, T, sigma=sigma, delta_t=delta_t)
    except ValueError as exc:
        raise ConfigError(f"invalid pulse parameters: {exc}") from None

    correction = None
    if "delta_mhz" in cfg:
        delta = mhz_to_angular(_number(cfg, "delta_mhz"))
        if delta == 0:
            if _uses_sa(kind, protocol, protocols):
                raise ConfigError("delta_mhz must be nonzero (detuning "
                                  "invariant Delta != 0)")
        else:
            if cfg["phase_a_deg"] == "auto":
                phase = default_phase(pulse)
            else:
                phase = math.radians(_number(cfg, "phase_a_deg"))
            correction = CorrectionParams(delta, phase)

    try:
        prop = PropagationConfig(
            _number(cfg, "step_count", positive=True, integer=True),
            _choice(cfg, "method", Method),
            _number(cfg, "record_stride", positive=True, integer=True))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    sweep = None
    if kind is ScenarioKind.EFFICIENCY_VS_DURATION:
        tmin = _number(cfg, "T_min_us", positive=True)
        tmax = _number(cfg, "T_max_us", positive=True)
        n = _number(cfg, "T_count", positive=True, integer=True)
        if tmax < tmin or (n > 1 and tmax == tmin):
            raise ConfigError("T_max_us must exceed T_min_us")
        sweep = DurationSweep(tuple(np.linspace(tmin, tmax, n)),
                              cfg.get("dt_over_T", 0.1),
                              cfg.get("sigma_over_T", 1 / 6), protocols)
    elif kind is ScenarioKind.ROBUSTNESS_GRID:
        try:
            sweep = RobustnessSweep(
                tuple(np.linspace(_number(cfg, "sigma_min_us", positive=True),
                                  _number(cfg, "sigma_max_us", positive=True),
                                  _number(cfg, "sigma_count", positive=True,
                                          integer=True))),
                tuple(np.linspace(0.0, _number(cfg, "dt_ratio_max", nonneg=True),
                                  _number(cfg, "dt_count", positive=True,
                                          integer=True))),
                _number(cfg, "center_sigma_us", positive=True),
                _number(cfg, "center_delta_t_us", nonneg=True),
                protocols)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    try:
        spec = ScenarioSpec(
            kind, pulse, correction, protocol, sweep, cfg["initial_state"],
            prop, _number(cfg, "workers", positive=True, integer=True),
            _number(cfg, "preview_points", positive=True, integer=True))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for key in ("csv", "plot"):
        if not isinstance(cfg[key], bool):
            raise ConfigError(f"{key} must be true or false")
    cfg["kind"] = kind.value
    return RunConfig(spec, Path(cfg["output_dir"]), cfg["csv"], cfg["plot"],
                     cfg)


def emit_config(config, path):
    """Write the resolved configuration as JSON that parses back to it."""
    path = Path(path)
    path.write_text(json.dumps(config.resolved, indent=2, sort_keys=True) + "\n")
    return path
