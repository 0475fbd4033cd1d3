"""
Run configuration: a strict JSON document describing the model, its
parameters, an optional sweep (at most two axes), the requested quantities
and the output target.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .comb import CombParams
from .errors import EOCombError
from .threemode import MicrowaveNoise, ModeLoss, ThreeModeParams, thermal_occupation


class ConfigError(EOCombError, ValueError):
    """Malformed or out-of-range configuration."""


MODELS = ("three_mode", "comb")
QUANTITIES = ("n_out", "bandwidth", "cm", "squeezing", "metrics", "fidelity", "capacity")
FORMATS = ("csv", "json")
MAX_AXES = 2

_COMMON = {
    "omega": 0.0,
    "n_ext": 0.0,
    "n_int": 0.0,
    "temperature_K": None,
    "mw_frequency_GHz": None,
}
PARAMETER_DEFAULTS = {
    "three_mode": {
        "c1": None, "c2": None,
        "kappa": 1.0, "kappa_plus": None, "kappa_minus": None, "kappa_mw": None,
        "eta": 1.0, "eta_plus": None, "eta_minus": None, "eta_mw": None,
        **_COMMON,
    },
    "comb": {
        "c": None, "n_pumps": 1,
        "kappa": 1.0, "kappa_opt": None, "kappa_mw": None,
        "eta": 1.0, "eta_opt": None, "eta_mw": None,
        **_COMMON,
    },
}
REQUIRED = {"three_mode": ("c1", "c2"), "comb": ("c",)}
PROTOCOL_DEFAULTS = {
    "alpha": 1.0,
    "alpha_imag": 0.0,
    "r": 0.5,
    "phi": -math.pi / 2,
    "eta_det": 1.0,
    "convention": "printed",
}
OUTPUT_DEFAULTS = {"path": None, "format": "csv"}
AXIS_KEYS = ("name", "start", "stop", "count", "linear")


def _check_range(name: str, value: Any) -> None:
    if name == "convention":
        if value not in ("printed", "variance"):
            raise ConfigError(f"{name}: must be 'printed' or 'variance'")
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name}: expected a finite number, got {value!r}")
    if name.startswith("kappa") or name == "mw_frequency_GHz":
        if value <= 0:
            raise ConfigError(f"{name}: must be positive, got {value}")
    elif name.startswith("eta"):
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"{name}: must lie in [0, 1], got {value}")
    elif name == "n_pumps":
        if int(value) != value or value < 1:
            raise ConfigError(f"{name}: must be a positive integer, got {value}")
    elif name in ("c1", "c2", "c", "n_ext", "n_int", "temperature_K", "r"):
        if value < 0:
            raise ConfigError(f"{name}: must be nonnegative, got {value}")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    linear: bool = True

    def values(self) -> list[float]:
        import numpy as np

        if self.count == 1:
            return [float(self.start)]
        if self.linear:
            return [float(x) for x in np.linspace(self.start, self.stop, self.count)]
        return [float(x) for x in np.geomspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class RunConfig:
    model: str
    parameters: dict
    sweep: tuple[SweepAxis, ...] = ()
    quantities: tuple[str, ...] = ("n_out",)
    protocol: dict = field(default_factory=lambda: dict(PROTOCOL_DEFAULTS))
    output: dict = field(default_factory=lambda: dict(OUTPUT_DEFAULTS))

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "parameters": dict(self.parameters),
            "sweep": [
                {"name": a.name, "start": a.start, "stop": a.stop, "count": a.count, "linear": a.linear}
                for a in self.sweep
            ],
            "quantities": list(self.quantities),
            "protocol": dict(self.protocol),
            "output": dict(self.output),
        }

    def with_overrides(self, **changes) -> "RunConfig":
        data = self.to_dict()
        for key, value in changes.items():
            data[key] = value
        return config_from_dict(data)


def _strict_keys(section: str, data: dict, allowed) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected an object")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown key(s) {', '.join(unknown)}")


def _parse_axis(i: int, raw: dict, model: str) -> SweepAxis:
    _strict_keys(f"sweep[{i}]", raw, AXIS_KEYS)
    for key in ("name", "start", "stop", "count"):
        if key not in raw:
            raise ConfigError(f"sweep[{i}]: missing {key}")
    name = raw["name"]
    if name not in PARAMETER_DEFAULTS[model]:
        raise ConfigError(f"sweep[{i}].name: {name!r} is not a {model} parameter")
    count = raw["count"]
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise ConfigError(f"sweep[{i}].count: must be a positive integer")
    linear = raw.get("linear", True)
    if not isinstance(linear, bool):
        raise ConfigError(f"sweep[{i}].linear: must be true or false")
    for key in ("start", "stop"):
        try:
            _check_range(name, raw[key])
        except ConfigError as exc:
            raise ConfigError(f"sweep[{i}].{key}: {exc}") from None
    if name == "n_pumps" and count > 1 and not linear:
        raise ConfigError(f"sweep[{i}]: n_pumps can only be swept linearly")
    if not linear and (raw["start"] <= 0 or raw["stop"] <= 0):
        raise ConfigError(f"sweep[{i}]: logarithmic axes need positive start and stop")
    return SweepAxis(name, float(raw["start"]), float(raw["stop"]), int(count), linear)


def config_from_dict(data: dict) -> RunConfig:
    _strict_keys("config", data, ("model", "parameters", "sweep", "quantities", "protocol", "output"))
    model = data.get("model")
    if model not in MODELS:
        raise ConfigError(f"model: must be one of {MODELS}, got {model!r}")

    raw_params = data.get("parameters", {})
    defaults = PARAMETER_DEFAULTS[model]
    _strict_keys("parameters", raw_params, defaults)
    params = dict(defaults)
    params.update(raw_params)
    for key, value in params.items():
        if value is not None:
            _check_range(key, value)
    swept = set()

    sweep_raw = data.get("sweep", [])
    if not isinstance(sweep_raw, list):
        raise ConfigError("sweep: expected a list of axes")
    if len(sweep_raw) > MAX_AXES:
        raise ConfigError(f"sweep: at most {MAX_AXES} axes are supported, got {len(sweep_raw)}")
    axes = tuple(_parse_axis(i, a, model) for i, a in enumerate(sweep_raw))
    for a in axes:
        if a.name in swept:
            raise ConfigError(f"sweep: axis {a.name!r} appears twice")
        swept.add(a.name)

    for key in REQUIRED[model]:
        if params[key] is None and key not in swept:
            raise ConfigError(f"parameters.{key}: required for model {model}")
    thermal = [params["temperature_K"] is not None or "temperature_K" in swept,
               params["mw_frequency_GHz"] is not None or "mw_frequency_GHz" in swept]
    if any(thermal) and not all(thermal):
        raise ConfigError("parameters: temperature_K and mw_frequency_GHz must be given together")
    if all(thermal) and (raw_params.get("n_ext") or raw_params.get("n_int")
                         or {"n_ext", "n_int"} & swept):
        raise ConfigError("parameters: give either n_ext/n_int or temperature_K/mw_frequency_GHz, not both")

    quantities = data.get("quantities", ["n_out"])
    if isinstance(quantities, str) or not isinstance(quantities, list) or not quantities:
        raise ConfigError("quantities: expected a nonempty list")
    for q in quantities:
        if q not in QUANTITIES:
            raise ConfigError(f"quantities: unknown quantity {q!r}; choose from {', '.join(QUANTITIES)}")
    if len(set(quantities)) != len(quantities):
        raise ConfigError("quantities: duplicates are not allowed")

    raw_proto = data.get("protocol", {})
    _strict_keys("protocol", raw_proto, PROTOCOL_DEFAULTS)
    protocol = dict(PROTOCOL_DEFAULTS)
    protocol.update(raw_proto)
    for key, value in protocol.items():
        _check_range(key, value)

    raw_out = data.get("output", {})
    _strict_keys("output", raw_out, OUTPUT_DEFAULTS)
    output = dict(OUTPUT_DEFAULTS)
    output.update(raw_out)
    if output["format"] not in FORMATS:
        raise ConfigError(f"output.format: must be one of {FORMATS}")
    if output["path"] is not None and not isinstance(output["path"], str):
        raise ConfigError("output.path: must be a string or null")

    return RunConfig(model, params, axes, tuple(quantities), protocol, output)


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return config_from_dict(data)


def emit_config(config: RunConfig) -> str:
    """Canonical JSON text; parse_config(emit_config(c)) == c."""
    return json.dumps(config.to_dict(), sort_keys=True, indent=2)


def _pick(p: dict, key: str, fallback: str):
    return p[key] if p[key] is not None else p[fallback]


def _noise(p: dict) -> MicrowaveNoise:
    if p["temperature_K"] is not None:
        n = thermal_occupation(p["mw_frequency_GHz"], p["temperature_K"])
        return MicrowaveNoise(n, n)
    return MicrowaveNoise(p["n_ext"], p["n_int"])


def build_params(model: str, p: dict):
    """Model parameter object for one resolved parameter dict."""
    if model == "three_mode":
        loss = lambda k: ModeLoss.from_total(_pick(p, "kappa_" + k, "kappa"), _pick(p, "eta_" + k, "eta"))
        return ThreeModeParams(loss("plus"), loss("minus"), loss("mw"), p["c1"], p["c2"], _noise(p))
    return CombParams(
        int(round(p["n_pumps"])),
        ModeLoss.from_total(_pick(p, "kappa_opt", "kappa"), _pick(p, "eta_opt", "eta")),
        ModeLoss.from_total(_pick(p, "kappa_mw", "kappa"), _pick(p, "eta_mw", "eta")),
        p["c"],
        _noise(p),
    )
