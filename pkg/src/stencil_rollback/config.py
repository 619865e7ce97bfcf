"""Run configuration: defaults, flat key=value files, CLI overrides.

Configuration is a flat, human-editable ``key = value`` file; blank lines
and ``#`` comments are ignored and unknown keys are rejected.  Values on
the command line win over file values, which win over the defaults below.
Times accept unit suffixes (``s``, ``m``, ``h``, ``d``, ``y``), seed lists
accept ``lo:hi`` ranges, and every run output embeds the resolved
configuration plus a short hash of it for reproducibility.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .platform import LinkSpec, PlatformModel, PowerModel
from .strategies import STRATEGY_TAGS

SECONDS = {"s": 1.0, "m": 60.0, "h": 3600.0, "d": 86400.0, "y": 365.0 * 86400.0}


class ConfigError(ValueError):
    """Invalid configuration key, value or combination."""


def parse_duration(value) -> float:
    """'100h' -> 360000.0; bare numbers are seconds."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower()
    for suffix, mult in SECONDS.items():
        if text.endswith(suffix):
            try:
                return float(text[: -len(suffix)]) * mult
            except ValueError:
                break
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse duration: {value!r}") from None


def parse_int_list(value) -> list[int]:
    """'0:10' -> [0..9]; '20,40,80' -> [20, 40, 80]."""
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    if isinstance(value, int):
        return [value]
    text = str(value).strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi)))
    return [int(part) for part in text.split(",") if part.strip()]


def parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes", "on"):
        return True
    if text in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"cannot parse boolean: {value!r}")


def parse_strategies(value) -> list[str]:
    if isinstance(value, str):
        value = [part.strip() for part in value.split(",") if part.strip()]
    out = list(value)
    for tag in out:
        if tag not in STRATEGY_TAGS:
            raise ConfigError(f"unknown strategy {tag!r}; valid: {', '.join(STRATEGY_TAGS)}")
    return out


@dataclass
class RunConfig:
    """Resolved experiment configuration with calibrated defaults."""

    n: int = 100
    node_counts: list[int] = field(default_factory=lambda: [20, 40, 80, 160])
    iterations: int = 1000
    checkpoint_interval: int = 6
    node_mtbf: float = 100 * 3600.0  # seconds
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    strategies: list[str] = field(default_factory=lambda: ["global", "dfr-min", "log"])
    flops_rate: float = 20e9
    task_flops: float = 200e9
    bandwidth: float = 1e9
    latency: float = 50e-6
    element_bytes: int = 8
    subdomain_elements: float = 1e5
    power_computing: float = 125.0
    power_idle_unscaled: float = 123.5
    power_idle_scaled: float = 110.0
    power_communicating: float = 125.0
    frequency_scaling: bool = True
    model_reload_traffic: bool = True
    joules_per_task: float = 500.0
    horizon_factor: float = 1.0
    out_dir: str = "results"
    write_traces: bool = True

    def validate(self) -> "RunConfig":
        if self.n < 1 or self.iterations < 1 or self.checkpoint_interval < 1:
            raise ConfigError("n, iterations and checkpoint_interval must be >= 1")
        if self.node_mtbf <= 0 or self.horizon_factor <= 0:
            raise ConfigError("node_mtbf and horizon_factor must be > 0")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        parse_strategies(self.strategies)
        if self.joules_per_task < 0:
            raise ConfigError("joules_per_task must be >= 0")
        return self

    def platform(self) -> PlatformModel:
        return PlatformModel(
            flops_rate=self.flops_rate,
            task_flops=self.task_flops,
            link=LinkSpec(bandwidth=self.bandwidth, latency=self.latency),
            power=PowerModel(
                computing=self.power_computing,
                idle_unscaled=self.power_idle_unscaled,
                idle_scaled=self.power_idle_scaled,
                communicating=self.power_communicating,
            ),
            element_bytes=self.element_bytes,
            subdomain_elements=self.subdomain_elements,
        )

    def resolved(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        """Short digest of the simulation-relevant configuration."""
        payload = self.resolved()
        payload.pop("out_dir", None)
        payload.pop("write_traces", None)
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


_PARSERS = {
    "n": int,
    "node_counts": parse_int_list,
    "iterations": int,
    "checkpoint_interval": int,
    "node_mtbf": parse_duration,
    "seeds": parse_int_list,
    "strategies": parse_strategies,
    "flops_rate": float,
    "task_flops": float,
    "bandwidth": float,
    "latency": float,
    "element_bytes": int,
    "subdomain_elements": float,
    "power_computing": float,
    "power_idle_unscaled": float,
    "power_idle_scaled": float,
    "power_communicating": float,
    "frequency_scaling": parse_bool,
    "model_reload_traffic": parse_bool,
    "joules_per_task": float,
    "horizon_factor": float,
    "out_dir": str,
    "write_traces": parse_bool,
}

assert set(_PARSERS) == {f.name for f in fields(RunConfig)}


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; comments and blanks ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def resolve_config(
    file_values: dict | None = None, overrides: dict | None = None
) -> RunConfig:
    """Defaults <- config file <- command-line overrides."""
    config = RunConfig()
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if key not in _PARSERS:
                raise ConfigError(f"unknown configuration key: {key!r}")
            try:
                setattr(config, key, _PARSERS[key](value))
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from None
    return config.validate()
