"""Scenario configuration and its flat ``key = value`` file format.

Example file::

    # default 50-node scenario
    node_count = 50
    field.width = 1500
    field.height = 300
    protocol = AODV
    source_count = 20
    radio.range = 250
    emp.weights = 1, 1, 1
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields, replace
from dataclasses import field as _field

from ..protocols.base import RoutingParams
from ..protocols.emp import EmpParams
from ..world import FieldSpec, MobilityParams, RadioParams

PROTOCOLS = ("DSR", "AODV", "EMP")


class ConfigError(ValueError):
    pass


class TooManySources(ConfigError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    node_count: int = 50
    field: FieldSpec = _field(default_factory=FieldSpec)
    protocol: str = "AODV"
    source_count: int = 10
    cbr_rate: float = 4.0
    payload_size: int = 512
    duration: float = 100.0
    master_seed: int = 1
    # each flow starts uniformly within [0, traffic_start_max)
    traffic_start_max: float = 1.0
    radio: RadioParams = _field(default_factory=RadioParams)
    mobility: MobilityParams = _field(default_factory=MobilityParams)
    emp: EmpParams = _field(default_factory=EmpParams)
    routing: RoutingParams = _field(default_factory=RoutingParams)

    def validate(self) -> "ScenarioConfig":
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.node_count < 2:
            raise ConfigError("node_count must be at least 2")
        if self.source_count > self.node_count:
            raise TooManySources(f"source_count {self.source_count} exceeds node_count {self.node_count}")
        if self.source_count <= 0:
            raise ConfigError("source_count must be positive")
        if not self.cbr_rate > 0:
            raise ConfigError("cbr_rate must be positive")
        if self.duration < 0 or self.traffic_start_max < 0:
            raise ConfigError("duration and traffic_start_max must be non-negative")
        if self.payload_size <= 0:
            raise ConfigError("payload_size must be positive")
        if not self.emp.t_enq > 0 or self.emp.k < 1 or self.emp.epsilon < 0:
            raise ConfigError("invalid emp parameters")
        if len(self.emp.weights) != 3 or sum(self.emp.weights) <= 0 or min(self.emp.weights) < 0:
            raise ConfigError("emp.weights needs three non-negative numbers with a positive sum")
        return self

    def with_overrides(self, **changes) -> "ScenarioConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None}).validate()


_SECTIONS = {
    "field": FieldSpec,
    "radio": RadioParams,
    "mobility": MobilityParams,
    "emp": EmpParams,
    "routing": RoutingParams,
}
_ALIASES = {"sources": "source_count", "seed": "master_seed"}


def _convert(default, raw: str, key: str):
    try:
        if isinstance(default, bool):
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float) or default is None:
            return float(raw)
        if isinstance(default, tuple):
            return tuple(float(x) for x in raw.replace(",", " ").split())
        return raw
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def _defaults(cls) -> dict:
    out = {}
    for f in fields(cls):
        if f.default is not dataclasses.MISSING:
            out[f.name] = f.default
        else:
            out[f.name] = f.default_factory()
    return out


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    base = base or ScenarioConfig()
    top: dict = {}
    nested: dict[str, dict] = {name: {} for name in _SECTIONS}
    top_defaults = _defaults(ScenarioConfig)
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if "." in key:
            section, name = key.split(".", 1)
            cls = _SECTIONS.get(section)
            if cls is None or name not in _defaults(cls):
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            nested[section][name] = _convert(_defaults(cls)[name], raw, key)
        else:
            if key not in top_defaults or key in _SECTIONS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            top[key] = raw.upper() if key == "protocol" else _convert(top_defaults[key], raw, key)
    try:
        for section, values in nested.items():
            if values:
                top[section] = replace(getattr(base, section), **values)
        return replace(base, **top).validate()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def format_config(config: ScenarioConfig) -> str:
    """Render ``config`` in the file format (round-trips through ``parse_config``)."""
    lines = []
    for f in fields(ScenarioConfig):
        value = getattr(config, f.name)
        if f.name in _SECTIONS:
            for sub in fields(value):
                v = getattr(value, sub.name)
                if v is None:
                    continue
                if isinstance(v, tuple):
                    v = ", ".join(repr(x) for x in v)
                lines.append(f"{f.name}.{sub.name} = {v}")
        else:
            lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
