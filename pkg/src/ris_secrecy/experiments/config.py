"""Scenario description and the flat ``key = value`` configuration format."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from ..channel import LinkBudget, Position2D, RadioParams, make_link, noise_power_watts
from ..secrecy_metrics import SCHEMES

RADIO_KEYS = tuple(f.name for f in dataclasses.fields(RadioParams))
POSITION_KEYS = ("pos_s", "pos_r", "pos_d", "pos_e")


class ConfigError(ValueError):
    """Malformed configuration document or out-of-domain value."""


@dataclass(frozen=True)
class ScenarioConfig:
    pos_s: Position2D = Position2D(0.0, 0.0)
    pos_r: Position2D = Position2D(10.0, 10.0)
    pos_d: Position2D = Position2D(70.0, 0.0)
    pos_e: Position2D = Position2D(70.0, -10.0)
    k_elems: int = 144
    k_sr: float = 3.0
    k_rd: float = 0.5
    k_re: float = 1.25
    radio: RadioParams = field(default_factory=RadioParams)
    rates: tuple[float, ...] = (1.0,)
    trials: int = 10_000
    master_seed: int = 20211
    schemes: tuple[str, ...] = ("opt", "ran")

    def __post_init__(self):
        if not (isinstance(self.k_elems, int) and self.k_elems >= 1):
            raise ConfigError(f"k_elems: must be an integer >= 1, got {self.k_elems!r}")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ConfigError(f"trials: must be an integer >= 1, got {self.trials!r}")
        for key in ("k_sr", "k_rd", "k_re"):
            v = getattr(self, key)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigError(f"{key}: Rician factor must be finite and >= 0, got {v!r}")
        if not self.rates:
            raise ConfigError("rates: at least one target rate is required")
        for r in self.rates:
            if not (math.isfinite(r) and r >= 0):
                raise ConfigError(f"rates: every rate must be finite and >= 0, got {r!r}")
        if not self.schemes:
            raise ConfigError("schemes: at least one scheme is required")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError(f"schemes: unknown scheme {s!r}, expected a subset of {SCHEMES}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError(f"master_seed: must fit in an unsigned 64-bit integer, got {self.master_seed!r}")
        for key in POSITION_KEYS:
            p = getattr(self, key)
            if not all(math.isfinite(c) for c in p):
                raise ConfigError(f"{key}: coordinates must be finite, got {p!r}")

    def links(self) -> tuple[LinkBudget, LinkBudget, LinkBudget]:
        """S->RIS, RIS->D and RIS->E link budgets."""
        return (
            make_link(self.pos_s, self.pos_r, self.k_sr, self.radio),
            make_link(self.pos_r, self.pos_d, self.k_rd, self.radio),
            make_link(self.pos_r, self.pos_e, self.k_re, self.radio),
        )

    @property
    def noise_watts(self) -> float:
        return noise_power_watts(self.radio)

    def replace(self, **changes) -> "ScenarioConfig":
        """Copy with changes; radio fields may be given at top level."""
        radio_changes = {k: changes.pop(k) for k in list(changes) if k in RADIO_KEYS}
        if radio_changes:
            try:
                changes["radio"] = dataclasses.replace(self.radio, **radio_changes)
            except ValueError as exc:
                raise ConfigError(f"{', '.join(radio_changes)}: {exc}") from None
        return dataclasses.replace(self, **changes)


_SCENARIO_KEYS = tuple(f.name for f in dataclasses.fields(ScenarioConfig) if f.name != "radio")
CONFIG_KEYS = _SCENARIO_KEYS + RADIO_KEYS


def _parse_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _parse_int(key, text):
    try:
        v = float(text) if any(c in text for c in ".eE") else int(text, 0)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None
    if isinstance(v, float):
        if not v.is_integer():
            raise ConfigError(f"{key}: expected an integer, got {text!r}")
        v = int(v)
    return v


def parse_value(key: str, text: str):
    """Convert the textual value of ``key`` to its typed form."""
    text = text.strip()
    if key in POSITION_KEYS:
        parts = [p for p in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) != 2:
            raise ConfigError(f"{key}: expected 'x, y', got {text!r}")
        return Position2D(_parse_float(key, parts[0]), _parse_float(key, parts[1]))
    if key in ("k_elems", "trials", "master_seed"):
        return _parse_int(key, text)
    if key == "rates":
        return tuple(_parse_float(key, p) for p in text.split(",") if p.strip())
    if key == "schemes":
        return tuple(p.strip() for p in text.split(",") if p.strip())
    if key == "pathloss_convention":
        return text
    if key in CONFIG_KEYS:
        return _parse_float(key, text)
    raise ConfigError(f"unknown key {key!r}; valid keys: {', '.join(CONFIG_KEYS)}")


def _build(values: dict, base: ScenarioConfig | None = None) -> ScenarioConfig:
    base = base or ScenarioConfig()
    try:
        return base.replace(**values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse a configuration document on top of ``base`` (default scenario).

    One ``key = value`` per line, ``#`` starts a comment, blank lines are
    ignored. Absent keys keep their defaults; unknown keys are rejected.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = parse_value(key, value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return _build(values, base)


def apply_overrides(scenario: ScenarioConfig, overrides) -> ScenarioConfig:
    """Apply ``key=value`` strings (as given to ``--set``)."""
    values = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key=value")
        key, _, value = item.partition("=")
        key = key.strip()
        values[key] = parse_value(key, value)
    return _build(values, scenario)


def dump_config(scenario: ScenarioConfig) -> str:
    """Render a scenario in the configuration format (round-trips)."""
    lines = []
    for key in CONFIG_KEYS:
        v = getattr(scenario.radio, key) if key in RADIO_KEYS else getattr(scenario, key)
        if key in POSITION_KEYS:
            text = f"{v.x!r}, {v.y!r}"
        elif key in ("rates", "schemes"):
            text = ", ".join(repr(x) if isinstance(x, float) else x for x in v)
        else:
            text = repr(v) if not isinstance(v, str) else v
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
