"""Simulation configuration: defaults, validation and config-file loading."""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping


class ConfigError(ValueError):
    """Raised for invalid or unreadable configuration."""


@dataclass(frozen=True)
class SimConfig:
    # field geometry
    grid_width_m: float = 75.0
    grid_height_m: float = 65.0
    num_references: int = 56
    num_targets: int = 10
    # timing
    reporting_period_s: float = 2.0
    duration_s: float = 360.0
    mobility_dt_s: float = 1.0
    # radio / packets
    radio_range_m: float = 16.0
    packet_size_bytes: int = 127
    data_rate_bps: float = 250_000.0
    tx_draw_mA: float = 44.0
    rx_draw_mA: float = 49.0
    init_energy_mAh: float = 27.0
    loss_rate: float = 0.0
    # grouping
    leader_energy_threshold_fraction: float = 0.2
    aggregation_capacity: int = 5
    # channel
    rss_ref_dbm: float = -40.0
    path_loss_exponent: float = 2.4
    ref_distance_m: float = 1.0
    noise_sigma_db: float = 0.0
    # mobility
    min_speed_mps: float = 0.5
    max_speed_mps: float = 1.5
    # sink placement; None puts the sink at the (0, 0) corner
    sink_x_m: float | None = None
    sink_y_m: float | None = None
    seed: int = 0

    @property
    def rounds(self) -> int:
        """Number of reporting rounds that fit in the run."""
        return int(math.floor(self.duration_s / self.reporting_period_s + 1e-9))

    @property
    def sink_position(self) -> tuple[float, float]:
        x = 0.0 if self.sink_x_m is None else float(self.sink_x_m)
        y = 0.0 if self.sink_y_m is None else float(self.sink_y_m)
        return x, y

    def replace(self, **changes: Any) -> "SimConfig":
        return validate_config({**dataclasses.asdict(self), **changes})

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f for f in dataclasses.fields(SimConfig)}
_INT_FIELDS = {"num_references", "num_targets", "packet_size_bytes", "aggregation_capacity", "seed"}
_OPTIONAL_FIELDS = {"sink_x_m", "sink_y_m"}

_STRICTLY_POSITIVE = (
    "grid_width_m",
    "grid_height_m",
    "reporting_period_s",
    "duration_s",
    "mobility_dt_s",
    "radio_range_m",
    "packet_size_bytes",
    "data_rate_bps",
    "tx_draw_mA",
    "rx_draw_mA",
    "init_energy_mAh",
    "path_loss_exponent",
    "ref_distance_m",
)


def _coerce(name: str, value: Any) -> Any:
    if name in _OPTIONAL_FIELDS:
        if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none")):
            return None
        return float(value)
    if name in _INT_FIELDS:
        if isinstance(value, str):
            value = value.strip()
            as_float = float(value)
        else:
            as_float = float(value)
        if not as_float.is_integer():
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return int(as_float)
    return float(value)


def validate_config(raw: Mapping[str, Any] | None = None) -> SimConfig:
    """Build a SimConfig from loose settings, filling defaults for omitted keys.

    Values may be strings (as read from a file or the command line). Unknown
    keys are rejected so that typos in config files surface early.
    """
    raw = dict(raw or {})
    unknown = sorted(set(raw) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    values: dict[str, Any] = {}
    for name, value in raw.items():
        try:
            values[name] = _coerce(name, value)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{name}: cannot parse {value!r}") from exc

    cfg = SimConfig(**values)

    for name in _STRICTLY_POSITIVE:
        v = getattr(cfg, name)
        if not (math.isfinite(v) and v > 0):
            raise ConfigError(f"{name} must be strictly positive, got {v}")
    if cfg.num_references < 1:
        raise ConfigError("num_references must be at least 1")
    if cfg.num_targets < 0:
        raise ConfigError("num_targets must be non-negative")
    if not 0.0 <= cfg.leader_energy_threshold_fraction <= 1.0:
        raise ConfigError("leader_energy_threshold_fraction must lie in [0, 1]")
    if cfg.aggregation_capacity < 1:
        raise ConfigError("aggregation_capacity must be >= 1")
    if cfg.noise_sigma_db < 0:
        raise ConfigError("noise_sigma_db must be non-negative")
    if not 0.0 <= cfg.loss_rate < 1.0:
        raise ConfigError("loss_rate must lie in [0, 1)")
    if cfg.min_speed_mps < 0 or cfg.max_speed_mps < cfg.min_speed_mps:
        raise ConfigError("speeds must satisfy 0 <= min_speed_mps <= max_speed_mps")
    sx, sy = cfg.sink_position
    if not (0 <= sx <= cfg.grid_width_m and 0 <= sy <= cfg.grid_height_m):
        raise ConfigError("sink position must lie inside the grid")
    return cfg


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file (``#`` comments allowed).

    Returns raw strings; pass the result through :func:`validate_config`.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from exc
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    parser.optionxform = str  # keep key case
    try:
        parser.read_string("[sim]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    return dict(parser["sim"])


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> SimConfig:
    raw: dict[str, Any] = read_config_file(path) if path is not None else {}
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return validate_config(raw)
