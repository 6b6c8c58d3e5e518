"""System configuration and JSON config-file handling.

In-memory configuration carries linear units (watts, radians).  Config files
express powers in dBW; the conversion happens exactly once, here, so the
simulation core never sees decibels.
"""

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path


class ConfigurationError(ValueError):
    """A configuration violates its invariants or cannot be parsed."""


def dbw_to_watts(x: float) -> float:
    return 10.0 ** (x / 10.0)


def watts_to_dbw(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass
class SystemConfig:
    """Full parameter set of one simulated uplink.

    Powers are linear watts.  ``threshold`` overrides the false-alarm-rate
    derivation of the energy-detector threshold when set.
    """

    antennas: int = 200
    users: int = 10
    pilot_length: int = 10
    coherence_block: int = 200
    subcarriers_total: int = 640
    coherence_bandwidth: int = 32
    detection_subcarriers: int = 20
    pilot_power: float = 1.0
    data_power: float = 1.0
    jammer_training_power: float = 1.0
    jammer_data_power: float = 1.0
    noise_power: float = 10.0 ** -2.5
    angular_spread: float = math.pi / 18.0
    jammer_angular_spread: float | None = None
    user_gain: float = 1.0
    jammer_gain: float = 1.0
    fap_target: float = 1e-3
    threshold: float | None = None
    min_common_pilots: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.pilot_length != self.users:
            raise ConfigurationError(
                f"pilot_length ({self.pilot_length}) must equal users ({self.users})"
            )
        if self.coherence_block <= self.pilot_length:
            raise ConfigurationError(
                "coherence_block must exceed pilot_length"
            )
        if self.subcarriers_total % self.coherence_bandwidth != 0:
            raise ConfigurationError(
                "subcarriers_total must be a multiple of coherence_bandwidth"
            )
        if not 1 <= self.detection_subcarriers <= self.estimated_subcarriers:
            raise ConfigurationError(
                f"detection_subcarriers must lie in [1, {self.estimated_subcarriers}]"
            )
        for name in (
            "pilot_power",
            "data_power",
            "jammer_training_power",
            "jammer_data_power",
        ):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be non-negative")
        if self.noise_power <= 0:
            raise ConfigurationError("noise_power must be positive")
        if not 0.0 < self.angular_spread < math.pi:
            raise ConfigurationError("angular_spread must lie in (0, pi)")
        if not 0.0 < self.fap_target < 1.0:
            raise ConfigurationError("fap_target must lie in (0, 1)")
        if self.threshold is not None and self.threshold <= 0:
            raise ConfigurationError("threshold must be positive when given")
        if not 2 <= self.min_common_pilots <= self.users:
            raise ConfigurationError(
                "min_common_pilots must lie in [2, users]"
            )

    @property
    def estimated_subcarriers(self) -> int:
        """Subcarriers carrying pilots: one per coherence bandwidth."""
        return self.subcarriers_total // self.coherence_bandwidth

    @property
    def jammer_spread(self) -> float:
        if self.jammer_angular_spread is None:
            return self.angular_spread
        return self.jammer_angular_spread

    def replace(self, **updates) -> "SystemConfig":
        values = asdict(self)
        values.update(updates)
        return SystemConfig(**values)

    def snapshot(self) -> dict:
        """JSON-serializable snapshot of every field."""
        return asdict(self)


# config-file keys carrying dBW values, mapped to their watt-valued fields
_DBW_KEYS = {
    "pilot_power_dbw": "pilot_power",
    "data_power_dbw": "data_power",
    "jammer_training_power_dbw": "jammer_training_power",
    "jammer_data_power_dbw": "jammer_data_power",
    "noise_power_dbw": "noise_power",
}

_PLAIN_KEYS = {
    "antennas",
    "users",
    "pilot_length",
    "coherence_block",
    "subcarriers_total",
    "coherence_bandwidth",
    "detection_subcarriers",
    "angular_spread",
    "jammer_angular_spread",
    "user_gain",
    "jammer_gain",
    "fap_target",
    "threshold",
    "min_common_pilots",
    "seed",
}


def config_from_mapping(data: dict) -> SystemConfig:
    """Build a SystemConfig from config-file keys (powers in dBW)."""
    kwargs = {}
    for key, value in data.items():
        if key in _DBW_KEYS:
            kwargs[_DBW_KEYS[key]] = dbw_to_watts(float(value))
        elif key in _PLAIN_KEYS:
            kwargs[key] = value
        else:
            raise ConfigurationError(f"unknown config key: {key!r}")
    try:
        return SystemConfig(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_config(path: str | Path | None) -> SystemConfig:
    """Read a JSON config file; a missing path yields the defaults."""
    if path is None:
        return SystemConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    return config_from_mapping(data)
