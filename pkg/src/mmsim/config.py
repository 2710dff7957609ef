"""Scenario configuration: defaults, JSON schema (versioned), strict validation.

The on-disk format is a flat-ish JSON document mirroring `ScenarioConfig`;
unknown keys anywhere in the tree are rejected so typos fail loudly instead of
silently running the default.
"""

import dataclasses
import json
from dataclasses import dataclass, field

from .antenna import ArrayGeometry, ElementPatternParams
from .channel import (
    CHANNEL_MODELS,
    CLUSTER_DEFAULTS,
    PATHLOSS_DEFAULTS,
    ClusterModelParams,
    PathLossParams,
)
from .precoding import PRECODER_KINDS

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid or unparseable scenario configuration."""


@dataclass(frozen=True)
class ArrayConfig:
    n_vertical: int = 8
    n_horizontal: int = 8
    spacing_vertical: float = 0.7    # wavelengths
    spacing_horizontal: float = 0.5  # wavelengths


@dataclass(frozen=True)
class ChannelParams:
    """Model statistics; every field overridable from the config file."""

    nyu_clusters: ClusterModelParams = field(default_factory=lambda: CLUSTER_DEFAULTS["nyu"])
    uma_clusters: ClusterModelParams = field(default_factory=lambda: CLUSTER_DEFAULTS["uma"])
    nyu_pathloss: PathLossParams = field(default_factory=lambda: PATHLOSS_DEFAULTS["nyu"])
    uma_pathloss: PathLossParams = field(default_factory=lambda: PATHLOSS_DEFAULTS["uma"])
    # Rayleigh links take their (NLOS) path loss from this model's constants.
    rayleigh_pathloss_model: str = "nyu"


@dataclass(frozen=True)
class ScenarioConfig:
    schema_version: int = SCHEMA_VERSION
    carrier_frequency_hz: float = 28e9
    noise_figure_db: float = 7.0
    bandwidth_hz: float = 1e9
    distance_m: float = 100.0
    num_ues: int = 4
    array: ArrayConfig = field(default_factory=ArrayConfig)
    element: ElementPatternParams = field(default_factory=ElementPatternParams)
    tx_power_dbm: float = 30.0
    phase_bits: int = 6
    oversampling_v: int = 1
    oversampling_h: int = 1
    tau: float = 0.99
    channel_model: str = "nyu"
    precoders: tuple = PRECODER_KINDS
    drops: int = 10000
    master_seed: int = 1
    shadowing: bool = True
    channel_params: ChannelParams = field(default_factory=ChannelParams)

    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry(
            n_vertical=self.array.n_vertical,
            n_horizontal=self.array.n_horizontal,
            spacing_vertical=self.array.spacing_vertical,
            spacing_horizontal=self.array.spacing_horizontal,
            carrier_frequency=self.carrier_frequency_hz,
        )

    def cluster_params(self, model: str) -> ClusterModelParams:
        return {"nyu": self.channel_params.nyu_clusters,
                "uma": self.channel_params.uma_clusters}[model]

    def pathloss_params(self, model: str) -> PathLossParams:
        if model == "rayleigh":
            model = self.channel_params.rayleigh_pathloss_model
        return {"nyu": self.channel_params.nyu_pathloss,
                "uma": self.channel_params.uma_pathloss}[model]


def default_config() -> ScenarioConfig:
    return ScenarioConfig()


def validate(cfg: ScenarioConfig) -> None:
    """Raise ConfigError naming the offending field on the first violated invariant."""
    if cfg.schema_version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {cfg.schema_version}")
    checks = [
        (cfg.carrier_frequency_hz > 0, "carrier_frequency_hz must be positive"),
        (cfg.bandwidth_hz > 0, "bandwidth_hz must be positive"),
        (cfg.distance_m > 0, "distance_m must be positive"),
        (cfg.num_ues >= 1, "num_ues must be >= 1"),
        (cfg.array.n_vertical >= 1 and cfg.array.n_horizontal >= 1,
         "array dimensions must be >= 1"),
        (cfg.array.spacing_vertical > 0 and cfg.array.spacing_horizontal > 0,
         "array spacings must be positive"),
        (cfg.phase_bits >= 0, "phase_bits must be >= 0"),
        (cfg.oversampling_v >= 1 and cfg.oversampling_h >= 1,
         "oversampling factors must be >= 1"),
        (0.0 <= cfg.tau <= 1.0, "tau must lie in [0, 1]"),
        (cfg.channel_model in CHANNEL_MODELS,
         f"channel_model must be one of {CHANNEL_MODELS}"),
        (cfg.drops >= 1, "drops must be >= 1"),
        (0 <= cfg.master_seed < 2 ** 64, "master_seed must fit in u64"),
        (len(cfg.precoders) >= 1, "precoders must not be empty"),
        (cfg.channel_params.rayleigh_pathloss_model in ("nyu", "uma"),
         "channel_params.rayleigh_pathloss_model must be 'nyu' or 'uma'"),
    ]
    for ok, message in checks:
        if not ok:
            raise ConfigError(message)
    n_elements = cfg.array.n_vertical * cfg.array.n_horizontal
    if cfg.num_ues > n_elements:
        raise ConfigError(
            f"num_ues ({cfg.num_ues}) must be <= array elements ({n_elements})")
    for kind in cfg.precoders:
        if kind not in PRECODER_KINDS:
            raise ConfigError(f"precoders: unknown precoder {kind!r}")
    if len(set(cfg.precoders)) != len(cfg.precoders):
        raise ConfigError("precoders: duplicate entries")


def _from_mapping(cls, data, path):
    """Build a (possibly nested) dataclass from a dict, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected an object")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"{path or 'config'}: unknown key(s) {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        f = fields[name]
        sub = f"{path}.{name}" if path else name
        if dataclasses.is_dataclass(f.type) or f.type in _NESTED:
            kwargs[name] = _from_mapping(_NESTED[f.type], value, sub)
        elif name == "precoders":
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{sub}: expected a list")
            kwargs[name] = tuple(value)
        else:
            kwargs[name] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path or 'config'}: {exc}") from exc


# dataclass field types are stored as strings under `from __future__` semantics in
# some environments; map names explicitly to stay robust.
_NESTED = {
    "ArrayConfig": ArrayConfig,
    "ElementPatternParams": ElementPatternParams,
    "ChannelParams": ChannelParams,
    "ClusterModelParams": ClusterModelParams,
    "PathLossParams": PathLossParams,
    ArrayConfig: ArrayConfig,
    ElementPatternParams: ElementPatternParams,
    ChannelParams: ChannelParams,
    ClusterModelParams: ClusterModelParams,
    PathLossParams: PathLossParams,
}


def from_dict(data: dict) -> ScenarioConfig:
    cfg = _from_mapping(ScenarioConfig, data, "")
    validate(cfg)
    return cfg


def to_dict(cfg: ScenarioConfig) -> dict:
    out = dataclasses.asdict(cfg)
    out["precoders"] = list(cfg.precoders)
    return out


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return from_dict(data)


def save_config(cfg: ScenarioConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_dict(cfg), fh, indent=2)
        fh.write("\n")


def describe_keys() -> list:
    """(dotted key, default) pairs for --help output, leaves only."""
    rows = []

    def walk(obj, prefix):
        for f in dataclasses.fields(obj):
            name = f"{prefix}{f.name}"
            value = getattr(obj, f.name)
            if dataclasses.is_dataclass(value):
                walk(value, name + ".")
            else:
                rows.append((name, value))

    walk(default_config(), "")
    return rows
