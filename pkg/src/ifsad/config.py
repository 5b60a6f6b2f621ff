"""Run configuration: defaults, ``key = value`` files and the seed override."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ifsad.errors import ConfigError, ParameterError
from ifsad.partition import ClusterConfig
from ifsad.pipeline import POLARITIES, PipelineConfig

SEED_ENV = "IFSAD_SEED"


@dataclass(frozen=True)
class RunConfig:
    m: int = 3
    alpha: float = 0.2
    beta: float = 0.5
    weights: str | tuple = "uniform"
    window_seconds: int = 1
    seed: int = 0
    train_fraction: float = 1.0
    polarity: dict = field(default_factory=dict)
    cluster_method: str = "ifcm"
    cluster_beta: float = 0.85

    def __post_init__(self):
        if self.window_seconds <= 0:
            raise ConfigError(f"window_seconds must be positive, got {self.window_seconds}")
        if self.m < 2:
            raise ConfigError(f"m must be at least 2, got {self.m}")
        try:
            self.pipeline_config()
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None

    def pipeline_config(self, **overrides) -> PipelineConfig:
        cluster = ClusterConfig(method=self.cluster_method, beta=self.cluster_beta, seed=self.seed)
        cfg = PipelineConfig(
            m=self.m,
            alpha=self.alpha,
            beta=self.beta,
            weights=self.weights,
            seed=self.seed,
            train_fraction=self.train_fraction,
            polarity=dict(self.polarity),
            cluster=cluster,
        )
        return replace(cfg, **overrides) if overrides else cfg

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["weights"] = self.weights if isinstance(self.weights, str) else list(self.weights)
        return out


def parse_weights(text: str):
    text = text.strip()
    if text == "uniform":
        return "uniform"
    try:
        return tuple(float(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"weights must be 'uniform' or a list of numbers: {text!r}") from None


_CASTS = {
    "m": int,
    "alpha": float,
    "beta": float,
    "window_seconds": int,
    "seed": int,
    "train_fraction": float,
    "cluster_method": str,
    "cluster_beta": float,
    "weights": parse_weights,
}


def parse_setting(key: str, value: str, polarity: dict) -> tuple[str, object] | None:
    """Convert one textual setting; polarity entries are collected in place."""
    key = key.strip().replace("-", "_")
    value = value.strip()
    if key.startswith("polarity."):
        name = key.split(".", 1)[1]
        if value not in POLARITIES:
            raise ConfigError(f"polarity for {name!r} must be one of {POLARITIES}")
        polarity[name] = value
        return None
    if key not in _CASTS:
        raise ConfigError(f"unknown setting {key!r}")
    try:
        return key, _CASTS[key](value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    settings: dict = {}
    polarity: dict = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        parsed = parse_setting(key, value, polarity)
        if parsed:
            settings[parsed[0]] = parsed[1]
    if polarity:
        settings["polarity"] = polarity
    return settings


def build_config(path=None, overrides: dict | None = None, environ=None) -> RunConfig:
    """Defaults, then the config file, then the seed variable, then ``overrides``."""
    environ = os.environ if environ is None else environ
    settings: dict = {}
    if path is not None:
        settings.update(read_config_file(path))
    if environ.get(SEED_ENV):
        try:
            settings["seed"] = int(environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer") from None
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "polarity":
            settings["polarity"] = {**settings.get("polarity", {}), **value}
        else:
            settings[key] = value
    try:
        return RunConfig(**settings)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
