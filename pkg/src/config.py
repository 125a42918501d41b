"""
Configuration loading.

Reads ``config.yaml`` into frozen dataclasses. Missing files or keys fall
back to the defaults declared here, so the YAML only needs the values it
overrides.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

import yaml

from magnipersist.constants import THREADS_ENV_VAR, ChainModes
from magnipersist.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config.yaml"


@dataclass(frozen=True)
class BoundsConfig:
    n_max: int = 3
    l_max: Fraction = Fraction(2)
    dim_max: int = 2
    eps_max: Fraction = Fraction(2)


@dataclass(frozen=True)
class CoefficientsConfig:
    prime: int = 2


@dataclass(frozen=True)
class HomologyConfig:
    mode: str = ChainModes.NORMALIZED


@dataclass(frozen=True)
class MagnitudeConfig:
    precision: int = 15
    t: tuple[Fraction, ...] = (Fraction(1, 10), Fraction(1), Fraction(10))


@dataclass(frozen=True)
class CapsConfig:
    max_generators: int = 200_000
    max_cells: int = 200_000


@dataclass(frozen=True)
class InputConfig:
    # None reads a distance matrix; otherwise l1, linf or euclid:D for point clouds
    metric: str | None = None


@dataclass(frozen=True)
class SystemConfig:
    threads: int = 1
    log_level: str = "WARNING"
    log_file: str | None = None


@dataclass(frozen=True)
class AppConfig:
    bounds: BoundsConfig = field(default_factory=BoundsConfig)
    coefficients: CoefficientsConfig = field(default_factory=CoefficientsConfig)
    homology: HomologyConfig = field(default_factory=HomologyConfig)
    magnitude: MagnitudeConfig = field(default_factory=MagnitudeConfig)
    caps: CapsConfig = field(default_factory=CapsConfig)
    input: InputConfig = field(default_factory=InputConfig)
    system: SystemConfig = field(default_factory=SystemConfig)


def to_fraction(value: Any, name: str) -> Fraction:
    """Accept ints, fraction strings ``"p/q"`` and numeric strings."""
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a rational, got {value!r}")
    if isinstance(value, float):
        raise ConfigError(f"{name}: write {value!r} as an exact fraction p/q")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name}: {value!r} is not a rational") from None


def _coerce(section: str, key: str, default: Any, value: Any) -> Any:
    name = f"{section}.{key}"
    if isinstance(default, Fraction):
        return to_fraction(value, name)
    if isinstance(default, bool):
        return bool(value)
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name}: expected an integer, got {value!r}")
        return value
    if isinstance(default, tuple):
        items = value.split(",") if isinstance(value, str) else list(value)
        return tuple(to_fraction(item, name) for item in items)
    return None if value is None else str(value)


def _build_section(cls: type, section: str, raw: Mapping[str, Any] | None) -> Any:
    instance = cls()
    if not raw:
        return instance
    known = {f.name for f in fields(cls)}
    for key in raw:
        if key not in known:
            logger.warning("ignoring unknown config key %s.%s", section, key)
    updates = {
        key: _coerce(section, key, getattr(instance, key), value)
        for key, value in raw.items()
        if key in known
    }
    return replace(instance, **updates)


def _threads_from_env(system: SystemConfig) -> SystemConfig:
    value = os.environ.get(THREADS_ENV_VAR)
    if not value:
        return system
    try:
        threads = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR}={value!r} is not an integer") from None
    return replace(system, threads=threads)


def load_config(path: str | Path | None = None) -> AppConfig:
    """
    Load configuration from YAML.

    Args:
        path: YAML file; the repository ``config.yaml`` when None

    Returns:
        AppConfig with defaults filled in and the thread override applied
    """
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    raw: Mapping[str, Any] = {}
    if config_path.exists():
        with open(config_path) as fh:
            try:
                raw = yaml.safe_load(fh) or {}
            except yaml.YAMLError as exc:
                raise ConfigError(f"{config_path}: {exc}") from exc
        if not isinstance(raw, Mapping):
            raise ConfigError(f"{config_path}: top level must be a mapping")
    elif path is not None:
        raise ConfigError(f"config file {config_path} not found")

    sections = {
        f.name: _build_section(type(getattr(AppConfig(), f.name)), f.name, raw.get(f.name))
        for f in fields(AppConfig)
    }
    config = AppConfig(**sections)
    config = replace(config, system=_threads_from_env(config.system))
    logger.debug("loaded config from %s", config_path if config_path.exists() else "defaults")
    return config
