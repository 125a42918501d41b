"""Tests for YAML configuration loading."""

import logging
from fractions import Fraction

import pytest

from magnipersist.config import AppConfig, load_config, to_fraction
from magnipersist.constants import THREADS_ENV_VAR, ChainModes
from magnipersist.errors import ConfigError


@pytest.fixture(autouse=True)
def no_thread_override(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)


def write_config(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return path


def test_repository_config_loads():
    config = load_config()
    assert config.bounds.l_max == 2
    assert config.coefficients.prime == 2
    assert config.homology.mode == ChainModes.NORMALIZED


def test_overrides_and_defaults(tmp_path):
    path = write_config(
        tmp_path,
        'bounds:\n  l_max: "5/2"\n  n_max: 4\nmagnitude:\n  t: ["1/2", 3]\n',
    )
    config = load_config(path)
    assert config.bounds.l_max == Fraction(5, 2)
    assert config.bounds.n_max == 4
    assert config.bounds.dim_max == AppConfig().bounds.dim_max
    assert config.magnitude.t == (Fraction(1, 2), Fraction(3))
    assert config.caps == AppConfig().caps


def test_empty_file_gives_defaults(tmp_path):
    assert load_config(write_config(tmp_path, "")) == AppConfig()


def test_float_is_rejected(tmp_path):
    with pytest.raises(ConfigError, match="exact fraction"):
        load_config(write_config(tmp_path, "bounds:\n  eps_max: 1.5\n"))


def test_integer_type_checked(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write_config(tmp_path, "caps:\n  max_cells: many\n"))


def test_unknown_key_warns(tmp_path, caplog):
    path = write_config(tmp_path, "bounds:\n  n_maxx: 4\n")
    with caplog.at_level(logging.WARNING):
        config = load_config(path)
    assert config.bounds.n_max == AppConfig().bounds.n_max
    assert "bounds.n_maxx" in caplog.text


def test_top_level_must_be_mapping(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write_config(tmp_path, "- 1\n- 2\n"))


def test_missing_explicit_path(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.yaml")


def test_thread_override(tmp_path, monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "6")
    assert load_config(write_config(tmp_path, "system:\n  threads: 2\n")).system.threads == 6
    monkeypatch.setenv(THREADS_ENV_VAR, "six")
    with pytest.raises(ConfigError):
        load_config(write_config(tmp_path, ""))


def test_to_fraction():
    assert to_fraction("3/4", "x") == Fraction(3, 4)
    assert to_fraction(2, "x") == 2
    for bad in (True, 0.25, "1/0", "abc"):
        with pytest.raises(ConfigError):
            to_fraction(bad, "x")
