"""YAML-backed experiment configuration: packaged defaults < config file < CLI flags."""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from importlib.resources import as_file, files
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from boundary_mipt.core.models import ExperimentConfig

logger = logging.getLogger("boundary_mipt")

DEFAULT_CONFIG_FILENAME = "default_experiment.yaml"
WORKERS_ENV_VAR = "BOUNDARY_MIPT_WORKERS"


def read_mapping(path: str | Path) -> dict[str, Any]:
    """Parse a YAML file whose root is a mapping; an empty file is an empty mapping."""
    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    try:
        raw_data = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ValueError(f"Failed to parse YAML config at {config_path}: {exc}") from exc
    except OSError as exc:
        raise OSError(f"Failed to read config file {config_path}: {exc}") from exc

    if raw_data is None:
        raw_data = {}
    if not isinstance(raw_data, dict):
        raise ValueError(f"Invalid config file at {config_path}: root must be a YAML mapping")
    return raw_data


def load_config(path: str | Path) -> ExperimentConfig:
    """Load and validate a flat experiment configuration file."""
    return _validate(read_mapping(path), source=str(path))


def load_default_section(command: str) -> dict[str, Any]:
    """Packaged defaults for one command (empty when the command has no section)."""
    resource = files("boundary_mipt").joinpath(DEFAULT_CONFIG_FILENAME)
    with as_file(resource) as default_path:
        sections = read_mapping(default_path)
    section = sections.get(command) or {}
    if not isinstance(section, dict):
        raise ValueError(f"default section {command!r} must be a YAML mapping")
    return dict(section)


def load_default_config(command: str) -> ExperimentConfig:
    """Validated packaged defaults for one command."""
    return _validate(load_default_section(command), source=f"defaults[{command}]")


def workers_from_env(environ: Mapping[str, str] | None = None) -> int | None:
    """Worker count from ``BOUNDARY_MIPT_WORKERS``, or None when unset or blank."""
    env = os.environ if environ is None else environ
    raw = env.get(WORKERS_ENV_VAR, "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {value}")
    return value


def resolve_config(
    command: str,
    config_path: str | Path | None = None,
    overrides: Mapping[str, Any] | None = None,
    *,
    environ: Mapping[str, str] | None = None,
) -> ExperimentConfig:
    """Merge defaults, ``BOUNDARY_MIPT_WORKERS``, the config file and flag overrides.

    ``None`` values in ``overrides`` mean the flag was not given. The merged mapping's
    ``model`` must agree with the command's default model.

    Raises:
        FileNotFoundError: If ``config_path`` does not exist.
        ValueError: On YAML, validation or model mismatch errors.
    """
    merged = load_default_section(command)
    expected_model = merged.get("model")
    env_workers = workers_from_env(environ)
    if env_workers is not None:
        merged["workers"] = env_workers
    if config_path is not None:
        merged.update(read_mapping(config_path))
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    if expected_model is not None and merged.get("model") != expected_model:
        raise ValueError(
            f"{command} runs model {expected_model!r}, config asks for {merged.get('model')!r}"
        )
    config = _validate(merged, source=str(config_path) if config_path else f"defaults[{command}]")
    logger.debug("resolved %s config: %s", command, config.model_dump(mode="json"))
    return config


def _validate(raw: Mapping[str, Any], *, source: str) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(dict(raw))
    except ValidationError as exc:
        detail_text = _format_validation_errors(exc)
        raise ValueError(f"Invalid config at {source}:\n{detail_text}") from exc


def _format_validation_errors(exc: ValidationError) -> str:
    details: list[str] = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error.get("loc", ())) or "<root>"
        details.append(f"{location}: {error['msg']}")
    return "\n".join(f"- {line}" for line in details)
