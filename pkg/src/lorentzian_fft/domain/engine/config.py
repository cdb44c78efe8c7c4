"""Run configuration and preset loading."""

from __future__ import annotations

import hashlib
import json
import logging
import tomllib
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    ValidationError,
    field_validator,
    model_validator,
)

from ..scalars import RationalParseError, parse_rational, render_rational

LOGGER = logging.getLogger(__name__)

SUITES = ("coherence", "adjunction", "bordism", "kg", "compare", "all")
Suite = Literal["coherence", "adjunction", "bordism", "kg", "compare", "all"]
_PARSE_ERRORS = (yaml.YAMLError, json.JSONDecodeError, tomllib.TOMLDecodeError)
_UNHASHED = frozenset({"output", "verbosity"})


class ConfigValidationError(ValueError):
    """Raised when a run configuration fails validation."""


def _canonical_rational(name: str, value: Any, minimum: int = 0) -> str:
    try:
        parsed = parse_rational(str(value))
    except RationalParseError as exc:
        raise ValueError(f"{name}: {exc}") from exc
    if parsed < minimum:
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return render_rational(parsed)


class RunConfig(BaseModel):
    """Parameters of one verification run.

    ``L = 0`` selects the one-dimensional model (a single spatial point);
    otherwise the spatial circle has ``L >= 3`` sites.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    suite: Suite = "all"
    L: int = 8
    T_max: int = 12
    mass_squared: str = "0"
    seed: int = 0
    max_degree: int = 3
    sample_size: int = 24
    bordism_classes: int = 120
    masses: tuple[str, ...] = ("0", "1/4", "1")
    instance_L: int = 3
    instance_padding: int = 1
    instance_heights: tuple[int, ...] = (0, 1)
    output: str | None = None
    verbosity: Literal["quiet", "normal", "verbose"] = "normal"

    @field_validator("mass_squared", mode="before")
    @classmethod
    def _mass(cls, value: Any) -> str:
        return _canonical_rational("mass_squared", value)

    @field_validator("masses", mode="before")
    @classmethod
    def _masses(cls, value: Any) -> tuple[str, ...]:
        if isinstance(value, str) or not isinstance(value, Iterable):
            raise ValueError("masses must be a list of rationals")
        return tuple(_canonical_rational("masses", item) for item in value)

    @field_validator("L")
    @classmethod
    def _circumference(cls, value: int) -> int:
        if value != 0 and value < 3:
            raise ValueError("L must be 0 (one-dimensional) or at least 3")
        return value

    @field_validator("T_max")
    @classmethod
    def _horizon(cls, value: int) -> int:
        if value < 4:
            raise ValueError("T_max must be at least 4")
        return value

    @field_validator("instance_L")
    @classmethod
    def _instance_circumference(cls, value: int) -> int:
        if value < 3:
            raise ValueError("instance_L must be at least 3")
        return value

    @model_validator(mode="after")
    def _positive_counts(self) -> RunConfig:
        for name in (
            "max_degree",
            "sample_size",
            "bordism_classes",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.instance_padding < 0:
            raise ValueError("instance_padding must be non-negative")
        if not self.instance_heights or min(self.instance_heights) < 0:
            raise ValueError(
                "instance_heights must be a non-empty list of values >= 0"
            )
        if not self.masses:
            raise ValueError("masses must not be empty")
        return self

    @property
    def mass(self) -> Any:
        return parse_rational(self.mass_squared)

    def with_overrides(self, overrides: Mapping[str, Any]) -> RunConfig:
        """Apply CLI overrides; ``None`` values are ignored."""

        payload = self.model_dump()
        payload.update(
            {
                key: value
                for key, value in overrides.items()
                if value is not None
            }
        )
        return build_config(payload)

    def digest(self) -> str:
        """Hash of every field that can change the report."""

        return _compute_hash(
            self.model_dump(mode="json", exclude=set(_UNHASHED))
        )


def build_config(payload: Mapping[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(dict(payload))
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: "
            f"{error['msg']}"
            for error in exc.errors()
        )
        raise ConfigValidationError(problems) from exc


@dataclass(frozen=True)
class LoadedConfig:
    """A validated configuration and where it came from."""

    config: RunConfig
    source: str
    digest: str


class RunConfigLoader:
    """Loads run presets from YAML, JSON or TOML files."""

    SUFFIXES: Mapping[str, str] = {
        ".yaml": "yaml",
        ".yml": "yaml",
        ".json": "json",
        ".toml": "toml",
    }

    def __init__(self, base_path: Path | None = None) -> None:
        self._base_path = (
            base_path or Path(__file__).resolve().parents[2] / "presets"
        )
        LOGGER.debug(
            "Run config loader initialised with base path %s", self._base_path
        )

    def available_presets(self) -> Iterable[str]:
        """Return the names of the packaged presets."""

        if not self._base_path.exists():
            LOGGER.warning(
                "Preset base path %s does not exist", self._base_path
            )
            return []
        presets = sorted(
            entry.stem
            for entry in self._base_path.iterdir()
            if entry.is_file() and entry.suffix in self.SUFFIXES
        )
        LOGGER.debug("Discovered presets: %s", ", ".join(presets) or "<none>")
        return presets

    def load_preset(self, name: str) -> LoadedConfig:
        for suffix in self.SUFFIXES:
            path = self._base_path / f"{name}{suffix}"
            if path.is_file():
                return self.load_file(path)
        raise ConfigValidationError(
            f"Preset '{name}' not found under {self._base_path}"
        )

    def load_file(
        self, path: Path, base: RunConfig | None = None
    ) -> LoadedConfig:
        """Load ``path``; keys it does not set come from ``base``."""

        LOGGER.info("Loading run configuration from %s", path)
        payload = self._read(Path(path))
        merged = base.model_dump() if base is not None else {}
        merged.update(payload)
        config = build_config(merged)
        digest = config.digest()
        LOGGER.info("Configuration %s loaded with hash %s", path, digest)
        return LoadedConfig(config=config, source=str(path), digest=digest)

    def _read(self, path: Path) -> Mapping[str, Any]:
        if not path.is_file():
            raise ConfigValidationError(f"Missing configuration file: {path}")
        kind = self.SUFFIXES.get(path.suffix.lower())
        if kind is None:
            raise ConfigValidationError(
                f"Unsupported configuration format '{path.suffix}'"
            )
        text = path.read_text(encoding="utf-8")
        try:
            if kind == "yaml":
                loaded = yaml.safe_load(text)
            elif kind == "json":
                loaded = json.loads(text)
            else:
                loaded = tomllib.loads(text)
        except _PARSE_ERRORS as exc:
            raise ConfigValidationError(
                f"Configuration {path} is not valid {kind}: {exc}"
            ) from exc
        if not isinstance(loaded, Mapping):
            raise ConfigValidationError(
                f"Configuration in {path} must be a mapping"
            )
        return loaded


def _compute_hash(data: Mapping[str, Any]) -> str:
    canonical = json.dumps(_sort_structure(data), separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _sort_structure(data: Any) -> Any:
    if isinstance(data, Mapping):
        return {key: _sort_structure(data[key]) for key in sorted(data)}
    if isinstance(data, list | tuple):
        return [_sort_structure(item) for item in data]
    return data


__all__ = [
    "SUITES",
    "ConfigValidationError",
    "LoadedConfig",
    "RunConfig",
    "RunConfigLoader",
    "build_config",
]
