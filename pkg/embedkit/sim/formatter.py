from __future__ import annotations

import math
import tomllib
import types
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Generic, TypeVar, Union, get_args, get_origin, get_type_hints

import tomli_w

from embedkit.error import ConfigError
from embedkit.sim.scenario import Scenario

_TargetT = TypeVar("_TargetT")

_MISSING = object()


@dataclass
class DataclassFormatter(Generic[_TargetT]):
    """Loads nested dictionaries into frozen dataclasses by their type hints.

    Every unknown key and mistyped value is reported with its dotted path
    before anything is constructed.
    """

    resource: type[_TargetT]

    def load(self, raw: dict[str, Any]) -> _TargetT:
        error = ConfigError("invalid configuration")
        value = _load_dataclass(self.resource, raw, "", error)
        error.fire()

        return value  # type: ignore

    def dump(self, item: _TargetT) -> dict[str, Any]:
        return _drop_none(asdict(item))  # type: ignore


def _load_dataclass(
    resource: type[Any], raw: Any, path: str, error: ConfigError
) -> Any:
    if not isinstance(raw, dict):
        error.with_issue(path or "<root>", "expected a table")
        return None

    hints = get_type_hints(resource)
    names = [f.name for f in fields(resource)]
    for key in raw:
        if key not in names:
            error.with_issue(_join(path, key), "unknown key")

    loaded = {}
    for key in (name for name in names if name in raw):
        value = _load_value(hints[key], raw[key], _join(path, key), error)
        if value is not _MISSING:
            loaded[key] = value

    return resource(**loaded) if not error.issues else None


def _load_value(kind: Any, raw: Any, path: str, error: ConfigError) -> Any:
    origin = get_origin(kind)
    if origin in (Union, types.UnionType):
        options = [arg for arg in get_args(kind) if arg is not type(None)]
        return _load_value(options[0], raw, path, error)
    if is_dataclass(kind):
        return _load_dataclass(kind, raw, path, error)  # type: ignore
    if origin is list:
        if not isinstance(raw, list):
            error.with_issue(path, "expected an array")
            return _MISSING
        (item,) = get_args(kind)
        return [
            _load_value(item, entry, f"{path}[{i}]", error)
            for i, entry in enumerate(raw)
        ]
    if kind is float:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            error.with_issue(path, "expected a number")
            return _MISSING
        if not math.isfinite(raw):
            error.with_issue(path, "expected a finite number")
            return _MISSING
        return float(raw)
    if kind is int:
        if isinstance(raw, bool) or not isinstance(raw, int):
            error.with_issue(path, "expected an integer")
            return _MISSING
        return raw
    if kind is bool:
        if not isinstance(raw, bool):
            error.with_issue(path, "expected true or false")
            return _MISSING
        return raw
    if kind is str:
        if not isinstance(raw, str):
            error.with_issue(path, "expected a string")
            return _MISSING
        return raw

    error.with_issue(path, f"unsupported type {kind}")
    return _MISSING


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _drop_none(raw: dict[str, Any]) -> dict[str, Any]:
    return {
        key: _drop_none(value) if isinstance(value, dict) else value
        for key, value in raw.items()
        if value is not None
    }


@dataclass
class ScenarioFormatter:
    inner: DataclassFormatter[Scenario] = field(
        default_factory=lambda: DataclassFormatter(Scenario)
    )

    def load(self, raw: dict[str, Any]) -> Scenario:
        return self.inner.load(raw).validate()

    def dump(self, scenario: Scenario) -> dict[str, Any]:
        return self.inner.dump(scenario)

    def loads(self, text: str, source: str = "<string>") -> Scenario:
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{source}: {e}") from e

        try:
            return self.load(raw)
        except ConfigError as e:
            e.message = f"{source}: {e.message}"
            raise

    def dumps(self, scenario: Scenario) -> str:
        return tomli_w.dumps(self.dump(scenario))

    def read(self, path: Path) -> Scenario:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"{path}: {e.strerror}") from e

        return self.loads(text, str(path))

    def write(self, scenario: Scenario, path: Path) -> None:
        path.write_text(self.dumps(scenario), encoding="utf-8")
