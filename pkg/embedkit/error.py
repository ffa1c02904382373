from __future__ import annotations

from dataclasses import dataclass, field
from typing import Self


@dataclass
class NotSkewSymmetric(Exception):
    asymmetry: float
    tolerance: float


@dataclass
class NotSymmetric(Exception):
    asymmetry: float
    tolerance: float


@dataclass
class DimensionMismatch(Exception):
    expected: tuple[int, ...]
    actual: tuple[int, ...]


@dataclass
class NonUnitAxis(Exception):
    norm: float


@dataclass
class NonFiniteState(Exception):
    time: float
    reason: str = "non-finite state"

    def __str__(self) -> str:
        return f"{self.reason} at t={self.time:.6g}"


@dataclass
class EmptySampleSet(Exception):
    message: str = "no samples inside the sublevel set"


@dataclass
class OnManifoldSample(Exception):
    value: float


@dataclass
class SingularWeight(Exception):
    condition: float


@dataclass
class LostPositivity(Exception):
    time: float
    min_eigenvalue: float

    def __str__(self) -> str:
        return (
            f"P lost positivity at t={self.time:.6g} "
            f"(min eig {self.min_eigenvalue:.3g})"
        )


@dataclass
class DegenerateTrace(Exception):
    samples: int


@dataclass
class InvalidGainMatrix(Exception):
    name: str
    reason: str = "not symmetric positive definite"


@dataclass
class NotPositiveDefinite(Exception):
    name: str
    min_eigenvalue: float


@dataclass
class ConstructionFailure(Exception):
    invariant: str
    time: float
    error: float


@dataclass
class DomainExit(Exception):
    time: float
    determinant: float

    def __str__(self) -> str:
        return f"left GL+(3) at t={self.time:.6g} (det R = {self.determinant:.6g})"


class DomainWarning(UserWarning):
    pass


@dataclass
class ConfigError(Exception):
    message: str = ""

    _issues: list[tuple[str, str]] = field(init=False, default_factory=list)

    @property
    def issues(self) -> list[tuple[str, str]]:
        return list(self._issues)

    def with_issue(self, path: str, message: str) -> Self:
        self._issues.append((path, message))

        return self

    def and_issue(self, path: str, message: str) -> Self:
        return self.with_issue(path, message)

    def fire(self) -> None:
        if self._issues:
            raise self

    def __str__(self) -> str:
        lines = [self.message] if self.message else []
        lines.extend(f"{path}: {message}" for path, message in self._issues)

        return "\n".join(lines)
