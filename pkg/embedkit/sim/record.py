from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from embedkit.linalg import Vector
from embedkit.ltv import fit_decay

HEADER = (
    ["t", "dR_norm", "dOmega_norm", "eo_norm", "Vtilde", "orth_drift"]
    + [f"u{i}" for i in range(1, 4)]
    + [f"zo{i}" for i in range(1, 7)]
)

DECAY_R2 = 0.95
RESIDUAL_FRACTION = 0.01


@dataclass(frozen=True)
class RunRow:
    t: float
    dr_norm: float
    domega_norm: float
    eo_norm: float
    v_tilde: float
    orth_drift: float
    u: tuple[float, float, float]
    z_o: tuple[float, float, float, float, float, float]

    @property
    def tracking_norm(self) -> float:
        return float(np.hypot(self.dr_norm, self.domega_norm))

    def values(self) -> list[float]:
        return [
            self.t,
            self.dr_norm,
            self.domega_norm,
            self.eo_norm,
            self.v_tilde,
            self.orth_drift,
            *self.u,
            *self.z_o,
        ]


@dataclass
class RunRecord:
    observer: str
    rows: list[RunRow] = field(default_factory=list)
    abort_reason: str | None = None

    def and_row(self, row: RunRow) -> RunRecord:
        self.rows.append(row)

        return self

    def aborted_with(self, reason: str) -> RunRecord:
        self.abort_reason = reason

        return self

    @property
    def aborted(self) -> bool:
        return self.abort_reason is not None

    @property
    def has_observer(self) -> bool:
        return self.observer != "none"

    def __len__(self) -> int:
        return len(self.rows)

    def times(self) -> Vector:
        return np.array([row.t for row in self.rows])

    def tracking_norms(self) -> Vector:
        return np.array([row.tracking_norm for row in self.rows])

    def observation_norms(self) -> Vector:
        return np.array([row.eo_norm for row in self.rows])

    def column(self, name: str) -> Vector:
        index = HEADER.index(name)

        return np.array([row.values()[index] for row in self.rows])

    def write_csv(self, path: Path) -> None:
        with path.open("w", newline="", encoding="utf-8") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(HEADER)
            for row in self.rows:
                writer.writerow([format_float(value) for value in row.values()])

    def summary(self) -> dict[str, str]:
        result = {
            "observer": self.observer,
            "rows": str(len(self.rows)),
            "aborted": _flag(self.aborted),
            "abort_reason": self.abort_reason or "none",
        }
        if not self.rows:
            result["passed"] = "false"
            return result

        first, last = self.rows[0], self.rows[-1]
        result.update(
            {
                "t_final": format_float(last.t),
                "initial_dR_norm": format_float(first.dr_norm),
                "final_dR_norm": format_float(last.dr_norm),
                "final_dOmega_norm": format_float(last.domega_norm),
                "initial_tracking_norm": format_float(first.tracking_norm),
                "final_tracking_norm": format_float(last.tracking_norm),
                "max_orth_drift": format_float(
                    max(row.orth_drift for row in self.rows)
                ),
            }
        )

        checks = [self._decay(result, "tracking", self.tracking_norms())]
        if self.has_observer:
            result["initial_eo_norm"] = format_float(first.eo_norm)
            result["final_eo_norm"] = format_float(last.eo_norm)
            checks.append(self._decay(result, "observation", self.observation_norms()))
        else:
            for key in ("decay_rate", "decay_r2", "converged"):
                result[f"observation_{key}"] = "n/a"

        result["passed"] = _flag(not self.aborted and all(checks))

        return result

    def _decay(self, result: dict[str, str], name: str, norms: Vector) -> bool:
        if len(norms) < 10:
            result[f"{name}_decay_rate"] = "n/a"
            result[f"{name}_decay_r2"] = "n/a"
            result[f"{name}_converged"] = "false"
            return False

        fit = fit_decay(self.times(), norms)
        initial = float(norms[0])
        converged = initial == 0.0 or float(norms[-1]) < RESIDUAL_FRACTION * initial
        decays = initial == 0.0 or (fit.rate < 0.0 and fit.r2 > DECAY_R2)
        result[f"{name}_decay_rate"] = format_float(fit.rate)
        result[f"{name}_decay_r2"] = format_float(fit.r2)
        result[f"{name}_converged"] = _flag(converged)

        return converged and decays

    def write_summary(self, path: Path) -> None:
        lines = [f"{key}={value}" for key, value in self.summary().items()]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def format_float(value: float) -> str:
    return f"{value:.17g}"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def read_summary(path: Path) -> dict[str, str]:
    entries = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition("=")
        entries[key] = value

    return entries
