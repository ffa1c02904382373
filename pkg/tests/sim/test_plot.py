from pathlib import Path

import numpy as np

from embedkit.sim import RunRecord, RunRow
from embedkit.sim.plot import plot_errors


def _record(observer: str) -> RunRecord:
    record = RunRecord(observer)
    for t in np.linspace(0.0, 2.0, 21):
        record.and_row(
            RunRow(
                t=float(t),
                dr_norm=float(np.exp(-2.0 * t)),
                domega_norm=0.0,
                eo_norm=0.0 if t > 1.0 else float(np.exp(-4.0 * t)),
                v_tilde=0.0,
                orth_drift=0.0,
                u=(0.0, 0.0, 0.0),
                z_o=(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
            )
        )

    return record


def test_should_draw_error_norms(tmp_path: Path) -> None:
    path = tmp_path / "errors.svg"

    plot_errors(_record("kalman"), path)

    text = path.read_text(encoding="utf-8")
    assert text.startswith("<?xml")
    assert "<svg" in text


def test_should_draw_identical_files_for_identical_runs(tmp_path: Path) -> None:
    first = tmp_path / "first.svg"
    second = tmp_path / "second.svg"

    plot_errors(_record("none"), first)
    plot_errors(_record("none"), second)

    assert first.read_bytes() == second.read_bytes()
