from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from embedkit.ltv.analysis import UNDERFLOW  # noqa: E402
from embedkit.sim.record import RunRecord  # noqa: E402

HASH_SALT = "embedkit"


def plot_errors(record: RunRecord, path: Path) -> None:
    """Tracking and observation error norms against time on a log scale."""
    times = record.times()

    plt.rcParams["svg.hashsalt"] = HASH_SALT
    figure, axes = plt.subplots(figsize=(7, 4))
    axes.semilogy(
        times,
        np.maximum(record.tracking_norms(), UNDERFLOW),
        label="tracking error",
    )
    if record.has_observer:
        axes.semilogy(
            times,
            np.maximum(record.observation_norms(), UNDERFLOW),
            label="observation error",
            linestyle="--",
        )
    axes.set_xlabel("t [s]")
    axes.set_ylabel("norm")
    axes.grid(True, which="both", alpha=0.3)
    axes.legend()
    figure.tight_layout()
    figure.savefig(path, format="svg", metadata={"Date": None})
    plt.close(figure)
