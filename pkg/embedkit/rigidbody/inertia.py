from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from embedkit.error import DimensionMismatch, NotPositiveDefinite
from embedkit.linalg import Mat3, is_spd, sym, sym_eig_bounds


@dataclass(frozen=True, eq=False)
class Inertia:
    matrix: Mat3

    def __post_init__(self) -> None:
        if self.matrix.shape != (3, 3):
            raise DimensionMismatch((3, 3), self.matrix.shape)
        if not is_spd(self.matrix):
            raise NotPositiveDefinite("inertia", sym_eig_bounds(sym(self.matrix))[0])

    @classmethod
    def diagonal(cls, *entries: float) -> Inertia:
        return cls(np.diag(np.array(entries, dtype=float)))

    @cached_property
    def inverse(self) -> Mat3:
        return np.linalg.inv(self.matrix)


PAPER_INERTIA = (3.0, 2.0, 1.0)
