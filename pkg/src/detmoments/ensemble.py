"""Ensemble and measure tags shared across the exact, sampling and
quadrature layers."""

from __future__ import annotations

from enum import Enum


class Ensemble(Enum):
    """Which family of random density matrices is being studied."""

    TWO_QUBIT = "two-qubit"   # complex 4x4
    TWO_REBIT = "two-rebit"   # real 4x4
    RETRIT = "retrit"         # real 3x3

    @property
    def dim(self) -> int:
        return 3 if self is Ensemble.RETRIT else 4

    @property
    def complex_field(self) -> bool:
        return self is Ensemble.TWO_QUBIT


class Measure(Enum):
    HS = "hs"
    BURES = "bures"
