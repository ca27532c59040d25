"""Exact dynamics of a one-parameter family of 4D cluster maps.

The package iterates the maps exactly over big rationals (and over exact
positive reals where fixed points are irrational), reduces them to plane
maps, classifies every orbit, and cross-checks each claim with independent
float-mode oracles.
"""

from .arith import (
    IrrationalSum,
    NonPositiveInput,
    PosReal,
    Precision,
    PrecisionExhausted,
)

__all__ = [
    "IrrationalSum",
    "NonPositiveInput",
    "PosReal",
    "Precision",
    "PrecisionExhausted",
]
