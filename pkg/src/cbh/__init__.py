"""Exact arithmetic for n-fold covers of GL_r: lattices, Weyl combinatorics, Whittaker
coefficients and truncated Rankin-Selberg zeta series."""
from __future__ import annotations

from .coeffring import RingElement, Specialization, TruncatedSeries
from .covering import CoveringDescriptor, fits_fundamental_pair
from .zeta import (
    FundamentalPairInstance,
    counterexample_series,
    fundamental_pair,
    verify_rank2,
    verify_theta,
)

__all__ = [
    "CoveringDescriptor",
    "FundamentalPairInstance",
    "RingElement",
    "Specialization",
    "TruncatedSeries",
    "counterexample_series",
    "fits_fundamental_pair",
    "fundamental_pair",
    "verify_rank2",
    "verify_theta",
]
