"""Mana harvested by a static qutrit detector from the AdS vacuum.

Exact mode sums, large-radius closed forms, a quadrature oracle and the
flat-space limits, with a CLI for sweeps and SVG plots.
"""

from .background import MINKOWSKI, DetectorSetup, derive_geometry
from .closedform import beta_closed, euler_maclaurin_correct, q_closed
from .mana import mana, mana_at, mana_curve, verdict
from .oracle import quad_beta, quad_q, richardson_extrapolate
from .series import (
    beta_series_renormalized,
    delta_series,
    minkowski_beta,
    minkowski_q,
    q_series,
)
from .sweep import evaluate

__version__ = "0.1.0"

__all__ = [
    "MINKOWSKI",
    "DetectorSetup",
    "derive_geometry",
    "q_series",
    "beta_series_renormalized",
    "delta_series",
    "minkowski_q",
    "minkowski_beta",
    "q_closed",
    "beta_closed",
    "euler_maclaurin_correct",
    "quad_q",
    "quad_beta",
    "richardson_extrapolate",
    "mana",
    "mana_at",
    "mana_curve",
    "verdict",
    "evaluate",
]
