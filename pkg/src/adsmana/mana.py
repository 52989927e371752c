"""Detector state, mana and the harvesting verdict.

To second order in the coupling the reduced detector state is

    [[p, 0, beta*], [0, q, 0], [beta, 0, 1 - p - q]]

with p = 1 - q here: the second-excited population is O(lambda^4) and is
set to zero.  Mana only involves q and beta, so this choice affects the
displayed matrix and nothing else.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .background import DetectorSetup
from .series import DEFAULT_TOL, beta_series_renormalized, delta_series, q_series

log = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DetectorState:
    q: float
    beta: complex
    p: float

    @property
    def matrix(self) -> np.ndarray:
        b = complex(self.beta)
        return np.array(
            [
                [self.p, 0.0, b.conjugate()],
                [0.0, self.q, 0.0],
                [b, 0.0, 1.0 - self.p - self.q],
            ],
            dtype=complex,
        )


@dataclass(frozen=True)
class HarvestVerdict:
    delta: float
    harvestable: bool
    mana_delta: float


def build_state(q: float, beta: complex) -> DetectorState:
    """Assemble the perturbative density matrix; positivity is not enforced."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q!r}")
    state = DetectorState(q=q, beta=beta, p=1.0 - q)
    if log.isEnabledFor(logging.DEBUG):
        lowest = float(np.linalg.eigvalsh(state.matrix)[0])
        if lowest < 0.0:
            log.debug("density matrix has a negative eigenvalue %.3e (perturbative state)", lowest)
    return state


def mana(q: float, beta: complex) -> float:
    """Mana of the qutrit state with populations (1-q, q, 0) and coherence beta.

    Evaluated as log1p of the bracket minus one, which keeps full relative
    accuracy when the result is tiny.  The three moduli sum to at least
    |3q| (their arguments add up to 3q), so for q >= 0 the excess is
    clipped at zero to remove rounding noise.
    """
    b = complex(beta)
    br, bi = b.real, b.imag
    # the two sqrt(3) terms are added first so that Im beta -> -Im beta is exact
    excess = ((abs(q - br - SQRT3 * bi) + abs(q - br + SQRT3 * bi)) + abs(q + 2.0 * br)) / 3.0 - q
    if q >= 0.0:
        excess = max(excess, 0.0)
    if not excess > -1.0:
        raise ValueError(f"mana undefined: log argument {1.0 + excess!r} is not positive")
    return math.log1p(excess)


def verdict(q: float, beta_real: float) -> HarvestVerdict:
    """Delta = -(q + 2 beta) and M_Delta = ln(1 + 2 Delta / 3) when Delta > 0."""
    if not q > 0.0:
        raise ValueError(f"verdict needs q > 0, got {q!r}")
    if beta_real > 0.0:
        raise ValueError(f"verdict needs real beta <= 0, got {beta_real!r}")
    delta = -(q + 2.0 * beta_real)
    if delta > 0.0:
        return HarvestVerdict(delta, True, math.log1p(2.0 * delta / 3.0))
    return HarvestVerdict(delta, False, 0.0)


@dataclass(frozen=True)
class ManaCurve:
    omegas: tuple[float, ...]
    values: tuple[float, ...]
    argmax: float
    max_value: float


def mana_at(setup: DetectorSetup, tol: float = DEFAULT_TOL) -> float:
    """M for one setup, with Delta taken from its own positive series.

    For real beta <= 0 and Delta > 0 the mana formula collapses to
    ln(1 + 2 Delta / 3); summing Delta directly avoids the cancellation in
    -(q + 2 beta) when both are much larger than their difference.
    """
    q = q_series(setup, tol).value
    beta = beta_series_renormalized(setup, tol).value
    delta = delta_series(setup, tol).value
    return mana_with_delta(q, beta, delta)


def mana_with_delta(q: float, beta: complex, delta: float) -> float:
    """Mana, using an independently computed Delta when the collapse applies."""
    b = complex(beta)
    if q > 0.0 and b.imag == 0.0 and b.real <= 0.0 and delta > 0.0:
        return math.log1p(2.0 * delta / 3.0)
    return mana(q, beta)


def _golden_max(fn, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    # golden-section search for the maximum of a unimodal function
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def mana_curve(template: DetectorSetup, omegas: Sequence[float] | Iterable[float], refine: bool = True,
               tol: float = DEFAULT_TOL) -> ManaCurve:
    """M on an Omega grid, with the peak located and optionally refined.

    The grid argmax is polished by golden-section search between its two
    neighbours, so ties on a coarse grid cannot hide a shift of the peak.
    """
    om = np.asarray(list(omegas), dtype=float)
    if om.size < 2 or np.any(om <= 0.0) or np.any(np.diff(om) <= 0.0):
        raise ValueError("Omega grid must be positive and strictly increasing with >= 2 points")
    values = np.array([mana_at(template.with_(omega=float(w)), tol) for w in om])
    i = int(np.argmax(values))
    best_x, best_v = float(om[i]), float(values[i])
    if refine and 0 < i < om.size - 1:
        x, v = _golden_max(lambda w: mana_at(template.with_(omega=w), tol), float(om[i - 1]), float(om[i + 1]))
        if v >= best_v:
            best_x, best_v = x, v
    return ManaCurve(tuple(om.tolist()), tuple(values.tolist()), best_x, best_v)
