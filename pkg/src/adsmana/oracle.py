"""Quadrature reference values for q and beta at finite regulator.

At fixed eps > 0 the single s-integrals for q and for the full-line
(renormalised) beta equal the regulated mode sums exactly, which gives an
independent check of the series code.

The Wightman function has its poles at Im s = +2 gamma eps, above the real
axis, and everything else in the integrand is entire.  The integration
contour is therefore moved down to s = x - ic.  With c at the Gaussian
saddle of the leading mode the integrand loses both its eps^(1-d) spike at
s = 0 and the large cancelling oscillation, so the shifted integral is well
conditioned even for eps = 1e-3.  ``contour_shift=0`` integrates on the
real line instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .background import DetectorSetup, derive_geometry, wightman_from_params
from .quadrature import integrate
from .specfn import erfc

HALF_WIDTH = 10.0  # integration range is |x| <= HALF_WIDTH * sigma
MIN_PANELS = 64
MAX_PANELS = 10_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    subdivisions: int
    epsilon: float
    imag_part: float = 0.0
    contour_shift: float = 0.0


@dataclass(frozen=True)
class ExtrapolationResult:
    limit_value: float
    eps_sequence: tuple[float, ...]
    per_eps_values: tuple[float, ...]
    model_order: int
    discrepancy: float


class ImaginaryPartError(ArithmeticError):
    """The imaginary part of a real integral exceeded its error budget."""


def _shifted_integral(setup: DetectorSetup, eps: float, freq: float, c: float, quad_tol: float):
    """int e^{-s^2/2 sigma^2} e^{-i freq s} W(s) ds along Im s = -c.

    Returns (value, abs_error, panels); the error includes the truncation
    tail beyond |x| = HALF_WIDTH * sigma.
    """
    geom = derive_geometry(setup)
    d, sig, g = setup.d, setup.sigma, geom.gamma
    eps_eff = eps + c / (2.0 * g)
    # constant part of |e^{-(x-ic)^2/2 sig^2} e^{-i freq (x-ic)}|
    log_env = c * c / (2.0 * sig * sig) - freq * c
    wave = c / (sig * sig) - freq

    def f(x):
        gauss = np.exp(-x * x / (2.0 * sig * sig) + log_env + 1j * wave * x)
        return gauss * wightman_from_params(d, g, x, eps_eff)

    half = HALF_WIDTH * sig
    res = integrate(
        f, -half, half, rel_tol=quad_tol, breakpoints=(0.0,),
        min_panels=MIN_PANELS, max_panels=MAX_PANELS,
    )
    # |W| <= pref (2 sinh eps_eff)^(1-d) on the shifted line
    w_max = abs(complex(wightman_from_params(d, g, 0.0, eps_eff)))
    tail = w_max * math.exp(log_env) * sig * math.sqrt(2.0 * math.pi) * erfc(HALF_WIDTH / math.sqrt(2.0))
    return complex(res.value), res.abs_error + tail, res.panels


def _check_imag(value: complex, err: float, scale: float) -> None:
    # rounding in the oscillatory sum sets a floor below the error estimate
    if abs(value.imag) > 10.0 * err + 1e-13 * scale:
        raise ImaginaryPartError(
            f"imaginary part {value.imag:.3e} exceeds 10 x error estimate {err:.3e}"
        )


def quad_q(setup: DetectorSetup, eps: float, quad_tol: float = 1e-12, contour_shift: float | None = None) -> QuadratureResult:
    """q(eps) from the single s-integral, by adaptive quadrature."""
    if not eps > 0.0:
        raise ValueError("regulator must be > 0")
    if setup.lam == 0.0:
        return QuadratureResult(0.0, 0.0, 0, eps)
    geom = derive_geometry(setup)
    sig2 = setup.sigma**2
    c = sig2 * (setup.omega + geom.omega_d) if contour_shift is None else float(contour_shift)
    raw, err, panels = _shifted_integral(setup, eps, setup.omega, c, quad_tol)
    pref = 0.5 * setup.lam**2 * setup.sigma * math.sqrt(0.5 * math.pi)
    value = pref * raw
    _check_imag(value, pref * err, abs(value))
    return QuadratureResult(value.real, pref * err, panels, eps, value.imag, c)


def quad_beta(setup: DetectorSetup, eps: float, quad_tol: float = 1e-12, contour_shift: float | None = None) -> QuadratureResult:
    """Renormalised beta(eps): the symmetric full-line integral, halved."""
    if not eps > 0.0:
        raise ValueError("regulator must be > 0")
    if setup.lam == 0.0:
        return QuadratureResult(0.0, 0.0, 0, eps)
    geom = derive_geometry(setup)
    sig2 = setup.sigma**2
    c = sig2 * geom.omega_d if contour_shift is None else float(contour_shift)
    raw, err, panels = _shifted_integral(setup, eps, 0.0, c, quad_tol)
    pref = -setup.lam**2 * math.sqrt(2.0 * math.pi) * setup.sigma / 8.0 * math.exp(-0.5 * sig2 * setup.omega**2)
    value = pref * raw
    _check_imag(value, abs(pref) * err, abs(value))
    return QuadratureResult(value.real, abs(pref) * err, panels, eps, value.imag, c)


def richardson_extrapolate(pairs: Sequence[tuple[float, float]]) -> ExtrapolationResult:
    """Extrapolate value(eps) to eps = 0 with v0 + c1 eps + c2 eps^2.

    The quadratic goes through the last three points; the discrepancy is the
    distance to the linear extrapolation through the last two.
    """
    if len(pairs) < 3:
        raise ValueError("need at least three (eps, value) pairs")
    eps = np.array([p[0] for p in pairs], dtype=float)
    vals = np.array([p[1] for p in pairs], dtype=float)
    if np.any(eps <= 0.0) or np.any(np.diff(eps) >= 0.0):
        raise ValueError("eps must be positive and strictly decreasing")
    e3, v3 = eps[-3:], vals[-3:]
    vander = np.vander(e3, 3, increasing=True)
    if abs(np.linalg.det(vander / vander.max())) < 1e-14:
        raise ValueError("degenerate fit: regulators too close together")
    v0 = float(np.linalg.solve(vander, v3)[0])
    e2, v2 = e3[1:], v3[1:]
    lin = float(v2[1] - e2[1] * (v2[0] - v2[1]) / (e2[0] - e2[1]))
    return ExtrapolationResult(v0, tuple(eps), tuple(vals), 2, abs(v0 - lin))
