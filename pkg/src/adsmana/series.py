"""Exact mode sums for q, the renormalised beta and the discriminant Delta.

Every series has the shape  prefactor * sum_n w_n exp(phi(n))  with the
rising-product weight w_n = Gamma(d+n-1)/Gamma(n+1).  Terms are built as
logarithms and combined with a running log-sum-exp, so nothing overflows or
underflows before the final exponentiation; ``SeriesResult.log_value`` keeps
the logarithm for callers that need it (Delta can be far below the smallest
double while still being strictly positive).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .background import DetectorSetup, derive_geometry
from .specfn import erfc, erfi_scaled, gamma_ratio_log_array, log_gamma, tricomi_u

TERM_CAP = 1_000_000
DEFAULT_TOL = 1e-14


class Method(str, enum.Enum):
    SERIES = "series"
    SERIES_WITH_REGULATOR = "series_with_regulator"
    MINKOWSKI_CLOSED = "minkowski_closed"


@dataclass(frozen=True)
class SeriesResult:
    value: float
    method: Method
    epsilon: float
    terms_used: int
    tail_bound: float
    log_value: float
    capped: bool = False


@dataclass(frozen=True)
class _LogSum:
    log_sum: float
    log_tail: float
    terms: int
    capped: bool


def _log_mode_sum(
    d: int,
    log_phase: Callable[[np.ndarray], np.ndarray],
    tol: float,
    cap: int = TERM_CAP,
) -> _LogSum:
    """ln sum_n w_n exp(log_phase(n)) with a geometric tail bound.

    ln w_n is concave in n and every phase used here is concave too, so the
    term ratio r_n = t_{n+1}/t_n is non-increasing.  Once r_n < 1 the tail
    after n is at most t_n r_n / (1 - r_n); summation stops when that bound
    drops below ``tol`` times the partial sum.  At least d + 2 terms are
    always taken so the growing weight cannot fake convergence.
    """
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    min_terms = d + 2
    running = -math.inf
    start = 0
    chunk = 64
    while start < cap:
        stop = min(start + chunk + 1, cap + 1)
        n = np.arange(start, stop)
        lt = gamma_ratio_log_array(d, n) + log_phase(n)
        log_ratio = np.diff(lt)
        cum = np.logaddexp.accumulate(np.concatenate(([running], lt[:-1])))[1:]
        with np.errstate(divide="ignore"):
            # log of r / (1 - r), only meaningful where r < 1
            log_geo = log_ratio - np.log(-np.expm1(np.minimum(log_ratio, -1e-300)))
        ok = (
            (n[:-1] + 1 >= min_terms)
            & (log_ratio < 0.0)
            & (lt[:-1] + log_geo <= math.log(tol) + cum)
        )
        hit = np.flatnonzero(ok)
        if hit.size:
            i = int(hit[0])
            return _LogSum(float(cum[i]), float(lt[i] + log_geo[i]), int(n[i]) + 1, False)
        running = float(cum[-1])
        start = stop - 1
        chunk *= 2
    # cap reached: report an honest, possibly large, tail estimate
    tail = float(lt[-1] + log_geo[-1]) if log_ratio[-1] < 0.0 else math.inf
    return _LogSum(running, tail, cap, True)


def _finish(log_pref: float, sign: float, s: _LogSum, method: Method, eps: float, lam: float) -> SeriesResult:
    """Exponentiate at unit coupling, then multiply by lambda^2.

    Keeping lambda^2 out of the exponent makes the coupling scaling exact:
    doubling lambda multiplies the result by exactly 4.
    """
    lam2 = lam * lam
    if lam2 == 0.0:
        log_value, value, tail = -math.inf, 0.0, 0.0
    else:
        log_value = log_pref + s.log_sum + math.log(lam2)
        unit = math.exp(log_pref + s.log_sum)
        value = sign * lam2 * unit if unit > 0.0 and math.isfinite(unit) else sign * math.exp(log_value)
        tail = lam2 * math.exp(log_pref + s.log_tail)
    if s.capped:
        warnings.warn(f"series hit the {TERM_CAP}-term cap; tail bound {tail:.3e}", RuntimeWarning)
    return SeriesResult(value, method, eps, s.terms, tail, log_value, s.capped)


def _q_like(setup: DetectorSetup, tol: float, eps: float, method: Method) -> SeriesResult:
    geom = derive_geometry(setup)
    d, s2, om, g = setup.d, setup.sigma**2, setup.omega, geom.gamma

    def phase(n):
        on = (2 * n + d - 1) / (2.0 * g)
        return -0.5 * s2 * (om + on) ** 2 - (2 * n + d - 1) * eps

    res = _finish(
        math.log(2.0) + geom.log_alpha_unit, 1.0,
        _log_mode_sum(d, phase, tol), method, eps, setup.lam,
    )
    if res.value > 0.1:
        warnings.warn(f"q = {res.value:.3g} > 0.1: outside the perturbative regime", RuntimeWarning)
    return res


def q_series(setup: DetectorSetup, tol: float = DEFAULT_TOL) -> SeriesResult:
    """Transition probability q as the exact mode sum."""
    return _q_like(setup, tol, 0.0, Method.SERIES)


def q_series_with_regulator(setup: DetectorSetup, eps: float, tol: float = DEFAULT_TOL) -> SeriesResult:
    """q with the finite-regulator factor exp(-(2n+d-1) eps) on every term."""
    if not eps > 0.0:
        raise ValueError("regulator must be > 0; use q_series for the limit")
    return _q_like(setup, tol, eps, Method.SERIES_WITH_REGULATOR)


def _beta_like(setup: DetectorSetup, tol: float, eps: float, method: Method) -> SeriesResult:
    geom = derive_geometry(setup)
    d, s2, om, g = setup.d, setup.sigma**2, setup.omega, geom.gamma

    def phase(n):
        on = (2 * n + d - 1) / (2.0 * g)
        return -0.5 * s2 * (om * om + on * on) - (2 * n + d - 1) * eps

    return _finish(
        geom.log_alpha_unit, -1.0,
        _log_mode_sum(d, phase, tol), method, eps, setup.lam,
    )


def beta_series_renormalized(setup: DetectorSetup, tol: float = DEFAULT_TOL) -> SeriesResult:
    """Renormalised coherence beta (always negative for nonzero coupling)."""
    return _beta_like(setup, tol, 0.0, Method.SERIES)


def beta_series_with_regulator(setup: DetectorSetup, eps: float, tol: float = DEFAULT_TOL) -> SeriesResult:
    """Renormalised beta with the finite-regulator factor on every term."""
    if not eps > 0.0:
        raise ValueError("regulator must be > 0; use beta_series_renormalized for the limit")
    return _beta_like(setup, tol, eps, Method.SERIES_WITH_REGULATOR)


def beta_series_raw_terms(setup: DetectorSetup, n_max: int) -> np.ndarray:
    """Terms n = 0..n_max of the unrenormalised beta.

    Each term carries the factor 1 - i erfi(sigma Omega_n / sqrt 2).  The
    imaginary part is assembled from erfi_scaled, whose exp(-x^2) cancels
    the Gaussian analytically.  Those imaginary terms behave like
    n^(d-3) for large n: constant for d = 3 and growing beyond, so the
    partial sums diverge.  That divergence is what renormalisation removes.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    geom = derive_geometry(setup)
    d, sig, om, g = setup.d, setup.sigma, setup.omega, geom.gamma
    n = np.arange(n_max + 1)
    on = (2 * n + d - 1) / (2.0 * g)
    log_w = gamma_ratio_log_array(d, n)
    real = -geom.alpha * np.exp(log_w - 0.5 * sig**2 * (om**2 + on**2))
    scaled = np.array([erfi_scaled(sig * x / math.sqrt(2.0)) for x in on])
    imag = geom.alpha * np.exp(log_w - 0.5 * sig**2 * om**2) * scaled
    return real + 1j * imag


def beta_series_raw(setup: DetectorSetup, n_max: int) -> complex:
    """Partial sum n = 0..n_max of the unrenormalised beta (diagnostic only)."""
    terms = beta_series_raw_terms(setup, n_max)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def delta_discriminant(q: float, beta: float) -> float:
    """Delta = -(q + 2 beta) for q > 0 and real beta <= 0."""
    if not q > 0.0:
        raise ValueError(f"discriminant needs q > 0, got {q!r}")
    if beta > 0.0:
        raise ValueError(f"discriminant needs real beta <= 0, got {beta!r}")
    return -(q + 2.0 * beta)


def _delta_like(setup: DetectorSetup, tol: float, eps: float, method: Method) -> SeriesResult:
    geom = derive_geometry(setup)
    d, s2, om, g = setup.d, setup.sigma**2, setup.omega, geom.gamma

    def phase(n):
        on = (2 * n + d - 1) / (2.0 * g)
        # 1 - exp(-s2 om on) in log form, no cancellation for tiny om
        return (
            -0.5 * s2 * (om * om + on * on)
            + np.log(-np.expm1(-s2 * om * on))
            - (2 * n + d - 1) * eps
        )

    return _finish(
        math.log(2.0) + geom.log_alpha_unit, 1.0,
        _log_mode_sum(d, phase, tol), method, eps, setup.lam,
    )


def delta_series(setup: DetectorSetup, tol: float = DEFAULT_TOL, eps: float = 0.0) -> SeriesResult:
    """Delta summed term by term; every term is positive.

    ``eps > 0`` applies the same regulator factor as the regulated q and beta.
    """
    if eps < 0.0:
        raise ValueError("regulator must be >= 0")
    method = Method.SERIES_WITH_REGULATOR if eps > 0.0 else Method.SERIES
    return _delta_like(setup, tol, eps, method)


# ---------------------------------------------------------------------------
# Flat-space limits
# ---------------------------------------------------------------------------

def _check_d(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    return int(d)


def minkowski_q(d: int, sigma: float, lam: float, omega: float) -> float:
    """q in (d+1)-dimensional Minkowski space, Tricomi-U closed form."""
    d = _check_d(d)
    if lam == 0.0:
        return 0.0
    z = 0.5 * (sigma * omega) ** 2
    log_pref = (
        2.0 * math.log(abs(lam))
        + math.log(omega)
        + log_gamma(d - 1)
        + math.log(math.pi)
        + (4 - d) * math.log(sigma)
        - math.log(2.0)
        - 0.5 * d * math.log(8.0 * math.pi)
        - log_gamma(0.5 * d)
        - z
    )
    return math.exp(log_pref) * tricomi_u(0.5 * d, 1.5, z)


def minkowski_q_d3_erfc(sigma: float, lam: float, omega: float) -> float:
    """The d = 3 flat-space q written with erfc instead of U."""
    x = sigma * omega
    return lam**2 / (16.0 * math.pi) * (
        2.0 * math.exp(-0.5 * x * x) - math.sqrt(2.0 * math.pi) * x * erfc(x / math.sqrt(2.0))
    )


def minkowski_beta(d: int, sigma: float, lam: float, omega: float) -> float:
    """Renormalised beta in (d+1)-dimensional Minkowski space."""
    d = _check_d(d)
    if lam == 0.0:
        return 0.0
    log_mag = (
        2.0 * math.log(abs(lam))
        - 0.5 * (d + 7) * math.log(2.0)
        + (1.0 - 0.5 * d) * math.log(math.pi)
        + (3 - d) * math.log(sigma)
        + log_gamma(0.5 * (d - 1))
        - log_gamma(0.5 * d)
        - 0.5 * (sigma * omega) ** 2
    )
    return -math.exp(log_mag)


def minkowski_result(value: float) -> SeriesResult:
    log_value = math.log(abs(value)) if value != 0.0 else -math.inf
    return SeriesResult(value, Method.MINKOWSKI_CLOSED, 0.0, 1, 0.0, log_value)
