"""Large-gamma closed forms q_c, beta_c and the Euler-Maclaurin bridge.

Writing x_n = n / gamma turns the mode sums into Riemann sums of

    f(x) = P(x) exp(-sigma^2 (c + x)^2 / 2),   P(x) = prod_{k=1}^{d-2} (gamma x + k),

with c = Omega + Omega_d for q and c = Omega_d for beta (beta also carries
exp(-sigma^2 Omega^2 / 2)).  Replacing the sum by the integral gives the
closed forms.  Expanding P in powers of x reduces everything to the
half-line Gaussian moments

    J_n(a) = int_0^inf x^n exp(-sigma^2 (a + x)^2 / 2) dx.

Normalisation: q = 2 alpha sum_n g(n) and beta = -alpha sum_n g(n) with
g(n) = f(n / gamma); the integrals over n equal gamma times those over x.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .background import DetectorSetup, derive_geometry
from .quadrature import integrate
from .specfn import (
    Polynomial,
    bernoulli_data,
    erfc,
    kummer_1f1,
    log_gamma,
    prod_poly_coeffs,
    tricomi_u,
)

# Below this z = sigma^2 a^2 / 2 the two-Kummer form of J_n is used as
# written; above it the two terms cancel (loss ~ e^z) and the equivalent
# Tricomi form takes over.
_KUMMER_MAX_Z = 0.5

# Direct Euler-Maclaurin remainders are integrated panel by panel over the
# unit cells of n; beyond this many cells only the bound is reported.
_MAX_REMAINDER_CELLS = 20_000


class Kind(str, enum.Enum):
    Q_C = "q_c"
    BETA_C = "beta_c"
    TABLE_Q = "table_q"
    TABLE_BETA = "table_beta"


@dataclass(frozen=True)
class ClosedFormResult:
    value: float
    d: int
    kind: Kind
    em_correction: float | None = None
    em_residual_bound: float | None = None
    em_remainder: float | None = None
    em_remainder_bound: float | None = None


# ---------------------------------------------------------------------------
# Gaussian moments
# ---------------------------------------------------------------------------

def _moment_kummer(n: int, a: float, sigma: float) -> float:
    z = 0.5 * (sigma * a) ** 2
    bracket = (
        math.gamma(0.5 * (n + 1)) * kummer_1f1(-0.5 * n, 0.5, -z)
        - math.sqrt(2.0) * sigma * a * math.gamma(0.5 * (n + 2)) * kummer_1f1(0.5 * (1 - n), 1.5, -z)
    )
    return 2.0 ** (0.5 * (n - 1)) * sigma ** (-n - 1) * bracket


def _moment_tricomi(n: int, a: float, sigma: float) -> float:
    z = 0.5 * (sigma * a) ** 2
    log_pref = log_gamma(n + 1.0) - (n + 1) * math.log(sigma) - 0.5 * (n + 1) * math.log(2.0) - z
    return math.exp(log_pref) * tricomi_u(0.5 * (n + 1), 0.5, z)


def gaussian_moment(n: int, a: float, sigma: float) -> float:
    """J_n(a) = int_0^inf x^n exp(-sigma^2 (a + x)^2 / 2) dx for a >= 0."""
    if n < 0 or a < 0.0:
        raise ValueError("need n >= 0 and a >= 0")
    if n == 0:
        return math.sqrt(0.5 * math.pi) / sigma * erfc(sigma * a / math.sqrt(2.0))
    if 0.5 * (sigma * a) ** 2 <= _KUMMER_MAX_Z:
        return _moment_kummer(n, a, sigma)
    return _moment_tricomi(n, a, sigma)


def _moment_sum(setup: DetectorSetup, gamma: float, centre: float) -> float:
    # sum_n C_n J_n(centre), C_n the coefficients of prod (gamma x + k)
    coeffs = prod_poly_coeffs(setup.d, gamma).coeffs
    return math.fsum(c * gaussian_moment(n, centre, setup.sigma) for n, c in enumerate(coeffs))


def q_closed(setup: DetectorSetup) -> ClosedFormResult:
    """q_c = 2 gamma alpha sum_{n <= d-2} C_n J_n(Omega + Omega_d)."""
    geom = derive_geometry(setup)
    s = _moment_sum(setup, geom.gamma, setup.omega + geom.omega_d)
    return ClosedFormResult(2.0 * geom.gamma * geom.alpha * s, setup.d, Kind.Q_C)


def beta_closed(setup: DetectorSetup) -> ClosedFormResult:
    """beta_c = -gamma alpha e^{-sigma^2 Omega^2 / 2} sum C_n J_n(Omega_d)."""
    geom = derive_geometry(setup)
    s = _moment_sum(setup, geom.gamma, geom.omega_d)
    damp = math.exp(-0.5 * (setup.sigma * setup.omega) ** 2)
    return ClosedFormResult(-geom.gamma * geom.alpha * damp * s, setup.d, Kind.BETA_C)


# ---------------------------------------------------------------------------
# Hand-simplified rows for d = 2, 3, 4
# ---------------------------------------------------------------------------

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _table_args(d: int, setup: DetectorSetup):
    if d not in (2, 3, 4):
        raise ValueError(f"tables exist only for d in {{2, 3, 4}}, got {d!r}")
    if setup.d != d:
        raise ValueError(f"setup has d={setup.d}, table row requested for d={d}")
    geom = derive_geometry(setup)
    return geom.gamma, setup.sigma, setup.lam, setup.omega


def q_table(d: int, setup: DetectorSetup) -> ClosedFormResult:
    g, s, lam, om = _table_args(d, setup)
    if d == 2:
        v = 0.125 * math.sqrt(0.5 * math.pi) * lam**2 * s * erfc(s * (1 + 2 * g * om) / (2 * _SQRT2 * g))
    elif d == 3:
        v = lam**2 / (16 * math.pi) * (
            2 * math.exp(-((s + g * s * om) ** 2) / (2 * g**2))
            - _SQRT2PI * s * om * erfc(s * (1 + g * om) / (_SQRT2 * g))
        )
    else:
        v = lam**2 / (256 * math.pi * g**2 * s) * (
            4 * g * s * (3 - 2 * g * om) * math.exp(-(s**2) * (3 + 2 * g * om) ** 2 / (8 * g**2))
            + _SQRT2PI * (4 * g**2 * (1 + s**2 * om**2) - s**2) * erfc(s * (3 + 2 * g * om) / (2 * _SQRT2 * g))
        )
    return ClosedFormResult(v, d, Kind.TABLE_Q)


def beta_table(d: int, setup: DetectorSetup) -> ClosedFormResult:
    g, s, lam, om = _table_args(d, setup)
    if d == 2:
        v = -(1 / 16) * math.sqrt(0.5 * math.pi) * lam**2 * s * math.exp(-0.5 * s**2 * om**2) * erfc(
            s / (2 * _SQRT2 * g)
        )
    elif d == 3:
        v = -lam**2 / (16 * math.pi) * math.exp(-0.5 * s**2 * (1 / g**2 + om**2))
    else:
        v = lam**2 / (512 * math.pi * g**2 * s) * math.exp(-0.5 * s**2 * (9 / (4 * g**2) + om**2)) * (
            _SQRT2PI * math.exp(9 * s**2 / (8 * g**2)) * (s**2 - 4 * g**2) * erfc(3 * s / (2 * _SQRT2 * g))
            - 12 * g * s
        )
    return ClosedFormResult(v, d, Kind.TABLE_BETA)


# ---------------------------------------------------------------------------
# Euler-Maclaurin
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyGaussian:
    """scale * P(x) * exp(-sigma^2 (centre + x)^2 / 2), closed under d/dx."""

    poly: Polynomial
    centre: float
    sigma: float
    scale: float = 1.0

    def __call__(self, x):
        u = self.centre + np.asarray(x, dtype=float)
        out = self.scale * self.poly(np.asarray(x, dtype=float)) * np.exp(-0.5 * self.sigma**2 * u * u)
        return float(out) if np.ndim(x) == 0 else out

    def derivative(self, order: int = 1) -> "PolyGaussian":
        out = self
        s2 = self.sigma**2
        for _ in range(order):
            # (P' - sigma^2 (x + c) P) e^{...}
            moved = out.poly.shift_mul(s2, s2 * out.centre)
            out = PolyGaussian(out.poly.derivative() - moved, out.centre, out.sigma, out.scale)
        return out


def em_term_function(setup: DetectorSetup, kind: str = "q") -> PolyGaussian:
    """The summand f(x) of the Riemann sum for ``kind`` in {"q", "beta"}."""
    geom = derive_geometry(setup)
    poly = prod_poly_coeffs(setup.d, geom.gamma)
    if kind == "q":
        return PolyGaussian(poly, setup.omega + geom.omega_d, setup.sigma)
    if kind == "beta":
        return PolyGaussian(poly, geom.omega_d, setup.sigma, math.exp(-0.5 * (setup.sigma * setup.omega) ** 2))
    raise ValueError(f"kind must be 'q' or 'beta', got {kind!r}")


def _support_end(f: PolyGaussian, d: int) -> float:
    # beyond this x the Gaussian has fallen below e^-80 of its peak, which
    # swamps the polynomial growth for every d in range
    return max((13.0 + math.sqrt(d)) / f.sigma - f.centre, 1.0)


def _kind_base(setup: DetectorSetup, kind: str):
    geom = derive_geometry(setup)
    if kind == "q":
        return geom, q_closed(setup), 2.0 * geom.alpha
    if kind == "beta":
        return geom, beta_closed(setup), -geom.alpha
    raise ValueError(f"kind must be 'q' or 'beta', got {kind!r}")


def _boundary(f: PolyGaussian, gamma: float, numbers) -> float:
    out = 0.5 * f(0.0)
    for k, b2k in enumerate(numbers, start=1):
        order = 2 * k - 1
        out -= b2k / math.factorial(2 * k) * gamma ** (-order) * f.derivative(order)(0.0)
    return out


def em_boundary_correction(setup: DetectorSetup, m: int = 2, kind: str = "q") -> float:
    """Only the Euler-Maclaurin boundary terms at n = 0, without any remainder work."""
    numbers, _ = bernoulli_data(m)
    geom, _, norm = _kind_base(setup, kind)
    return norm * _boundary(em_term_function(setup, kind), geom.gamma, numbers)


def euler_maclaurin_correct(setup: DetectorSetup, m: int = 2, kind: str = "q") -> ClosedFormResult:
    """Closed form plus the Euler-Maclaurin boundary terms at n = 0.

    sum_{n>=0} g(n) = int_0^inf g + g(0)/2 - sum_{k<=m} B_2k/(2k)! g^(2k-1)(0) + R_m,
    R_m = -1/(2m)! int_0^inf B_2m({n}) g^(2m)(n) dn,  g(n) = f(n / gamma).

    Terms at the upper end vanish with the Gaussian.  ``em_residual_bound``
    is the a-priori |B_2m| / (2m)! int |g^(2m)|, using
    max |B_2m({x})| = |B_2m|.  That ignores the sign changes of B_2m and
    is loose by orders of magnitude at gamma ~ 1, so R_m is also integrated
    directly: ``em_remainder`` is its value and ``em_remainder_bound`` is
    |R_m| plus the quadrature error estimate and a rounding allowance, an
    enclosure of the true remainder.  Both are None when the sum spans too many unit cells.
    """
    numbers, bpoly = bernoulli_data(m)
    geom, base, norm = _kind_base(setup, kind)
    gamma = geom.gamma
    f = em_term_function(setup, kind)
    correction = norm * _boundary(f, gamma, numbers)

    f2m = f.derivative(2 * m)
    x_end = _support_end(f, setup.d)
    fact = math.factorial(2 * m)
    abs_int = integrate(lambda x: np.abs(f2m(x)), 0.0, x_end, rel_tol=1e-10, min_panels=32).value
    # int |g^(2m)(n)| dn = gamma^(1-2m) int |f^(2m)(x)| dx
    bound = abs(norm) * abs(numbers[-1]) / fact * gamma ** (1 - 2 * m) * float(abs_int)

    remainder = remainder_bound = None
    cells = math.ceil(x_end * gamma)
    if cells <= _MAX_REMAINDER_CELLS:
        scale = gamma ** (-2 * m)

        def h(n):
            return bpoly(n - np.floor(n)) * scale * f2m(n / gamma)

        # unit panels keep the kinks of B_2m({n}) on panel edges
        # the integrand oscillates with the cells, so its relative size is
        # judged against int |g^(2m)| rather than against the result
        floor = 1e-13 * gamma ** (1 - 2 * m) * float(abs_int)
        r = integrate(h, 0.0, float(cells), rel_tol=1e-10, abs_tol=floor, min_panels=cells,
                      max_panels=max(10_000, 8 * cells))
        remainder = -norm / fact * float(r.value)
        # plus a rounding allowance for evaluating the closed form itself
        remainder_bound = abs(remainder) + abs(norm) / fact * r.abs_error + 1e-13 * abs(base.value)

    kind_tag = Kind.Q_C if kind == "q" else Kind.BETA_C
    return ClosedFormResult(
        base.value + correction, setup.d, kind_tag, correction, bound, remainder, remainder_bound
    )
