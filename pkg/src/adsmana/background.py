"""Static detector in AdS_{d+1}: derived parameters, embedding and correlator.

Natural units (c = hbar = 1).  The Minkowski case is represented by
``ell = math.inf``; geometry-dependent routines refuse it and point to the
``minkowski_*`` functions in :mod:`adsmana.series`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .specfn import gamma_ratio_log_array, log_gamma

MINKOWSKI = math.inf


class MinkowskiSetupError(ValueError):
    """Raised when an AdS-only routine receives the Minkowski sentinel."""


@dataclass(frozen=True)
class DetectorSetup:
    """Physical inputs of one scenario.

    ``ell`` is the AdS radius, or ``math.inf`` for flat space.  ``omega`` is
    the common gap of the two transitions.
    """

    d: int
    ell: float
    R: float = 0.1
    sigma: float = 1.0
    lam: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        if not self.ell > 0.0:
            raise ValueError(f"ell must be positive (or inf for Minkowski), got {self.ell!r}")
        if not (self.R >= 0.0 and math.isfinite(self.R)):
            raise ValueError(f"R must be finite and >= 0, got {self.R!r}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma!r}")
        if not math.isfinite(self.lam):
            raise ValueError("coupling must be finite")
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be finite and > 0, got {self.omega!r}")

    @property
    def is_minkowski(self) -> bool:
        return math.isinf(self.ell)

    def with_(self, **changes) -> "DetectorSetup":
        return replace(self, **changes)


@dataclass(frozen=True)
class Geometry:
    """Derived quantities; ``log_alpha_unit`` is ln(alpha) at unit coupling,
    finite even when the coupling vanishes."""

    gamma: float
    alpha: float
    omega_d: float
    curvature: float
    log_alpha_unit: float


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    r: float
    angles: tuple[float, ...] = ()


@dataclass(frozen=True)
class EmbeddingPoint:
    z: tuple[float, ...]


def _require_ads(setup: DetectorSetup) -> None:
    if setup.is_minkowski:
        raise MinkowskiSetupError(
            "geometry is undefined for the Minkowski sentinel; use minkowski_q / minkowski_beta"
        )


def log_alpha_unit(d: int, sigma: float, gamma: float) -> float:
    """ln of alpha with the coupling set to 1."""
    return (
        2.0 * math.log(sigma)
        + math.log(math.pi)
        + (1 - d) * math.log(gamma)
        - math.log(4.0)
        - 0.5 * d * math.log(4.0 * math.pi)
        - log_gamma(0.5 * d)
    )


def derive_geometry(setup: DetectorSetup) -> Geometry:
    """gamma, alpha, Omega_d and the scalar curvature of one setup."""
    _require_ads(setup)
    d, ell = setup.d, setup.ell
    gamma = math.hypot(ell, setup.R)
    unit = log_alpha_unit(d, setup.sigma, gamma)
    return Geometry(
        gamma=gamma,
        alpha=setup.lam**2 * math.exp(unit),
        omega_d=(d - 1) / (2.0 * gamma),
        curvature=-d * (d + 1) / ell**2,
        log_alpha_unit=unit,
    )


def mode_frequency(geom: Geometry, d: int, n):
    """Omega_n = (2n + d - 1) / (2 gamma); ``n`` may be an array."""
    if np.any(np.asarray(n) < 0):
        raise ValueError("mode index must be >= 0")
    return (2 * n + d - 1) / (2.0 * geom.gamma)


# ---------------------------------------------------------------------------
# Embedding
# ---------------------------------------------------------------------------

def embed(setup: DetectorSetup, point: SpacetimePoint) -> EmbeddingPoint:
    """Global coordinates -> the d+2 embedding coordinates z^0 .. z^{d+1}."""
    _require_ads(setup)
    d, ell = setup.d, setup.ell
    angles = tuple(point.angles) + (0.0,) * (d - 1 - len(point.angles))
    if len(angles) != d - 1:
        raise ValueError(f"expected {d - 1} angles, got {len(point.angles)}")
    rho = math.hypot(ell, point.r)
    z = [rho * math.sin(point.t / ell)]
    # hyperspherical coordinates: z^k = r sin th_1 ... sin th_{k-1} cos th_k,
    # the last one ends with sin th_{d-1}
    running = point.r
    for th in angles:
        z.append(running * math.cos(th))
        running *= math.sin(th)
    z.append(running)
    z.append(rho * math.cos(point.t / ell))
    return EmbeddingPoint(tuple(z))


def hyperboloid_residual(setup: DetectorSetup, z: EmbeddingPoint) -> float:
    """Relative violation of (z^0)^2 - sum (z^i)^2 + (z^{d+1})^2 = ell^2."""
    c = z.z
    lhs = math.fsum([c[0] ** 2, c[-1] ** 2] + [-v * v for v in c[1:-1]])
    return abs(lhs - setup.ell**2) / setup.ell**2


def _interval_from_embedding(a: EmbeddingPoint, b: EmbeddingPoint) -> float:
    diff = [x - y for x, y in zip(a.z, b.z)]
    return math.fsum([-diff[0] ** 2, -diff[-1] ** 2] + [v * v for v in diff[1:-1]])


def trajectory_point(setup: DetectorSetup, tau: float, angles: Sequence[float] = ()) -> SpacetimePoint:
    gamma = math.hypot(setup.ell, setup.R)
    return SpacetimePoint(t=tau * setup.ell / gamma, r=setup.R, angles=tuple(angles))


def geodesic_interval(setup: DetectorSetup, tau: float, tau_prime: float) -> float:
    """Squared geodesic distance between two points of the static worldline.

    Closed form 2 gamma^2 (cos(dtau/gamma) - 1), written as
    -4 gamma^2 sin^2(dtau / 2 gamma) so that it stays accurate near
    coincidence.
    """
    _require_ads(setup)
    gamma = math.hypot(setup.ell, setup.R)
    half = math.sin((tau - tau_prime) / (2.0 * gamma))
    return -4.0 * gamma * gamma * half * half


def geodesic_interval_embedding(
    setup: DetectorSetup, tau: float, tau_prime: float, angles: Sequence[float] = ()
) -> float:
    """The same interval, from differences of embedding coordinates."""
    a = embed(setup, trajectory_point(setup, tau, angles))
    b = embed(setup, trajectory_point(setup, tau_prime, angles))
    return _interval_from_embedding(a, b)


# ---------------------------------------------------------------------------
# Wightman function on the worldline
# ---------------------------------------------------------------------------

def _log_wightman_prefactor(d: int, gamma: float) -> float:
    # 1 / ((4 pi)^{d/2} Gamma(d/2)) * gamma^{1-d}; Gamma(d-1) is kept apart
    return -0.5 * d * math.log(4.0 * math.pi) - log_gamma(0.5 * d) + (1 - d) * math.log(gamma)


def wightman_from_params(d: int, gamma: float, s, eps: float):
    """W(s) for dimension ``d`` and radius parameter ``gamma``; vectorised in s.

    ``s`` may be complex (contour-shifted quadrature uses s = x - ic).  The
    exponent 1 - d is a negative integer, so the power is single valued and
    needs no branch choice.
    """
    if not eps > 0.0:
        raise ValueError(f"regulator must be > 0, got {eps!r}")
    pref = math.exp(_log_wightman_prefactor(d, gamma) + log_gamma(d - 1))
    u = np.asarray(s) / (2.0 * gamma) - 1j * eps
    base = 2j * np.sin(u)
    return pref * base ** (1 - d)


def wightman(setup: DetectorSetup, s, eps: float):
    """Regularised pulled-back Wightman function W(s), s = tau - tau'."""
    _require_ads(setup)
    return wightman_from_params(setup.d, math.hypot(setup.ell, setup.R), s, eps)


def wightman_mode_expansion(setup: DetectorSetup, s: float, eps: float, n_max: int) -> complex:
    """Partial sum n = 0..n_max of the binomial expansion of W(s)."""
    _require_ads(setup)
    if not eps > 0.0:
        raise ValueError(f"regulator must be > 0, got {eps!r}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    d = setup.d
    gamma = math.hypot(setup.ell, setup.R)
    n = np.arange(n_max + 1)
    k = 2 * n + d - 1
    log_mag = gamma_ratio_log_array(d, n) - k * eps + _log_wightman_prefactor(d, gamma)
    phase = -k * (s / (2.0 * gamma))
    terms = np.exp(log_mag) * np.exp(1j * phase)
    # add small terms first
    return complex(np.sum(terms[::-1]))
