"""Double-precision special functions used by the detector formulas.

Everything here is written from scratch on top of :mod:`math`; no
arbitrary-precision arithmetic is used at run time.  Accuracy targets
(relative error, on the stated domains) are:

==================  ==========  ==============================================
function            rel. error  domain
==================  ==========  ==============================================
``log_gamma``       1e-13       x in [1e-3, 1e6]
``erfc``            1e-13       |x| <= 26
``erfi_scaled``     1e-12       x >= 0
``kummer_1f1``      1e-10       |z| <= 50, |a| <= 30, b in {1/2, 3/2}, on the
                                sign-stable branch (see ``kummer_1f1``)
``tricomi_u``       1e-9        a in [1, 6], b = 3/2, z in (0, 50]
``upper_inc_gamma`` 1e-11       s in [-5, 5], z > 0
==================  ==========  ==============================================

The data file ``data/goldens.tsv`` holds reference values computed once at
50 digits; the test-suite compares against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quadrature import integrate

EULER_GAMMA = 0.57721566490153286060651209008240243
SQRT_PI = math.sqrt(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class AccuracyReport:
    function_name: str
    max_rel_error: float
    domain_tested: str


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, ``coeffs[k]`` multiplies ``x**k``."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = [float(v) for v in self.coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0.0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return Polynomial(tuple(x - y for x, y in zip(a, b)))

    def shift_mul(self, slope: float, offset: float) -> "Polynomial":
        """Return ``(slope*x + offset) * self``."""
        c = self.coeffs
        out = [offset * c[0]] + [offset * c[k] + slope * c[k - 1] for k in range(1, len(c))]
        out.append(slope * c[-1])
        return Polynomial(tuple(out))


# ---------------------------------------------------------------------------
# Gamma function
# ---------------------------------------------------------------------------

def _zeta_minus_one(k: int, n_direct: int = 64) -> float:
    # sum_{n>=2} n^-k: direct part plus Euler-Maclaurin tail from n_direct
    N = float(n_direct)
    tail = (
        N ** (1 - k) / (k - 1)
        + 0.5 * N ** -k
        + k * N ** (-k - 1) / 12.0
        - k * (k + 1) * (k + 2) * N ** (-k - 3) / 720.0
        + k * (k + 1) * (k + 2) * (k + 3) * (k + 4) * N ** (-k - 5) / 30240.0
    )
    head = math.fsum(float(n) ** -k for n in range(n_direct - 1, 1, -1))
    return head + tail


_ZETA_M1 = [0.0, 0.0] + [_zeta_minus_one(k) for k in range(2, 48)]

# B_{2k} / (2k (2k-1)) for the Stirling series
_STIRLING = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
]


def _lgamma_2p(s: float) -> float:
    """ln Gamma(2 + s) for |s| <= 1/2."""
    total = 0.0
    power = -s
    for k in range(2, len(_ZETA_M1)):
        power *= -s
        term = _ZETA_M1[k] * power / k
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
    return s * (1.0 - EULER_GAMMA) + total


def _lgamma_stirling(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    p = inv
    for c in _STIRLING:
        corr += c * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + corr


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Power series around 1 and 2 (so ln Gamma(1) and ln Gamma(2) are exactly
    zero), downward recurrence on (2.5, 10) and the Stirling series above.
    """
    if not x > 0.0:
        raise ValueError(f"log_gamma is defined here only for x > 0, got {x!r}")
    if math.isinf(x):
        return math.inf
    if x < 0.5:
        return _lgamma_2p(x) - math.log1p(x) - math.log(x)
    if x <= 1.5:
        s = x - 1.0
        return _lgamma_2p(s) - math.log1p(s)
    if x <= 2.5:
        return _lgamma_2p(x - 2.0)
    if x < 10.0:
        prod = 1.0
        while x > 2.5:
            x -= 1.0
            prod *= x
        return _lgamma_2p(x - 2.0) + math.log(prod)
    return _lgamma_stirling(x)


def gamma_fn(x: float) -> float:
    """Signed Gamma(x) for real x that is not a non-positive integer."""
    if x > 0.0:
        return math.exp(log_gamma(x))
    if x == math.floor(x):
        raise ValueError(f"Gamma has a pole at {x!r}")
    k = math.ceil(-x) + 1
    denom = 1.0
    for j in range(k):
        denom *= x + j
    return math.exp(log_gamma(x + k)) / denom


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return 1.0 / gamma_fn(x)


def gamma_ratio_log(d: int, n: int) -> float:
    """ln[Gamma(d+n-1) / Gamma(n+1)], the log of the mode weight.

    The ratio is the rising product (n+1)(n+2)...(n+d-2); for moderate ``d``
    the logs of the factors are summed directly, otherwise the log-gamma
    difference is used.
    """
    d, n = int(d), int(n)
    if d < 2 or n < 0:
        raise ValueError("need integer d >= 2 and n >= 0")
    if d - 2 <= 64:
        return math.fsum(math.log(n + k) for k in range(1, d - 1))
    return log_gamma(d + n - 1) - log_gamma(n + 1)


def gamma_ratio_log_array(d: int, n: np.ndarray) -> np.ndarray:
    """Vectorised :func:`gamma_ratio_log` over an integer array ``n``."""
    n = np.asarray(n, dtype=float)
    if d - 2 <= 64:
        out = np.zeros_like(n)
        for k in range(1, d - 1):
            out += np.log(n + k)
        return out
    return np.array([gamma_ratio_log(d, int(m)) for m in n])


# ---------------------------------------------------------------------------
# Error functions
# ---------------------------------------------------------------------------

def _exp_minus_square(x: float) -> float:
    # exp(-x*x) without the rounding error of forming x*x
    hi = math.floor(x * 65536.0) / 65536.0
    lo = x - hi
    return math.exp(-hi * hi) * math.exp(-lo * (x + hi))


def _erf_small(x: float) -> float:
    # erf(x) = 2/sqrt(pi) e^{-x^2} sum 2^k x^{2k+1} / (2k+1)!!   (positive terms)
    term = x
    total = x
    x2 = 2.0 * x * x
    k = 0
    while True:
        k += 1
        term *= x2 / (2 * k + 1)
        total += term
        if term <= 1e-17 * total:
            break
    return 2.0 / SQRT_PI * _exp_minus_square(x) * total


def _erfc_cf(x: float) -> float:
    # sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    tiny = 1e-300
    f = x
    C = f
    D = 0.0
    for j in range(1, 5000):
        a = 0.5 * j
        D = x + a * D
        D = tiny if D == 0.0 else D
        C = x + a / C
        C = tiny if C == 0.0 else C
        D = 1.0 / D
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < 5e-17:
            break
    return _exp_minus_square(x) / (SQRT_PI * f)


def erfc(x: float) -> float:
    """Complementary error function."""
    if math.isnan(x):
        return math.nan
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x < 0.8:
        return 1.0 - _erf_small(x)
    if x > 27.3:
        return 0.0
    return _erfc_cf(x)


def erfi_scaled(x: float) -> float:
    """``exp(-x**2) * erfi(x)``, i.e. 2/sqrt(pi) times Dawson's integral.

    Stays finite for all x >= 0; callers that need erfi itself multiply by
    ``exp(x**2)`` only where that cannot overflow.
    """
    if not x >= 0.0:
        raise ValueError(f"erfi_scaled requires x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if x <= 6.0:
        # erfi(x) = 2/sqrt(pi) sum x^{2k+1} / (k! (2k+1))
        x2 = x * x
        power = x
        total = x
        k = 0
        while True:
            k += 1
            power *= x2 / k
            term = power / (2 * k + 1)
            total += term
            if term < 1e-17 * total:
                break
        return 2.0 / SQRT_PI * _exp_minus_square(x) * total
    # asymptotic: 1/(sqrt(pi) x) * sum (2k-1)!! / (2x^2)^k
    inv = 1.0 / (2.0 * x * x)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        new = term * (2 * k - 1) * inv
        if new > term or new < 1e-17 * total:
            break
        term = new
        total += term
    return total / (SQRT_PI * x)


# ---------------------------------------------------------------------------
# Confluent hypergeometric functions
# ---------------------------------------------------------------------------

def _is_nonpositive_int(v: float) -> bool:
    return v <= 0.0 and v == math.floor(v)


def _hyp1f1_series(a: float, b: float, z: float) -> float:
    terms = [1.0]
    t = 1.0
    running = 1.0
    k = 0
    # the sign of (a)_k settles once k > -a
    settled = max(0.0, -a)
    while True:
        t *= (a + k) * z / ((b + k) * (k + 1))
        k += 1
        if t == 0.0:
            break
        terms.append(t)
        running += t
        shrinking = abs((a + k) * z) < abs((b + k) * (k + 1))
        if k > settled and shrinking and abs(t) < 1e-17 * abs(running):
            break
        if k > 100_000:
            raise ArithmeticError("1F1 series did not converge")
    return math.fsum(terms)


def kummer_1f1(a: float, b: float, z: float) -> float:
    """Kummer's function M(a, b, z) = 1F1(a; b; z).

    Branches, chosen so that the series tail never alternates:

    * a a non-positive integer: terminating polynomial;
    * b - a a non-positive integer: Kummer transform, exp(z) times a
      terminating polynomial;
    * z >= 0: direct Taylor series;
    * z < 0: Kummer transform exp(z) M(b - a, b, -z).

    Early terms can still cancel when ``a`` (resp. ``b - a``) is negative;
    the accuracy contract is stated for the sign-stable cases.
    """
    if _is_nonpositive_int(b):
        raise ValueError(f"1F1 undefined for non-positive integer b={b!r}")
    if z == 0.0:
        return 1.0
    if _is_nonpositive_int(a):
        return _hyp1f1_series(a, b, z)
    if _is_nonpositive_int(b - a):
        return math.exp(z) * _hyp1f1_series(b - a, b, -z)
    if z > 0.0:
        return _hyp1f1_series(a, b, z)
    return math.exp(z) * _hyp1f1_series(b - a, b, -z)


_U_CONNECTION_MAX_Z = 0.5


def _tricomi_connection(a: float, b: float, z: float) -> float:
    first = gamma_fn(1.0 - b) * rgamma(a - b + 1.0) * kummer_1f1(a, b, z)
    second = gamma_fn(b - 1.0) * rgamma(a) * z ** (1.0 - b) * kummer_1f1(a - b + 1.0, 2.0 - b, z)
    return first + second


def _tricomi_integral(a: float, b: float, z: float) -> float:
    # U = z^-a / Gamma(a) * 2 int_0^inf exp(-v^2) v^(2a-1) (1 + v^2/z)^(b-a-1) dv
    power = 2.0 * a - 1.0
    expo = b - a - 1.0

    def f(v):
        return np.exp(-v * v) * v ** power * (1.0 + v * v / z) ** expo

    upper = math.sqrt(max(a, 1.0)) + 8.0
    res = integrate(f, 0.0, upper, rel_tol=1e-15, min_panels=8)
    return 2.0 * float(res.value) * math.exp(-a * math.log(z) - log_gamma(a))


def tricomi_u(a: float, b: float, z: float) -> float:
    """Tricomi's confluent hypergeometric function U(a, b, z), z > 0.

    Small z (and a <= 0) uses the two-term connection formula in Kummer
    functions.  For larger z that formula cancels catastrophically, so the
    Laplace-type integral (valid for a > 0) is used instead.
    """
    if not z > 0.0:
        raise ValueError(f"tricomi_u requires z > 0, got {z!r}")
    if b == math.floor(b):
        raise ValueError("integer b is not supported")
    if z <= _U_CONNECTION_MAX_Z or a <= 0.0:
        return _tricomi_connection(a, b, z)
    return _tricomi_integral(a, b, z)


# ---------------------------------------------------------------------------
# Incomplete gamma
# ---------------------------------------------------------------------------

def _upper_gamma_cf(s: float, z: float) -> float:
    tiny = 1e-300
    b = z + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-z + s * math.log(z)) * h


def _lower_gamma_series(s: float, z: float) -> float:
    # gamma(s, z) = z^s e^-z sum z^k / (s (s+1) ... (s+k)),  s > 0
    term = 1.0 / s
    total = term
    k = 0
    while True:
        k += 1
        term *= z / (s + k)
        total += term
        if term < 1e-17 * total:
            break
    return math.exp(-z + s * math.log(z)) * total


def _alt_tail(s: float, z: float) -> float:
    # sum_{k>=1} (-z)^k / (k! (s + k))
    terms = []
    p = 1.0
    k = 0
    while True:
        k += 1
        p *= -z / k
        t = p / (s + k)
        terms.append(t)
        if abs(p) < 1e-18:
            break
    return math.fsum(terms)


def _upper_gamma_small_z(s: float, z: float) -> float:
    # z < 1.5 and -1 < s < 1
    logz = math.log(z)
    if s == 0.0:
        return -EULER_GAMMA - logz - _alt_tail(0.0, z)
    head = (math.expm1(log_gamma(1.0 + s)) - math.expm1(s * logz)) / s
    return head - math.exp(s * logz) * _alt_tail(s, z)


def upper_inc_gamma(s: float, z: float) -> float:
    """Upper incomplete gamma function Gamma(s, z) for real s and z > 0."""
    if not z > 0.0:
        raise ValueError(f"upper_inc_gamma requires z > 0, got {z!r}")
    if z >= 1.5 and z >= s + 1.0:
        return _upper_gamma_cf(s, z)
    if s >= 1.0 or (s > 0.0 and z >= 1.5):
        return math.exp(log_gamma(s)) - _lower_gamma_series(s, z)
    if s > -1.0:
        return _upper_gamma_small_z(s, z)
    # downward recurrence Gamma(s, z) = (Gamma(s+1, z) - z^s e^-z) / s
    steps = math.ceil(-s) if s != math.floor(s) else int(-s)
    base = s + steps
    if base >= 1.0:
        base -= 1.0
        steps -= 1
    value = _upper_gamma_small_z(base, z)
    cur = base
    for _ in range(steps):
        cur -= 1.0
        value = (value - math.exp(cur * math.log(z) - z)) / cur
    return value


# ---------------------------------------------------------------------------
# Polynomial helpers
# ---------------------------------------------------------------------------

def prod_poly_coeffs(d: int, gamma: float) -> Polynomial:
    """Coefficients of prod_{k=1}^{d-2} (gamma*x + k) in increasing powers."""
    if int(d) < 2:
        raise ValueError("d must be >= 2")
    poly = Polynomial((1.0,))
    for k in range(1, int(d) - 1):
        poly = poly.shift_mul(gamma, float(k))
    return poly


_BERNOULLI_NUMBERS = {1: (1.0 / 6.0,), 2: (1.0 / 6.0, -1.0 / 30.0)}
_BERNOULLI_POLYS = {
    1: Polynomial((1.0 / 6.0, -1.0, 1.0)),
    2: Polynomial((-1.0 / 30.0, 0.0, 1.0, -2.0, 1.0)),
}


def bernoulli_data(m: int) -> tuple[tuple[float, ...], Polynomial]:
    """Return ``((B_2, ..., B_2m), B_2m(x))`` for m in {1, 2}."""
    if m not in _BERNOULLI_POLYS:
        raise ValueError(f"unsupported Euler-Maclaurin order m={m!r}; use 1 or 2")
    return _BERNOULLI_NUMBERS[m], _BERNOULLI_POLYS[m]


def relative_error(value: float, reference: float, floor: float = 0.0) -> float:
    scale = max(abs(reference), floor)
    if scale == 0.0:
        return abs(value)
    return abs(value - reference) / scale


def accuracy_report(name: str, points: Sequence[tuple[tuple[float, ...], float]], domain: str) -> AccuracyReport:
    """Compare ``name`` against golden ``(args, value)`` pairs."""
    fn = FUNCTIONS[name]
    worst = max(relative_error(fn(*args), ref) for args, ref in points)
    return AccuracyReport(name, worst, domain)


FUNCTIONS = {
    "log_gamma": log_gamma,
    "erfc": erfc,
    "erfi_scaled": erfi_scaled,
    "kummer_1f1": kummer_1f1,
    "tricomi_u": tricomi_u,
    "upper_inc_gamma": upper_inc_gamma,
}

TOLERANCES = {
    "log_gamma": 1e-13,
    "erfc": 1e-13,
    "erfi_scaled": 1e-12,
    "kummer_1f1": 1e-10,
    "tricomi_u": 1e-9,
    "upper_inc_gamma": 1e-11,
}
