import math

import pytest

from adsmana.background import DetectorSetup
from adsmana.oracle import quad_beta, quad_q, richardson_extrapolate
from adsmana.series import beta_series_with_regulator, q_series, q_series_with_regulator


def _close(a, b):
    return abs(a - b) <= max(1e-10, 1e-8 * abs(b))


def test_trivial(standard):
    assert quad_q(standard.with_(lam=0.0), 1e-2).value == 0.0
    assert quad_beta(standard.with_(lam=0.0), 1e-2).value == 0.0
    with pytest.raises(ValueError):
        quad_q(standard, 0.0)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_regulator_matched(d, eps):
    s = DetectorSetup(d, 1.0, 0.1)
    q = quad_q(s, eps)
    b = quad_beta(s, eps)
    assert _close(q.value, q_series_with_regulator(s, eps).value)
    assert _close(b.value, beta_series_with_regulator(s, eps).value)
    assert abs(q.imag_part) <= 10 * q.abs_error_estimate + 1e-13 * abs(q.value)


def test_other_parameters():
    s = DetectorSetup(4, 0.3, 0.7, 1.5, 0.4, 2.2)
    for eps in (0.05, 0.005):
        assert _close(quad_q(s, eps).value, q_series_with_regulator(s, eps).value)
        assert _close(quad_beta(s, eps).value, beta_series_with_regulator(s, eps).value)


def test_real_line_contour(standard):
    # no contour shift: harder integrand, same answer at moderate eps
    q = quad_q(standard, 0.1, contour_shift=0.0)
    assert _close(q.value, q_series_with_regulator(standard, 0.1).value)


def test_monotone_in_eps(standard):
    vals = [quad_q(standard, e).value for e in (0.08, 0.04, 0.02, 0.01)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_richardson():
    r = richardson_extrapolate([(0.04, 3.0), (0.02, 3.0), (0.01, 3.0)])
    assert r.limit_value == pytest.approx(3.0, abs=1e-15)
    r = richardson_extrapolate([(0.04, 1.04), (0.02, 1.02), (0.01, 1.01)])
    assert abs(r.limit_value - 1.0) <= 1e-12
    with pytest.raises(ValueError):
        richardson_extrapolate([(0.01, 1.0), (0.02, 1.0), (0.04, 1.0)])
    with pytest.raises(ValueError):
        richardson_extrapolate([(0.02, 1.0), (0.01, 1.0)])


def test_extrapolated_quadrature(standard):
    pairs = [(e, quad_q(standard, e).value) for e in (4e-3, 2e-3, 1e-3)]
    r = richardson_extrapolate(pairs)
    assert math.isclose(r.limit_value, q_series(standard).value, rel_tol=1e-6)
    assert r.discrepancy < 1e-5 * r.limit_value
