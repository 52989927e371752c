import math

import numpy as np
import pytest

from adsmana.quadrature import QuadratureError, integrate


@pytest.mark.parametrize(
    "f, a, b, exact",
    [
        (lambda x: np.exp(-x), 0.0, 40.0, 1.0 - math.exp(-40.0)),
        (lambda x: 1.0 / (1.0 + x) ** 2, 0.0, 1e3, 1.0 - 1.0 / 1001.0),
        (lambda x: np.cos(50.0 * x), 0.0, 1.0, math.sin(50.0) / 50.0),
        (lambda x: np.sqrt(np.abs(x)), -1.0, 1.0, 4.0 / 3.0),
    ],
)
def test_known_integrals(f, a, b, exact):
    res = integrate(f, a, b, rel_tol=1e-12, breakpoints=(0.0,))
    assert abs(res.value - exact) <= max(1e-11 * abs(exact), 3 * res.abs_error)
    assert res.abs_error <= 1e-10


def test_complex_integrand():
    res = integrate(lambda x: np.exp(1j * x), 0.0, math.pi)
    assert abs(res.value - 2j) < 1e-13


def test_panel_cap():
    with pytest.raises(QuadratureError):
        integrate(lambda x: 1.0 / np.abs(x - 0.3), 0.0, 1.0, max_panels=50)


def test_bad_interval():
    with pytest.raises(ValueError):
        integrate(np.sin, 1.0, 1.0)
