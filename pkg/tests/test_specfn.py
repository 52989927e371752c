import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adsmana import specfn as S


@pytest.mark.parametrize("name", sorted(S.FUNCTIONS))
def test_goldens(goldens, name):
    points = goldens[name]
    assert len(points) >= 20
    fn = S.FUNCTIONS[name]
    for args, ref in points:
        assert S.relative_error(fn(*args), ref) <= S.TOLERANCES[name], (name, args)


def test_log_gamma_values():
    assert S.log_gamma(1.0) == 0.0
    assert S.log_gamma(2.0) == 0.0
    assert math.isclose(S.log_gamma(0.5), math.log(math.sqrt(math.pi)), rel_tol=1e-15)
    with pytest.raises(ValueError):
        S.log_gamma(0.0)


def test_log_gamma_recurrence():
    rng = np.random.default_rng(1)
    for x in rng.uniform(0.1, 100.0, 1000):
        assert abs(S.log_gamma(x + 1) - S.log_gamma(x) - math.log(x)) <= 1e-12


def test_gamma_ratio_log():
    assert S.gamma_ratio_log(2, 5) == 0.0
    assert S.gamma_ratio_log(3, 0) == 0.0
    assert math.isclose(S.gamma_ratio_log(4, 3), math.log(20.0), rel_tol=1e-15)
    for d in range(2, 9):
        for n in range(51):
            exact = math.log(math.prod(n + k for k in range(1, d - 1)))
            got = S.gamma_ratio_log(d, n)
            assert abs(got - exact) <= 1e-12 * max(1.0, abs(exact))
    arr = S.gamma_ratio_log_array(5, np.arange(40))
    assert np.allclose(arr, [S.gamma_ratio_log(5, n) for n in range(40)], rtol=1e-14, atol=0)


def test_erfc_values():
    assert S.erfc(0.0) == 1.0
    assert S.erfc(30.0) == 0.0
    assert S.erfc(-30.0) == 2.0


@given(st.floats(-8.0, 8.0))
def test_erfc_reflection(x):
    assert abs(S.erfc(x) + S.erfc(-x) - 2.0) <= 1e-14


def test_erfi_scaled():
    assert S.erfi_scaled(0.0) == 0.0
    x = 100.0
    assert math.isclose(S.erfi_scaled(x), 1.0 / (math.sqrt(math.pi) * x), rel_tol=1e-4)
    with pytest.raises(ValueError):
        S.erfi_scaled(-1.0)


def test_kummer_values():
    assert S.kummer_1f1(0.7, 1.5, 0.0) == 1.0
    assert S.kummer_1f1(0.0, 0.5, 3.3) == 1.0
    assert math.isclose(S.kummer_1f1(-1.0, 0.5, -2.0), 5.0, rel_tol=1e-15)
    with pytest.raises(ValueError):
        S.kummer_1f1(1.0, -2.0, 1.0)


@settings(max_examples=200)
@given(st.floats(-3.0, 3.0), st.sampled_from([0.5, 1.5, 2.5]), st.floats(-20.0, 20.0))
def test_kummer_transformation(a, b, z):
    lhs = S.kummer_1f1(a, b, z)
    rhs = math.exp(z) * S.kummer_1f1(b - a, b, -z)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1e-300) or abs(lhs - rhs) <= 1e-12


def test_tricomi_values():
    # U(a, a, z) = e^z Gamma(1 - a, z)
    for z in (0.1, 0.7, 2.0, 9.0):
        u = S.tricomi_u(1.5, 1.5, z)
        assert math.isclose(u, math.exp(z) * S.upper_inc_gamma(-0.5, z), rel_tol=1e-10)
    # leading asymptotic z^-a, with its first correction a (a - b + 1) / z
    z = 40.0
    assert math.isclose(S.tricomi_u(2.0, 1.5, z), z**-2 * (1 - 2.0 * 1.5 / z), rel_tol=1e-2)
    assert math.isclose(S.tricomi_u(2.0, 1.5, 4000.0), 4000.0**-2, rel_tol=1e-2)
    with pytest.raises(ValueError):
        S.tricomi_u(2.0, 1.5, 0.0)


def test_upper_inc_gamma():
    for z in (1e-3, 0.5, 3.0, 40.0):
        assert math.isclose(S.upper_inc_gamma(1.0, z), math.exp(-z), rel_tol=1e-13)
    assert math.isclose(S.upper_inc_gamma(0.5, 1e-12), math.sqrt(math.pi), rel_tol=1e-5)


def test_prod_poly_coeffs():
    g = 1.7
    assert S.prod_poly_coeffs(2, g).coeffs == (1.0,)
    assert S.prod_poly_coeffs(3, g).coeffs == (1.0, g)
    assert np.allclose(S.prod_poly_coeffs(4, g).coeffs, (2.0, 3 * g, g * g), rtol=1e-15)
    rng = np.random.default_rng(2)
    for d in range(2, 9):
        p = S.prod_poly_coeffs(d, g)
        for x in rng.uniform(0.0, 10.0, 20):
            direct = math.prod(g * x + k for k in range(1, d - 1))
            assert math.isclose(p(x), direct, rel_tol=1e-13)


def test_bernoulli():
    nums, poly = S.bernoulli_data(1)
    assert nums == (1.0 / 6.0,)
    nums, poly = S.bernoulli_data(2)
    assert nums[-1] == -1.0 / 30.0
    assert poly(0.0) == -1.0 / 30.0
    assert max(abs(poly(x)) for x in np.linspace(0, 1, 101)) == pytest.approx(1.0 / 30.0)
    with pytest.raises(ValueError):
        S.bernoulli_data(3)
