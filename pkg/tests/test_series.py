import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adsmana.background import DetectorSetup
from adsmana.series import (
    Method,
    beta_series_raw,
    beta_series_raw_terms,
    beta_series_renormalized,
    beta_series_with_regulator,
    delta_discriminant,
    delta_series,
    minkowski_beta,
    minkowski_q,
    minkowski_q_d3_erfc,
    q_series,
    q_series_with_regulator,
)


def _setup(args):
    d, ell, R, sigma, lam, omega = args[:6]
    return DetectorSetup(int(d), ell, R, sigma, lam, omega)


def test_goldens(goldens):
    for args, ref in goldens["q_series"]:
        assert math.isclose(q_series(_setup(args)).value, ref, rel_tol=1e-13)
    for args, ref in goldens["beta_series_renormalized"]:
        assert math.isclose(beta_series_renormalized(_setup(args)).value, ref, rel_tol=1e-13)
    for args, ref in goldens["q_series_with_regulator"]:
        assert math.isclose(q_series_with_regulator(_setup(args), args[6]).value, ref, rel_tol=1e-13)
    for args, ref in goldens["minkowski_q"]:
        assert math.isclose(minkowski_q(int(args[0]), *args[1:]), ref, rel_tol=1e-12)


def test_delta_matches_goldens(goldens):
    q = dict(goldens["q_series"])
    b = dict(goldens["beta_series_renormalized"])
    for args in q.keys() & b.keys():
        expect = -(q[args] + 2 * b[args])
        assert math.isclose(delta_series(_setup(args)).value, expect, rel_tol=1e-12)


def test_trivial_cases(standard):
    assert q_series(standard.with_(lam=0.0)).value == 0.0
    assert beta_series_renormalized(standard.with_(lam=0.0)).value == 0.0
    far = q_series(standard.with_(omega=100.0))
    assert far.value == 0.0 and far.log_value < -5000
    with pytest.raises(ValueError):
        q_series_with_regulator(standard, 0.0)
    with pytest.raises(ValueError):
        beta_series_with_regulator(standard, -1.0)


def test_result_metadata(standard):
    r = q_series(standard)
    assert r.method is Method.SERIES and r.epsilon == 0.0
    assert r.terms_used >= standard.d + 2
    assert 0.0 <= r.tail_bound <= 1e-14 * r.value
    r = q_series_with_regulator(standard, 1e-2)
    assert r.method is Method.SERIES_WITH_REGULATOR and r.epsilon == 1e-2


def test_regulator(standard):
    q = q_series(standard).value
    assert q_series_with_regulator(standard, 50.0).value < q
    assert abs(q_series_with_regulator(standard, 1e-6).value - q) / q <= 1e-5
    vals = [q_series_with_regulator(standard, e).value for e in (1e-1, 1e-2, 1e-3)]
    assert vals[0] < vals[1] < vals[2] < q


def test_large_gamma_does_not_stop_early():
    # at gamma = 1e4 the ratio only falls below 1/2 after ~1e4 terms
    s = DetectorSetup(3, 1e4, 0.1)
    r = q_series(s)
    assert r.terms_used > 1000 and not r.capped


def test_monotone_in_omega():
    s = DetectorSetup(4, 0.8, 0.3)
    om = np.linspace(0.05, 10.0, 60)
    q = [q_series(s.with_(omega=w)).value for w in om]
    b = [abs(beta_series_renormalized(s.with_(omega=w)).value) for w in om]
    nonzero = [v for v in q if v > 0]
    assert all(x > y for x, y in zip(nonzero, nonzero[1:]))
    assert all(x > y for x, y in zip(b, b[1:]) if y > 0)


@pytest.mark.filterwarnings("ignore:q = .*perturbative:RuntimeWarning")
def test_positivity_and_consistency():
    rng = np.random.default_rng(4)
    for _ in range(300):
        s = DetectorSetup(int(rng.integers(2, 11)), float(10 ** rng.uniform(-1, 2)),
                          float(rng.uniform(0, 1)), 1.0, 1.0, float(rng.uniform(1e-3, 10)))
        q = q_series(s)
        b = beta_series_renormalized(s)
        d = delta_series(s)
        assert q.value >= 0 and b.value <= 0 and d.log_value > -math.inf
        if q.value > 0:
            assert q.log_value > -math.inf
        direct = -(q.value + 2 * b.value)
        # the subtraction is only trustworthy when it does not cancel
        if d.value > 1e-3 * (q.value - 2 * b.value) > 0:
            assert math.isclose(d.value, direct, rel_tol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), st.floats(0.2, 20.0), st.floats(0.01, 5.0), st.floats(0.01, 3.0))
def test_coupling_scaling(d, ell, omega, lam):
    s = DetectorSetup(d, ell, 0.1, 1.0, lam, omega)
    t = s.with_(lam=2 * lam)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for fn in (q_series, beta_series_renormalized, delta_series):
            a, b = fn(s).value, fn(t).value
            if a != 0.0:
                assert math.isclose(b, 4 * a, rel_tol=1e-14)


def test_linear_small_omega(standard):
    a = delta_series(standard.with_(omega=1e-8)).value
    b = delta_series(standard.with_(omega=2e-8)).value
    assert math.isclose(b / a, 2.0, rel_tol=1e-6)


def test_discriminant():
    assert delta_discriminant(0.1, -0.05) == 0.0
    assert math.isclose(delta_discriminant(0.1, -0.08), 0.06, rel_tol=1e-14)
    assert math.isclose(delta_discriminant(0.1, -0.02), -0.06, rel_tol=1e-14)
    with pytest.raises(ValueError):
        delta_discriminant(0.0, -0.1)
    with pytest.raises(ValueError):
        delta_discriminant(0.1, 0.01)


def test_raw_beta(standard):
    terms = beta_series_raw_terms(standard, 0)
    first = beta_series_renormalized(standard, tol=1e300)
    assert terms.shape == (1,)
    assert terms[0].real < 0
    converged = beta_series_raw(standard, 400)
    assert math.isclose(converged.real, beta_series_renormalized(standard).value, rel_tol=1e-13)
    assert first.terms_used >= 1
    # the imaginary terms level off at d = 3, so the partial sums grow linearly
    t = beta_series_raw_terms(standard, 400)
    assert math.isclose(abs(t[200].imag), abs(t[400].imag), rel_tol=0.02)
    s100, s200 = beta_series_raw(standard, 100).imag, beta_series_raw(standard, 200).imag
    assert 1.8 < s200 / s100 < 2.1
    # and grow with n beyond d = 3
    t4 = beta_series_raw_terms(standard.with_(d=4), 200)
    assert abs(t4[200].imag) > abs(t4[100].imag)


def test_minkowski_forms():
    for sig in (0.5, 1.0, 2.0):
        for w in (1e-3, 0.4, 1.0, 4.0):
            assert math.isclose(minkowski_q(3, sig, 0.7, w), minkowski_q_d3_erfc(sig, 0.7, w), rel_tol=1e-10)
            assert math.isclose(minkowski_beta(3, sig, 0.7, w),
                                -0.49 / (16 * math.pi) * math.exp(-0.5 * (sig * w) ** 2), rel_tol=1e-14)
    assert minkowski_q(3, 1.0, 1.0, 20.0) <= 1e-80
    assert minkowski_beta(4, 1.0, 0.0, 1.0) == 0.0
    # d = 2 at Omega -> 0: -2^(-9/2) sqrt(pi) Gamma(1/2) / Gamma(1) / sqrt(pi)
    assert math.isclose(minkowski_beta(2, 1.0, 1.0, 1e-300), -math.sqrt(math.pi) / 2**4.5, rel_tol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_minkowski_limit(d):
    s = DetectorSetup(d, 1e4, 0.1)
    assert math.isclose(q_series(s).value, minkowski_q(d, 1.0, 1.0, 1.0), rel_tol=1e-3)
    assert math.isclose(beta_series_renormalized(s).value, minkowski_beta(d, 1.0, 1.0, 1.0), rel_tol=1e-3)


def test_nonperturbative_warning():
    with pytest.warns(RuntimeWarning, match="perturbative"):
        q_series(DetectorSetup(3, 1.0, 0.1, 1.0, 10.0, 0.1))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        q_series(DetectorSetup(3, 1.0))
