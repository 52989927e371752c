import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adsmana.background import DetectorSetup
from adsmana.mana import build_state, mana, mana_at, mana_curve, mana_with_delta, verdict
from adsmana.series import beta_series_renormalized, q_series


def test_state():
    st0 = build_state(0.0, 0.0)
    assert np.allclose(st0.matrix, np.diag([1.0, 0.0, 0.0]))
    s = build_state(0.1, -0.03)
    assert np.allclose(np.diag(s.matrix).real, [0.9, 0.1, 0.0])
    assert s.matrix[2, 0] == -0.03 and s.matrix[0, 2] == -0.03
    assert abs(np.trace(s.matrix) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        build_state(1.5, 0.0)


def test_mana_values():
    assert mana(0.0, 0.0) == 0.0
    assert abs(mana(0.1, -0.02)) <= 1e-15
    assert math.isclose(mana(0.1, -0.08), math.log(1.04), rel_tol=1e-14)


def test_verdict():
    v = verdict(0.1, -0.05)
    assert v.delta == 0.0 and not v.harvestable and v.mana_delta == 0.0
    v = verdict(0.1, -0.08)
    assert v.harvestable and math.isclose(v.mana_delta, math.log(1.04), rel_tol=1e-14)
    with pytest.raises(ValueError):
        verdict(0.0, -0.1)
    deltas = np.linspace(1e-6, 0.5, 50)
    m = [verdict(0.5, -(0.5 + d) / 2).mana_delta for d in deltas]
    assert all(a < b for a, b in zip(m, m[1:]))


@pytest.mark.filterwarnings("ignore:q = .*perturbative:RuntimeWarning")
def test_series_pairs_are_harvestable():
    rng = np.random.default_rng(11)
    for _ in range(50):
        s = DetectorSetup(int(rng.integers(2, 8)), float(10 ** rng.uniform(-0.5, 1.5)), 0.1, 1.0, 1.0,
                          float(rng.uniform(0.05, 3.0)))
        assert verdict(q_series(s).value, beta_series_renormalized(s).value).harvestable


@given(st.floats(0.0, 1.0), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_imag_symmetry_and_sign(q, br, bi):
    a = mana(q, complex(br, bi))
    assert a == mana(q, complex(br, -bi))
    assert a >= 0.0


def test_mana_with_delta(standard):
    # tiny Delta from its own series keeps full relative accuracy
    assert mana_with_delta(0.1, -0.08, 0.06) == math.log1p(0.04)
    m = mana_at(standard.with_(omega=1e-7))
    m2 = mana_at(standard.with_(omega=2e-7))
    assert math.isclose(m2 / m, 2.0, rel_tol=1e-5)


def test_curve_validation(standard):
    with pytest.raises(ValueError):
        mana_curve(standard, [1.0])
    with pytest.raises(ValueError):
        mana_curve(standard, [1.0, 0.5])


def test_curve_orderings():
    grid = np.linspace(0.05, 6.0, 120)
    c05 = mana_curve(DetectorSetup(3, 0.5, 0.1), grid)
    c1 = mana_curve(DetectorSetup(3, 1.0, 0.1), grid)
    assert c05.argmax < c1.argmax and c05.max_value < c1.max_value
    curves = [mana_curve(DetectorSetup(d, 1.0, 0.1), grid) for d in (3, 4, 5)]
    assert curves[0].max_value > curves[1].max_value > curves[2].max_value
    assert curves[0].argmax > curves[1].argmax > curves[2].argmax
    # refinement only ever improves on the grid maximum
    assert c1.max_value >= max(c1.values)
