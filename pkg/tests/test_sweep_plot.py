import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adsmana.background import DetectorSetup
from adsmana.plot import PlotError, plot_csv
from adsmana.sweep import (
    CSV_HEADER,
    SweepRow,
    SweepSpec,
    evaluate,
    format_rows,
    parse_rows,
    peaks,
    run_sweep,
    write_csv,
)

finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=100)
@given(st.lists(st.builds(
    SweepRow, st.integers(2, 10), st.one_of(finite, st.just(math.inf)), finite, finite, finite, finite,
    finite, finite, finite, finite, finite, st.sampled_from(["series", "closed", "quad"]), finite,
    st.integers(0, 10**6), finite, st.sampled_from(["", "term_cap", "nonconverged"]),
), max_size=5))
def test_csv_round_trip(rows):
    assert parse_rows(format_rows(rows)) == rows


def test_header():
    assert ",".join(CSV_HEADER) == "d,ell,R,sigma,lambda,omega,gamma,q,beta,delta,mana,method,epsilon,n_terms,trunc_err,flag"
    with pytest.raises(ValueError):
        parse_rows("a,b\n1,2\n")


def test_spec_validation():
    for bad in (dict(omega_min=0.0), dict(omega_steps=1), dict(d_list=()), dict(d_list=(1,)),
                dict(method="quad"), dict(method="magic")):
        with pytest.raises(ValueError):
            SweepSpec(**bad)


def test_sweep_order_and_determinism(tmp_path):
    spec = SweepSpec(omega_steps=5, ell_list=(1.0, 0.5, math.inf), d_list=(4, 3))
    rows = run_sweep(spec)
    keys = [(r.d, r.ell, r.omega) for r in rows]
    assert keys == sorted(keys) and len(rows) == 30
    assert run_sweep(spec, jobs=2) == rows
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(rows, a)
    write_csv(run_sweep(spec), b)
    assert a.read_bytes() == b.read_bytes()
    assert "inf" in a.read_text().splitlines()[-1].split(",")[1]


def test_methods_agree(standard):
    series = evaluate(standard, "series", 1e-2).row
    quad = evaluate(standard, "quad", 1e-2).row
    for key in ("q", "beta", "delta", "mana"):
        assert math.isclose(getattr(series, key), getattr(quad, key), rel_tol=1e-8)
    closed = evaluate(standard.with_(ell=1e3), "closed").row
    exact = evaluate(standard.with_(ell=1e3), "series").row
    assert math.isclose(closed.q, exact.q, rel_tol=1e-5)
    assert closed.trunc_err >= abs(closed.q - exact.q) * 0.5
    with pytest.raises(ValueError):
        evaluate(standard, "quad")
    with pytest.raises(ValueError):
        evaluate(DetectorSetup(3, math.inf), "quad", 1e-2)


def test_minkowski_row():
    row = evaluate(DetectorSetup(3, math.inf)).row
    assert row.method == "minkowski_closed" and row.gamma == math.inf and row.delta > 0


def test_plot(tmp_path):
    spec = SweepSpec(omega_steps=20, ell_list=(0.2, 0.5, 1.0, 5.0))
    csv_path = tmp_path / "fig1.csv"
    write_csv(run_sweep(spec), csv_path)
    out = tmp_path / "fig1.svg"
    assert plot_csv(csv_path, out, group_by="ell") == 4
    svg = out.read_text()
    assert svg.startswith("<svg") and 'viewBox="0 0 800 600"' in svg
    assert svg.count("<polyline") == 4 and "ell = 5.0" in svg
    again = tmp_path / "again.svg"
    plot_csv(csv_path, again, group_by="ell")
    assert again.read_bytes() == out.read_bytes()
    assert plot_csv(csv_path, out, group_by=None) == 1
    with pytest.raises(PlotError):
        plot_csv(csv_path, out, y="nope")


def test_plot_degenerate(tmp_path):
    rows = run_sweep(SweepSpec(omega_steps=2))
    one = tmp_path / "one.csv"
    write_csv(rows[:1], one)
    with pytest.raises(PlotError):
        plot_csv(one, tmp_path / "x.svg")


def test_peaks():
    rows = run_sweep(SweepSpec(omega_steps=40, d_list=(3, 4, 5, 6)))
    p = peaks(rows, "d")
    mx = [p[d][1] for d in (3, 4, 5, 6)]
    assert mx == sorted(mx, reverse=True)
