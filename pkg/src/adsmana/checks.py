"""The numbered acceptance checks, grouped into suites.

Each check returns a ``CheckResult``; ``passed`` requires both the numerical
condition and the stated time budget.  The CLI ``verify`` command and the
acceptance tests run exactly these functions.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Callable

import numpy as np

from . import specfn
from .background import DetectorSetup, geodesic_interval, geodesic_interval_embedding
from .closedform import beta_closed, beta_table, euler_maclaurin_correct, q_closed, q_table
from .mana import mana, mana_at, mana_curve
from .oracle import quad_beta, quad_q
from .series import (
    beta_series_renormalized,
    beta_series_with_regulator,
    delta_series,
    minkowski_beta,
    minkowski_q,
    minkowski_q_d3_erfc,
    q_series,
    q_series_with_regulator,
)

FIGURE_GRID = np.linspace(0.05, 6.0, 120)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion={self.number} name={self.name} seconds={self.seconds:.3f} budget={self.budget:g} {self.detail}"


def load_goldens() -> dict[str, list[tuple[tuple[float, ...], float]]]:
    """Golden values shipped with the package, keyed by function name."""
    text = resources.files("adsmana").joinpath("data/goldens.tsv").read_text(encoding="utf-8")
    out: dict[str, list[tuple[tuple[float, ...], float]]] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        name, args, value = line.split("\t")
        out.setdefault(name, []).append((tuple(float(a) for a in args.split(",")), float(value)))
    return out


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# the twelve criteria; each returns (ok, detail)
# ---------------------------------------------------------------------------

def _c1():
    worst = 0.0
    for d in (2, 3, 4, 5):
        s = DetectorSetup(d, 1.0, 0.1, 1.0, 1.0, 1.0)
        for eps in (1e-1, 1e-2, 1e-3):
            for quad, ser in ((quad_q, q_series_with_regulator), (quad_beta, beta_series_with_regulator)):
                a, b = quad(s, eps).value, ser(s, eps).value
                worst = max(worst, abs(a - b) / max(1e-10, 1e-8 * abs(b)))
    return worst <= 1.0, f"worst_diff_over_tolerance={worst:.3e}"


def _c2():
    worst = 0.0
    for d in (2, 3, 4):
        s = DetectorSetup(d, 1e4, 0.1, 1.0, 1.0, 1.0)
        worst = max(
            worst,
            _rel(q_series(s).value, minkowski_q(d, 1.0, 1.0, 1.0)),
            _rel(beta_series_renormalized(s).value, minkowski_beta(d, 1.0, 1.0, 1.0)),
        )
    forms = max(
        _rel(minkowski_q(3, sig, lam, w), minkowski_q_d3_erfc(sig, lam, w))
        for sig in (0.5, 1.0, 2.0) for lam in (0.3, 1.0) for w in (0.01, 0.5, 1.0, 3.0, 6.0)
    )
    return worst <= 1e-3 and forms <= 1e-10, f"series_vs_flat={worst:.3e} u_vs_erfc={forms:.3e}"


def _c3():
    gaps_q, gaps_b = [], []
    for ell in (1.0, 10.0, 100.0, 1000.0):
        s = DetectorSetup(3, ell, 0.1, 1.0, 1.0, 1.0)
        gaps_q.append(_rel(q_closed(s).value, q_series(s).value))
        gaps_b.append(_rel(beta_closed(s).value, beta_series_renormalized(s).value))

    def ok(g):
        return all(a > b for a, b in zip(g, g[1:])) and g[2] <= 1e-4

    fmt = lambda g: ",".join(f"{v:.4e}" for v in g)  # noqa: E731
    return ok(gaps_q) and ok(gaps_b), f"q_gaps={fmt(gaps_q)} beta_gaps={fmt(gaps_b)}"


def _c4():
    s = DetectorSetup(3, 1.0, 0.1, 1.0, 1.0, 1.0)
    ref = q_series(s).value
    r = euler_maclaurin_correct(s, 2, "q")
    bound = r.em_remainder_bound / ref
    gap = abs(r.value - ref) / ref
    ok = 1e-8 <= bound <= 1e-4 and gap <= bound
    return ok, f"bound={bound:.3e} gap={gap:.3e} a_priori_bound={r.em_residual_bound / ref:.3e}"


def _c5():
    rng = np.random.default_rng(20240505)
    worst = 0.0
    for _ in range(100):
        ell, R, sig, lam, w = (
            rng.uniform(0.5, 10.0), rng.uniform(0.0, 1.0), rng.uniform(0.5, 2.0),
            rng.uniform(0.1, 2.0), rng.uniform(0.05, 3.0),
        )
        for d in (2, 3, 4):
            s = DetectorSetup(d, ell, R, sig, lam, w)
            worst = max(worst, _rel(q_table(d, s).value, q_closed(s).value),
                        _rel(beta_table(d, s).value, beta_closed(s).value))
    return worst <= 1e-12, f"worst_rel={worst:.3e}"


def _c6():
    rng = np.random.default_rng(6)
    smallest = math.inf
    failures = underflow = 0
    for _ in range(1000):
        d = int(rng.integers(2, 11))
        # log-uniform radius so that small and large AdS are both sampled
        ell = float(10.0 ** rng.uniform(-1.0, 2.0))
        R = float(rng.uniform(0.0, 1.0))
        w = float(10.0 - rng.uniform(0.0, 10.0))  # (0, 10]
        r = delta_series(DetectorSetup(d, ell, R, 1.0, 1.0, w))
        if not (r.log_value > -math.inf and r.value >= 0.0):
            failures += 1
        underflow += r.value == 0.0
        smallest = min(smallest, r.log_value)
    return failures == 0, f"failures={failures} min_log_delta={smallest:.1f} underflowed_to_zero={underflow}"


def _c7():
    worst = 0.0
    for q in np.linspace(1e-4, 0.1, 100):
        for b in np.linspace(-0.1, 0.0, 100):
            q, b = float(q), float(b)
            delta = -(q + 2.0 * b)
            expect = math.log(1.0 - 2.0 * q / 3.0 - 4.0 * b / 3.0) if delta > 0.0 else 0.0
            worst = max(worst, abs(mana(q, b) - expect))
    return worst <= 1e-14, f"worst_abs={worst:.3e}"


def _peaks(setups):
    curves = [mana_curve(s, FIGURE_GRID) for s in setups]
    return [c.max_value for c in curves], [c.argmax for c in curves]


def _increasing(v):
    return all(a < b for a, b in zip(v, v[1:]))


def _c8():
    mx, am = _peaks([DetectorSetup(3, ell, 0.1) for ell in (0.2, 0.5, 1.0, 5.0)])
    ok = _increasing(mx) and _increasing(am) and mx[0] < 0.1 * mx[2]
    return ok, "max=" + ",".join(f"{v:.4e}" for v in mx) + " argmax=" + ",".join(f"{v:.4f}" for v in am)


def _c9():
    mx, am = _peaks([DetectorSetup(d, 1.0, 0.1) for d in (3, 4, 5, 6)])
    ok = _increasing(mx[::-1]) and _increasing(am[::-1])
    return ok, "max=" + ",".join(f"{v:.4e}" for v in mx) + " argmax=" + ",".join(f"{v:.4f}" for v in am)


def _c10():
    s = DetectorSetup(3, 1.0, 0.1, 1.0, 1.0, 1.0)
    ratio = mana_at(s.with_(omega=2e-6)) / mana_at(s.with_(omega=1e-6))
    om = np.linspace(4.0, 6.0, 41)
    logs = np.log([mana_at(s.with_(omega=float(w))) for w in om])
    lead = float(np.polyfit(om, logs, 2)[0])
    target = -0.5 * s.sigma**2
    ok = abs(ratio - 2.0) <= 0.1 and abs(lead - target) <= 0.1 * abs(target)
    return ok, f"ratio={ratio:.6f} quadratic_coefficient={lead:.4f}"


def _c11():
    goldens = load_goldens()
    parts, ok = [], True
    for name, fn in specfn.FUNCTIONS.items():
        pts = goldens.get(name, [])
        worst = max((specfn.relative_error(fn(*a), v) if v != 0.0 else abs(fn(*a)) for a, v in pts),
                    default=math.inf)
        ok &= len(pts) >= 20 and worst <= specfn.TOLERANCES[name]
        parts.append(f"{name}:{len(pts)}pts,{worst:.1e}")
    return ok, " ".join(parts)


def _c12():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 7))
        s = DetectorSetup(d, float(rng.uniform(0.5, 10.0)), float(rng.uniform(0.0, 2.0)))
        g = math.hypot(s.ell, s.R)
        # the embedding route subtracts nearly equal sines, so its relative
        # error grows like 1e-16 / |dtau / gamma|; keep the separation away
        # from coincidence (and below the first zero at dtau = 2 pi gamma)
        t1 = float(rng.uniform(-5.0, 5.0))
        t2 = t1 + g * float(rng.choice((-1.0, 1.0)) * rng.uniform(1e-2, math.pi))
        angles = tuple(float(a) for a in rng.uniform(0.0, math.pi, d - 1))
        worst = max(worst, _rel(geodesic_interval_embedding(s, t1, t2, angles), geodesic_interval(s, t1, t2)))
    return worst <= 1e-12, f"worst_rel={worst:.3e}"


CHECKS: dict[int, tuple[str, float, Callable[[], tuple[bool, str]]]] = {
    1: ("regulator_matched_identity", 10.0, _c1),
    2: ("minkowski_limit", 1.0, _c2),
    3: ("closed_form_convergence", 1.0, _c3),
    4: ("euler_maclaurin_residual", 1.0, _c4),
    5: ("table_identities", 1.0, _c5),
    6: ("positivity", 30.0, _c6),
    7: ("mana_identity", 1.0, _c7),
    8: ("figure1_phenomenology", 10.0, _c8),
    9: ("figure2_phenomenology", 10.0, _c9),
    10: ("asymptotics", 5.0, _c10),
    11: ("specfn_goldens", 1.0, _c11),
    12: ("geometry_consistency", 1.0, _c12),
}

SUITES = {
    "specfn": (11,),
    "identity": (1, 5, 7, 12),
    "limits": (2, 3, 4, 10),
    "figures": (6, 8, 9),
}
SUITES["all"] = tuple(sorted(n for nums in SUITES.values() for n in nums))


def run_check(number: int) -> CheckResult:
    name, budget, fn = CHECKS[number]
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed run
            ok, detail = False, f"error={type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - t0
    within = seconds <= budget
    if not within:
        detail += " over_time_budget"
    return CheckResult(number, name, ok and within, detail, seconds, budget)


def run_suite(suite: str) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return [run_check(n) for n in SUITES[suite]]
