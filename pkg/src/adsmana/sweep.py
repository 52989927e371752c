"""Point evaluation by method, parameter sweeps, and the sweep CSV format."""

from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .background import DetectorSetup, derive_geometry
from .closedform import beta_closed, em_boundary_correction, q_closed
from .mana import mana_with_delta
from .oracle import quad_beta, quad_q
from .quadrature import QuadratureError
from .series import (
    DEFAULT_TOL,
    beta_series_renormalized,
    beta_series_with_regulator,
    delta_series,
    minkowski_beta,
    minkowski_q,
    q_series,
    q_series_with_regulator,
)

METHODS = ("series", "closed", "quad")

CSV_HEADER = (
    "d", "ell", "R", "sigma", "lambda", "omega", "gamma", "q", "beta", "delta",
    "mana", "method", "epsilon", "n_terms", "trunc_err", "flag",
)


class NonConvergenceError(ArithmeticError):
    """A point could not be evaluated to the requested accuracy."""


@dataclass(frozen=True)
class SweepRow:
    d: int
    ell: float
    R: float
    sigma: float
    lam: float
    omega: float
    gamma: float
    q: float
    beta: float
    delta: float
    mana: float
    method: str
    epsilon: float
    n_terms: int
    trunc_err: float
    flag: str = ""


@dataclass(frozen=True)
class PointResult:
    row: SweepRow
    alpha: float


def evaluate(setup: DetectorSetup, method: str = "series", eps: float | None = None,
             tol: float = DEFAULT_TOL) -> PointResult:
    """q, beta, Delta and M at one point by the chosen method.

    ``series``: exact mode sums (regulated when ``eps`` is given);
    ``closed``: large-gamma closed forms, with the Euler-Maclaurin boundary
    correction for q reported as the truncation error;
    ``quad``: the quadrature oracle, which needs ``eps``.
    Minkowski setups always use the flat-space closed forms.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if eps is not None and not eps > 0.0:
        raise ValueError("eps must be > 0 when given")
    base = dict(d=setup.d, ell=setup.ell, R=setup.R, sigma=setup.sigma, lam=setup.lam, omega=setup.omega)

    if setup.is_minkowski:
        if method == "quad":
            raise ValueError("the quadrature oracle needs a finite AdS radius")
        q = minkowski_q(setup.d, setup.sigma, setup.lam, setup.omega)
        beta = minkowski_beta(setup.d, setup.sigma, setup.lam, setup.omega)
        delta = -(q + 2.0 * beta)
        row = SweepRow(**base, gamma=math.inf, q=q, beta=beta, delta=delta,
                       mana=mana_with_delta(q, beta, delta), method="minkowski_closed",
                       epsilon=0.0, n_terms=1, trunc_err=0.0)
        return PointResult(row, math.nan)

    geom = derive_geometry(setup)
    flag = ""
    if method == "series":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            if eps is None:
                qr, br = q_series(setup, tol), beta_series_renormalized(setup, tol)
                dr = delta_series(setup, tol)
            else:
                qr, br = q_series_with_regulator(setup, eps, tol), beta_series_with_regulator(setup, eps, tol)
                dr = delta_series(setup, tol, eps)
        q, beta, delta = qr.value, br.value, dr.value
        n_terms = max(qr.terms_used, br.terms_used, dr.terms_used)
        trunc = qr.tail_bound + 2.0 * br.tail_bound
        if qr.capped or br.capped or dr.capped:
            flag = "term_cap"
        label = "series" if eps is None else "series_with_regulator"
    elif method == "closed":
        q, beta = q_closed(setup).value, beta_closed(setup).value
        delta = -(q + 2.0 * beta)
        n_terms = setup.d - 1
        trunc = abs(em_boundary_correction(setup, 2, "q"))
        label = "closed"
    else:
        if eps is None:
            raise ValueError("method 'quad' needs a regulator eps > 0")
        try:
            qq, qb = quad_q(setup, eps), quad_beta(setup, eps)
        except (QuadratureError, ArithmeticError) as exc:
            raise NonConvergenceError(str(exc)) from exc
        q, beta = qq.value, qb.value
        delta = -(q + 2.0 * beta)
        n_terms = qq.subdivisions + qb.subdivisions
        trunc = qq.abs_error_estimate + 2.0 * qb.abs_error_estimate
        label = "quad"

    row = SweepRow(**base, gamma=geom.gamma, q=q, beta=beta, delta=delta,
                   mana=mana_with_delta(q, beta, delta), method=label,
                   epsilon=0.0 if eps is None else float(eps), n_terms=int(n_terms),
                   trunc_err=float(trunc), flag=flag)
    return PointResult(row, geom.alpha)


@dataclass(frozen=True)
class SweepSpec:
    omega_min: float = 0.05
    omega_max: float = 6.0
    omega_steps: int = 120
    ell_list: tuple[float, ...] = (1.0,)
    d_list: tuple[int, ...] = (3,)
    R: float = 0.1
    sigma: float = 1.0
    lam: float = 1.0
    method: str = "series"
    epsilon: float | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.omega_min > 0.0:
            raise ValueError("omega_min must be > 0")
        if not self.omega_max > self.omega_min:
            raise ValueError("omega_max must exceed omega_min")
        if self.omega_steps < 2:
            raise ValueError("omega_steps must be >= 2")
        if not self.d_list:
            raise ValueError("d_list is empty")
        if not self.ell_list:
            raise ValueError("ell_list is empty")
        if any(int(d) != d or d < 2 for d in self.d_list):
            raise ValueError("every d must be an integer >= 2")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "quad" and self.epsilon is None:
            raise ValueError("method 'quad' needs eps")
        if self.method == "quad" and any(math.isinf(e) for e in self.ell_list):
            raise ValueError("method 'quad' cannot evaluate the Minkowski sentinel")

    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.omega_steps)

    def setups(self) -> list[DetectorSetup]:
        # lexicographic (d, ell, omega) order
        return [
            DetectorSetup(int(d), float(ell), self.R, self.sigma, self.lam, float(w))
            for d in sorted(self.d_list)
            for ell in sorted(self.ell_list)
            for w in self.omegas()
        ]


def _row_or_flag(args) -> SweepRow:
    setup, method, eps, tol = args
    try:
        return evaluate(setup, method, eps, tol).row
    except NonConvergenceError:
        nan = math.nan
        gamma = math.hypot(setup.ell, setup.R)
        return SweepRow(setup.d, setup.ell, setup.R, setup.sigma, setup.lam, setup.omega, gamma,
                        nan, nan, nan, nan, method, eps or 0.0, 0, nan, "nonconverged")


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order for any ``jobs``."""
    work = [(s, spec.method, spec.epsilon, spec.tol) for s in spec.setups()]
    if jobs <= 1:
        return [_row_or_flag(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_row_or_flag, work, chunksize=max(1, len(work) // (4 * jobs))))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    # repr gives the shortest string that round-trips; inf and nan stay readable
    return repr(float(value))


def format_rows(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(v) for v in astuple(row)])
    return buf.getvalue()


def write_csv(rows: Iterable[SweepRow], path: str | Path) -> None:
    Path(path).write_text(format_rows(rows), encoding="utf-8")


def parse_rows(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError("not a sweep CSV: header mismatch")
    kinds = [f.type for f in fields(SweepRow)]
    out = []
    for rec in reader:
        vals = []
        for raw, kind in zip(rec, kinds):
            if kind in ("int", int):
                vals.append(int(raw))
            elif kind in ("str", str):
                vals.append(raw)
            else:
                vals.append(float(raw))
        out.append(SweepRow(*vals))
    return out


def read_csv(path: str | Path) -> list[SweepRow]:
    return parse_rows(Path(path).read_text(encoding="utf-8"))


def read_table(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Header and raw string records of any CSV (for plotting)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)


def peaks(rows: Sequence[SweepRow], group: str) -> dict[float, tuple[float, float]]:
    """Grid (argmax, max) of M per value of ``group`` ("ell" or "d")."""
    out: dict[float, tuple[float, float]] = {}
    for row in rows:
        key = getattr(row, group)
        best = out.get(key)
        if best is None or row.mana > best[1]:
            out[key] = (row.omega, row.mana)
    return out
