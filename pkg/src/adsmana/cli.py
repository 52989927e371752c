"""Command-line front end: ``adsmana eval | sweep | verify | plot``.

Any flag can also come from a flat ``key = value`` config file given with
``--config``; an explicit flag beats the file, and the file beats the
built-in default.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

from .background import DetectorSetup
from .checks import SUITES, run_suite
from .plot import PlotError, plot_csv
from .series import DEFAULT_TOL
from .sweep import METHODS, NonConvergenceError, SweepSpec, evaluate, run_sweep, write_csv

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3

DEFAULTS = {
    "R": 0.1,
    "sigma": 1.0,
    "lambda": 1.0,
    "method": "series",
    "eps": None,
    "tol": DEFAULT_TOL,
    "omega_min": 0.05,
    "omega_max": 6.0,
    "omega_steps": 120,
    "jobs": 1,
    "suite": "all",
    "x": "omega",
    "y": "mana",
    "group_by": "ell",
}


class UsageError(ValueError):
    pass


def _length(text: str) -> float:
    t = str(text).strip().lower()
    if t in ("minkowski", "inf", "infinity"):
        return math.inf
    return float(t)


def _list(conv):
    def parse(text):
        items = [p for p in str(text).replace(" ", "").split(",") if p]
        return tuple(conv(p) for p in items)
    return parse


def _int(text: str) -> int:
    v = float(text)
    if v != int(v):
        raise ValueError(f"not an integer: {text!r}")
    return int(v)


# converters shared by flags and the config file
CONVERTERS = {
    "d": _int, "ell": _length, "R": float, "sigma": float, "lambda": float, "omega": float,
    "method": str, "eps": float, "tol": float, "omega_min": float, "omega_max": float,
    "omega_steps": _int, "jobs": _int, "suite": str, "out": str, "input": str,
    "x": str, "y": str, "group_by": str, "d_list": _list(_int), "ell_list": _list(_length),
}


def read_config(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _resolve(args: argparse.Namespace, keys: Sequence[str], aliases: dict[str, str] | None = None) -> dict:
    """Merge flag > config > default for ``keys``."""
    path = getattr(args, "config", None)
    config = read_config(path) if path else {}
    aliases = aliases or {}
    merged = {}
    for key in keys:
        dest = key if key != "lambda" else "lam"
        value = getattr(args, dest, None)
        if value is None:
            raw = config.get(key)
            if raw is None and key in aliases:
                raw = config.get(aliases[key])
            if raw is not None:
                try:
                    value = CONVERTERS[key](raw)
                except ValueError as exc:
                    raise UsageError(f"config key {key!r}: {exc}") from exc
            else:
                value = DEFAULTS.get(key)
        merged[key] = value
    return merged


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    p = _resolve(args, ["d", "ell", "R", "sigma", "lambda", "omega", "method", "eps", "tol"])
    missing = [k for k in ("d", "ell", "omega") if p[k] is None]
    if missing:
        raise UsageError("missing required value(s): " + ", ".join("--" + k for k in missing))
    setup = DetectorSetup(p["d"], p["ell"], p["R"], p["sigma"], p["lambda"], p["omega"])
    res = evaluate(setup, p["method"], p["eps"], p["tol"])
    row = res.row
    report = [
        ("q", row.q), ("beta", row.beta), ("delta", row.delta), ("mana", row.mana),
        ("harvestable", row.delta > 0.0), ("gamma", row.gamma), ("alpha", res.alpha),
        ("method", row.method), ("epsilon", row.epsilon), ("n_terms", row.n_terms),
        ("trunc_err", row.trunc_err),
    ]
    if row.flag:
        report.append(("flag", row.flag))
    for key, value in report:
        print(f"{key} = {_fmt(value)}")
    if row.flag:
        print(f"error: not converged ({row.flag}); trunc_err = {row.trunc_err!r}", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_sweep(args) -> int:
    p = _resolve(
        args,
        ["d_list", "ell_list", "R", "sigma", "lambda", "method", "eps", "tol",
         "omega_min", "omega_max", "omega_steps", "jobs", "out"],
        aliases={"d_list": "d", "ell_list": "ell"},
    )
    if p["d_list"] is None or p["ell_list"] is None:
        raise UsageError("sweep needs --d and --ell lists")
    if p["out"] is None:
        raise UsageError("sweep needs --out")
    spec = SweepSpec(
        omega_min=p["omega_min"], omega_max=p["omega_max"], omega_steps=p["omega_steps"],
        ell_list=tuple(p["ell_list"]), d_list=tuple(p["d_list"]), R=p["R"], sigma=p["sigma"],
        lam=p["lambda"], method=p["method"], epsilon=p["eps"], tol=p["tol"],
    )
    rows = run_sweep(spec, jobs=p["jobs"])
    write_csv(rows, p["out"])
    flagged = sum(1 for r in rows if r.flag)
    print(f"wrote {len(rows)} rows to {p['out']}" + (f" ({flagged} flagged)" if flagged else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _resolve(args, ["suite"])
    if p["suite"] not in SUITES:
        raise UsageError(f"unknown suite {p['suite']!r}; choose from {', '.join(SUITES)}")
    results = run_suite(p["suite"])
    for r in results:
        print(r.line(), flush=True)
    failed = [r.number for r in results if not r.passed]
    print(f"summary suite={p['suite']} passed={len(results) - len(failed)} failed={len(failed)}")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_plot(args) -> int:
    p = _resolve(args, ["input", "out", "x", "y", "group_by"], aliases={"input": "in"})
    if p["input"] is None or p["out"] is None:
        raise UsageError("plot needs --in and --out")
    group = None if str(p["group_by"]).lower() in ("", "none") else p["group_by"]
    n = plot_csv(p["input"], p["out"], p["x"], p["y"], group)
    print(f"wrote {p['out']} with {n} series")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # every value flag defaults to None so the config file can fill it in
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the flag sit before or after the subcommand
    common.add_argument("--config", default=argparse.SUPPRESS, help="flat 'key = value' file supplying any flag")

    parser = argparse.ArgumentParser(
        prog="adsmana", parents=[common],
        description="Magic (mana) harvested by a qutrit detector from a scalar field in AdS or flat space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def physics(sp, listy: bool):
        if listy:
            sp.add_argument("--d", dest="d_list", type=_list(_int), help="comma-separated dimensions, e.g. 3,4,5")
            sp.add_argument("--ell", dest="ell_list", type=_list(_length),
                            help="comma-separated AdS radii; 'minkowski' or 'inf' for flat space")
        else:
            sp.add_argument("--d", type=_int, help="spatial dimension d >= 2 (spacetime is d+1)")
            sp.add_argument("--ell", type=_length, help="AdS radius, or 'minkowski'")
            sp.add_argument("--omega", type=float, help="energy gap")
        sp.add_argument("--R", type=float, help=f"detector radius (default {DEFAULTS['R']})")
        sp.add_argument("--sigma", type=float, help="switching width (default 1)")
        sp.add_argument("--lambda", dest="lam", type=float, help="coupling (default 1)")
        sp.add_argument("--method", choices=METHODS, help="series (default), closed or quad")
        sp.add_argument("--eps", type=float, help="finite regulator; required for quad")
        sp.add_argument("--tol", type=float, help=f"relative series tolerance (default {DEFAULT_TOL:g})")

    ev = sub.add_parser("eval", parents=[common], help="evaluate one parameter point")
    physics(ev, listy=False)
    ev.set_defaults(func=cmd_eval)

    sw = sub.add_parser("sweep", parents=[common], help="sweep Omega over a (d, ell) grid into a CSV")
    physics(sw, listy=True)
    sw.add_argument("--omega-min", type=float, help="default 0.05")
    sw.add_argument("--omega-max", type=float, help="default 6")
    sw.add_argument("--omega-steps", type=_int, help="default 120")
    sw.add_argument("--jobs", type=_int, help="worker processes (default 1)")
    sw.add_argument("--out", help="output CSV path")
    sw.set_defaults(func=cmd_sweep)

    ve = sub.add_parser("verify", parents=[common], help="run acceptance checks")
    ve.add_argument("--suite", help="one of: " + ", ".join(SUITES))
    ve.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plot", parents=[common], help="draw an SVG line chart from a sweep CSV")
    pl.add_argument("--in", dest="input", help="sweep CSV")
    pl.add_argument("--out", help="output SVG path")
    pl.add_argument("--x", help="x column (default omega)")
    pl.add_argument("--y", help="y column (default mana)")
    pl.add_argument("--group-by", help="column giving one line per value (default ell; 'none' for a single line)")
    pl.set_defaults(func=cmd_plot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad flags
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        print(f"error: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (UsageError, PlotError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
