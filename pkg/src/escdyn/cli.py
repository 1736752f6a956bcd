"""Command line front end: classify, orbit, raster, singular, verify, report.

Every subcommand accepts ``--config FILE``: an INI file whose sections and
keys mirror the flags (``[function] fn``, ``[escape] max_iter``, ``[grid]
window``, ...).  Unknown sections or keys are rejected; flags win over the
file.  Exit codes: 0 ok, 1 certified violation, 2 bad input.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import os
import sys
from pathlib import Path

from .function import ExprError, parse_complex, parse_expr
from .harness import CHECKS, PAIRS, read_reports, run_suite, write_reports
from .orbit import EscapeConfig, classify, orbit
from .raster import GridSpec, PixelBudgetExceeded, rasterize, write_field_csv, write_ppm
from .singular import (
    AV_FOOTNOTE,
    DegenerateRadii,
    hyperbolicity,
    is_bounded_type,
    order_estimate,
    singular_report_rows,
)

# config section -> {key: parser}
_ESCAPE_KEYS = {
    "max_iter": int, "hard_radius": float, "fatou_re_threshold": float,
    "bounded_capture_eps": float, "bounded_multiplier_margin": float,
    "attractor_search": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "max_period": int,
}
CONFIG_SCHEMA = {
    "function": {"fn": str},
    "escape": _ESCAPE_KEYS,
    "grid": {"window": str, "px": str, "pixel_budget": int},
    "samples": {"seed": int},
    "run": {"threads": int, "z": str, "n": int, "K": int, "bound": float, "suite": str, "pair": str},
    "output": {"out": str, "csv": str, "out_dir": str},
}


class UsageError(Exception):
    pass


def load_config(path) -> dict:
    """Flat ``{key: value}`` from an INI file, validated against the schema."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for section in cp.sections():
        if section not in CONFIG_SCHEMA:
            raise UsageError(f"unknown config section [{section}]")
        for key, raw in cp.items(section):
            if key not in CONFIG_SCHEMA[section]:
                raise UsageError(f"unknown key {key!r} in [{section}]")
            try:
                out[key] = CONFIG_SCHEMA[section][key](raw)
            except ValueError as exc:
                raise UsageError(f"bad value for {section}.{key}: {raw!r}") from exc
    return out


def _window(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected re_min,re_max,im_min,im_max") from None
    if len(vals) != 4:
        raise UsageError(f"bad window {text!r}; expected four numbers")
    return vals


def _px(text: str) -> tuple[int, int]:
    try:
        w, h = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad --px {text!r}; expected WxH") from None
    return w, h


def _threads(value) -> int:
    if value is None:
        env = os.environ.get("ESCDYN_THREADS")
        value = int(env) if env else 1
    return value if value > 0 else (os.cpu_count() or 1)


class _Opts:
    """Flags merged over config values over defaults."""

    def __init__(self, ns: argparse.Namespace, config: dict):
        self.ns, self.config = ns, config

    def get(self, key, default=None):
        val = getattr(self.ns, key, None)
        if val is None:
            val = self.config.get(key, default)
        return val

    def need(self, key, flag=None):
        val = self.get(key)
        if val is None:
            raise UsageError(f"missing --{flag or key.replace('_', '-')} (flag or config)")
        return val

    def escape_config(self) -> EscapeConfig:
        kw = {k: self.get(k) for k in _ESCAPE_KEYS if self.get(k) is not None}
        try:
            return EscapeConfig(**kw)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def _common(p: argparse.ArgumentParser, fn=True):
    p.add_argument("--config", help="INI config file; flags override it")
    p.add_argument("--threads", type=int, help="worker threads, 0 = auto (fallback: $ESCDYN_THREADS, else 1)")
    p.add_argument("--max-iter", dest="max_iter", type=int, help="iteration horizon (default 200)")
    p.add_argument("--hard-radius", dest="hard_radius", type=float, help="overflow-certificate radius (default 1e15)")
    p.add_argument("--fatou-re-threshold", dest="fatou_re_threshold", type=float,
                   help="real-part certificate trigger (default 0.05)")
    p.add_argument("--capture-eps", dest="bounded_capture_eps", type=float,
                   help="attractor capture radius (default 1e-6)")
    p.add_argument("--multiplier-margin", dest="bounded_multiplier_margin", type=float,
                   help="attracting means |multiplier| <= 1 - margin (default 0.01)")
    p.add_argument("--max-period", dest="max_period", type=int, help="longest cycle searched (default 8)")
    if fn:
        p.add_argument("--fn", help="function expression, e.g. fatou or compose(fatou,translate(fatou,0+6.283185307179586i))")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="escdyn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="verdict, certificate and step for one seed")
    _common(p)
    p.add_argument("--z", help="seed point x+yi (use --z=-1+2i for a leading minus)")

    p = sub.add_parser("orbit", help="orbit prefix as CSV")
    _common(p)
    p.add_argument("--z", help="seed point x+yi")
    p.add_argument("--n", type=int, help="number of iterations (default 20)")
    p.add_argument("--out", help="CSV path (default stdout)")

    p = sub.add_parser("raster", help="escape-time field as binary PPM")
    _common(p)
    p.add_argument("--window", help="re_min,re_max,im_min,im_max (use --window=-8,8,-8,8)")
    p.add_argument("--px", help="WxH pixels")
    p.add_argument("--pixel-budget", dest="pixel_budget", type=int, help="max pixels (default 2^24)")
    p.add_argument("--out", help="PPM path")
    p.add_argument("--csv", help="optional per-cell CSV dump")

    p = sub.add_parser("singular", help="singular values, postsingular verdict, order estimate")
    _common(p)
    p.add_argument("--K", type=int, help="critical lattice truncation |k| <= K (default 50)")
    p.add_argument("--bound", type=float, help="postsingular bound (default 1e6)")
    p.add_argument("--out", help="CSV path (default stdout)")

    p = sub.add_parser("verify", help="run harness checks and write reports")
    _common(p, fn=False)
    p.add_argument("--suite", help=f"all or comma list of: {', '.join(CHECKS)}")
    p.add_argument("--pair", help=f"function pair: {', '.join(PAIRS)} (default fatou)")
    p.add_argument("--seed", type=int, help="seed of the random sample sets (default 0)")
    p.add_argument("--out-dir", dest="out_dir", help="report directory (default reports)")

    p = sub.add_parser("report", help="aggregate reports.csv files from verify runs")
    p.add_argument("--config", help="INI config file")
    p.add_argument("inputs", nargs="+", help="report directories or reports.csv files")
    p.add_argument("--out", help="write the combined table as CSV")
    return ap


def _cmd_classify(o: _Opts) -> int:
    f = parse_expr(o.need("fn"))
    z = parse_complex(o.need("z"))
    print(classify(f, z, o.escape_config()))
    return 0


def _cmd_orbit(o: _Opts) -> int:
    f = parse_expr(o.need("fn"))
    z = parse_complex(o.need("z"))
    rec = orbit(f, z, o.get("n", 20), o.escape_config())
    out = o.get("out")
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(["n", "re", "im"])
        for k, v in enumerate(rec.values):
            w.writerow([k, repr(v.real), repr(v.imag)])
    finally:
        if out:
            fh.close()
    print(rec.classification, file=sys.stderr)
    return 0


def _cmd_raster(o: _Opts) -> int:
    f = parse_expr(o.need("fn"))
    w, h = _px(o.need("px"))
    try:
        grid = GridSpec(_window(o.need("window")), w, h, o.get("pixel_budget", 2 ** 24))
    except (ValueError, PixelBudgetExceeded) as exc:
        raise UsageError(str(exc)) from exc
    field = rasterize(f, grid, o.escape_config(), _threads(o.get("threads")))
    write_ppm(field, o.need("out"))
    if o.get("csv"):
        write_field_csv(field, o.get("csv"))
    print(f"escaping={field.fraction(0):.4f} bounded={field.fraction(1):.4f} undecided={field.fraction(2):.4f}")
    return 0


def _cmd_singular(o: _Opts) -> int:
    f = parse_expr(o.need("fn"))
    K = o.get("K", 50)
    cfg = o.escape_config()
    rows, ps = singular_report_rows(f, K, cfg, o.get("bound", 1e6))
    out = o.get("out")
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=["kind", "k", "re", "im", "verdict", "capture_step"])
        w.writeheader()
        w.writerows(rows)
    finally:
        if out:
            fh.close()
    info = sys.stdout if out else sys.stderr
    print(f"postsingular={ps.label} hyperbolic={hyperbolicity(ps, cfg).value} "
          f"bounded_type={is_bounded_type(f, K)} over_approximate={ps.singular.over_approximate}", file=info)
    try:
        rho = order_estimate(f)
        print(f"#AV={len(ps.singular.asymptotic_values)} 2*rho_hat={2 * rho:.4f} (report only)", file=info)
    except DegenerateRadii:
        print(f"#AV={len(ps.singular.asymptotic_values)} 2*rho_hat=n/a", file=info)
    print(f"note: {AV_FOOTNOTE}", file=info)
    return 0


def _cmd_verify(o: _Opts) -> int:
    suite = o.get("suite", "all")
    pair = o.get("pair", "fatou")
    if pair not in PAIRS:
        raise UsageError(f"unknown pair {pair!r}")
    if suite != "all":
        unknown = [s for s in suite.split(",") if s.strip() not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    reports = run_suite(suite, pair, o.escape_config(), o.get("seed", 0), _threads(o.get("threads")),
                        log=print)
    path = write_reports(reports, o.get("out_dir", "reports"))
    violated = sum(r.violated for r in reports)
    print(f"wrote {path}; violations={violated}")
    return 1 if violated else 0


def _cmd_report(o: _Opts) -> int:
    rows = []
    for item in o.ns.inputs:
        p = Path(item)
        p = p / "reports.csv" if p.is_dir() else p
        if not p.exists():
            raise UsageError(f"no reports at {p}")
        for row in read_reports(p):
            row["source"] = str(p.parent)
            rows.append(row)
    cols = ["source", "name", "applicable", "passed", "violated", "vacuous", "seed"]
    for row in rows:
        total = row["applicable"] + row["vacuous"]
        frac = row["vacuous"] / total if total else 0.0
        print(f"{row['source']}\t{row['name']}\tapplicable={row['applicable']}\tviolated={row['violated']}"
              f"\tvacuous={100 * frac:.1f}%")
    violated = sum(r["violated"] for r in rows)
    print(f"checks={len(rows)} violations={violated}")
    if o.get("out"):
        with open(o.get("out"), "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            w.writerows({k: r[k] for k in cols} for r in rows)
    return 1 if violated else 0


COMMANDS = {
    "classify": _cmd_classify, "orbit": _cmd_orbit, "raster": _cmd_raster,
    "singular": _cmd_singular, "verify": _cmd_verify, "report": _cmd_report,
}


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        config = load_config(ns.config) if getattr(ns, "config", None) else {}
        return COMMANDS[ns.command](_Opts(ns, config))
    except (UsageError, ExprError) as exc:
        print(f"escdyn: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
