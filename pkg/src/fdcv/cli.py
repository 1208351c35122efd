"""Command-line entry point: ``fdcv estimate | simulate | reproduce``.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical failure.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from fdcv import presets
from fdcv.estimators import RESTRICTIONS, CandidateClass
from fdcv.reml import RemlError
from fdcv.selector import DEFAULT_C, LEVELS, SelectionError, select
from fdcv.sim import DEFAULT_METHODS, SCHEMA_VERSION, DgpSpec, run_experiment
from fdcv.spectral import TimeSeries

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
FAST_REPLICATIONS = 500

log = logging.getLogger("fdcv")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# ---------------------------------------------------------------- input parsing

def parse_series(text, source="<input>"):
    """Numbers from a one-column file: CSV or whitespace separated, '#' comments, optional header."""
    values = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = [t for t in line.replace(",", " ").split()]
        try:
            nums = [float(t) for t in tokens]
        except ValueError:
            if not seen_data and not values:
                seen_data = True  # header line
                continue
            raise DataError(f"{source}:{lineno}: cannot parse {raw.strip()!r} as numbers") from None
        seen_data = True
        bad = [t for t, v in zip(tokens, nums) if not math.isfinite(v)]
        if bad:
            raise DataError(f"{source}:{lineno}: non-finite value {bad[0]!r}")
        values.extend(nums)
    return values


def read_series(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise DataError(f"{path} is not UTF-8 text") from None
    return parse_series(text, str(path))


# ---------------------------------------------------------------- config

@dataclass
class RunConfig:
    mode: str
    dgp: DgpSpec = None
    methods: tuple = DEFAULT_METHODS
    replications: int = 3000
    seed: int = 0
    c: float = DEFAULT_C
    levels: tuple = LEVELS
    max_truncation: int = None
    max_order: int = 5
    output_format: str = "text"
    extra: dict = field(default_factory=dict)


_DGP_KEYS = {"family": str, "n": int, "phi": float, "psi": float, "alpha": float, "beta": float, "q": int}
_EXP_KEYS = {"methods": list, "replications": int, "seed": int, "c": float, "levels": list,
             "max_truncation": int}


def _typed(section, key, value, kind):
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise UsageError(f"config field {section}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def load_config(path):
    """Parse and validate a simulation config (TOML with ``schema_version = 1``)."""
    try:
        raw = tomli.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except tomli.TOMLDecodeError as exc:
        raise UsageError(f"config {path}: {exc}") from None
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise UsageError(f"config field schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    unknown = set(raw) - {"schema_version", "dgp", "experiment"}
    if unknown:
        raise UsageError(f"config: unknown top-level field(s) {sorted(unknown)}")
    dgp_raw = raw.get("dgp")
    if not isinstance(dgp_raw, dict):
        raise UsageError("config field dgp: missing [dgp] table")
    kwargs = {}
    for key, value in dgp_raw.items():
        if key not in _DGP_KEYS:
            raise UsageError(f"config field dgp.{key}: unknown field")
        kwargs[key] = _typed("dgp", key, value, _DGP_KEYS[key])
    for key in ("family", "n"):
        if key not in kwargs:
            raise UsageError(f"config field dgp.{key}: required")
    try:
        dgp = DgpSpec(**kwargs)
    except ValueError as exc:
        raise UsageError(f"config field dgp: {exc}") from None
    cfg = RunConfig("simulate", dgp)
    exp = raw.get("experiment", {})
    if not isinstance(exp, dict):
        raise UsageError("config field experiment: expected a table")
    for key, value in exp.items():
        if key not in _EXP_KEYS:
            raise UsageError(f"config field experiment.{key}: unknown field")
        setattr(cfg, key, _typed("experiment", key, value, _EXP_KEYS[key]))
    cfg.methods = tuple(cfg.methods)
    cfg.levels = tuple(float(v) for v in cfg.levels)
    _validate(cfg)
    return cfg


def _validate(cfg):
    if not 0 < cfg.c < 1:
        raise UsageError(f"c must lie in (0, 1), got {cfg.c}")
    if cfg.replications < 1:
        raise UsageError("replications must be at least 1")
    if any(not 0 < lvl < 1 for lvl in cfg.levels):
        raise UsageError("levels must lie in (0, 1)")
    if cfg.max_truncation is not None and cfg.max_truncation < 1:
        raise UsageError("max_truncation must be at least 1")
    for m in cfg.methods:
        base, _, c = m.partition("@")
        if base not in DEFAULT_METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {DEFAULT_METHODS}")
        if c:
            try:
                ok = 0 < float(c) < 1
            except ValueError:
                ok = False
            if not ok or base not in ("CV_C", "CV_AR", "CV_PZ"):
                raise UsageError(f"bad method exponent in {m!r}")


# ---------------------------------------------------------------- output helpers

def _emit(text, output_dir, filename):
    if output_dir:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text, encoding="utf-8")
        log.info("wrote %s", out / filename)
    else:
        sys.stdout.write(text)


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _fmt(v, spec=".1f"):
    return "-" if v is None else format(v, spec)


# ---------------------------------------------------------------- estimate

def estimate_report(values, c=DEFAULT_C, restriction="all", max_truncation=None):
    series = TimeSeries(values)
    cls = CandidateClass.for_length(series.n, max_trunc=max_truncation)
    res = select(series, cls, c=c, restriction=restriction)
    out = {"schema_version": SCHEMA_VERSION}
    out.update(res.to_dict())
    out["status"] = res.selected.status
    return out


def format_estimate(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        rows = [("field", "value")]
        for key in ("n", "mean", "selected", "f0_hat", "long_run_variance", "se_hat", "c", "band_size"):
            rows.append((key, report[key]))
        for label, score in report["scores"].items():
            rows.append((f"cv[{label}]", "inf" if score is None else score))
        for lvl, (lo, hi) in report["intervals"].items():
            rows.append((f"ci{lvl}", f"{lo} {hi}"))
        return _csv(rows)
    lines = [
        f"n = {report['n']}, c = {report['c']}, band = {report['band_size']}, "
        f"restriction = {report['restriction']}",
        f"sample mean        {report['mean']:.6g}",
        f"selected           {report['selected']}",
        f"f(0) estimate      {report['f0_hat']:.6g}",
        f"long-run variance  {report['long_run_variance']:.6g}",
        f"standard error     {report['se_hat']:.6g}",
        "",
        "CV scores:",
    ]
    best = report["selected"]
    for label, score in report["scores"].items():
        mark = " *" if label == best else ""
        lines.append(f"  {label:<14}{'disqualified' if score is None else format(score, '.6f')}{mark}")
    lines.append("")
    for lvl, (lo, hi) in report["intervals"].items():
        lines.append(f"{100 * float(lvl):g}% interval  [{lo:.6g}, {hi:.6g}]")
    return "\n".join(lines) + "\n"


def cmd_estimate(args):
    if not args.input:
        raise UsageError("estimate needs --input")
    values = read_series(args.input)
    if len(values) < 8:
        raise DataError(f"need at least 8 observations, got {len(values)}")
    report = estimate_report(values, c=args.c, restriction=args.restriction,
                             max_truncation=args.max_truncation)
    _emit(format_estimate(report, args.format), args.output_dir, f"estimate.{args.format}")
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def coverage_csv(report):
    rows = [("dgp", "method", "level", "coverage", "failures")]
    for m in report.methods:
        for lvl in report.levels:
            rows.append((report.dgp.label(), m, lvl, report.coverage[m][lvl], report.failures[m]))
    return _csv(rows)


def cmd_simulate(args):
    if not args.config:
        raise UsageError("simulate needs --config")
    cfg = load_config(args.config)
    for name in ("seed", "replications", "max_truncation"):
        if getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    if args.c_given:
        cfg.c = args.c
    _validate(cfg)
    report = run_experiment(cfg.dgp, cfg.methods, cfg.replications, cfg.levels, cfg.seed, cfg.c,
                            threads=args.threads, max_truncation=cfg.max_truncation)
    if args.output_dir:
        _emit(report.to_json() + "\n", args.output_dir, "report.json")
        _emit(report.to_text() + "\n", args.output_dir, "report.txt")
        if args.format == "csv":
            _emit(coverage_csv(report), args.output_dir, "report.csv")
    else:
        text = {"json": report.to_json() + "\n", "csv": coverage_csv(report),
                "text": report.to_text() + "\n"}[args.format]
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- reproduce

def reproduce(identifier, replications, seed, threads=1, max_truncation=None):
    """Run a preset grid. Returns (cells, reports) in matching order."""
    cells = presets.table(identifier)
    reports = []
    for cell in cells:
        methods = presets.methods_for(cell)
        log.info("running %s (%d replications)", cell.dgp.label(), replications)
        reports.append(run_experiment(cell.dgp, methods, replications, LEVELS, seed, cell.c,
                                      threads=threads, max_truncation=max_truncation))
    return cells, reports


def comparison_rows(identifier, cells, reports):
    rows = []
    for cell, rep in zip(cells, reports):
        for m, lvl, pub, obs, dev in presets.compare(cell, rep):
            rows.append({"cell": cell.dgp.label(), "c": cell.c, "method": m, "level": lvl,
                         "reference": pub, "observed": obs, "deviation": dev})
    return rows


def efficiency_rows(cells, reports):
    by_key = {(c.dgp.psi, c.dgp.n): r for c, r in zip(cells, reports)}
    out = []
    for key, obs, pub in presets.efficiency_table(by_key):
        for m, o, p in zip(("CV_C", "AM-PW", "NW-PW"), obs, pub):
            out.append({"cell": f"MA1(psi={key[0]:g}) n={key[1]}", "method": m,
                        "reference": p, "observed": o, "deviation": o - p})
    return out


def format_comparison(identifier, rows, fmt, replications, seed, kind="coverage"):
    if fmt == "json":
        return json.dumps({"schema_version": SCHEMA_VERSION, "table": identifier, "kind": kind,
                           "replications": replications, "seed": seed, "rows": rows}, indent=2) + "\n"
    keys = list(rows[0]) if rows else []
    if fmt == "csv":
        return _csv([keys] + [[r[k] for k in keys] for r in rows])
    unit = "" if kind == "efficiency" else " (percent)"
    spec = ".2f" if kind == "efficiency" else ".1f"
    lines = [f"table {identifier}: reference vs observed {kind}{unit}, "
             f"{replications} replications, seed {seed}"]
    head = f"{'cell':<36}{'method':<8}" + ("" if kind == "efficiency" else f"{'level':>7}") + \
        f"{'target':>8}{'ours':>8}{'diff':>8}"
    lines += [head, "-" * len(head)]
    last = None
    for r in rows:
        cell = r["cell"] + (f" c={r['c']:g}" if identifier == "c-study" else "")
        shown = cell if cell != last else ""
        last = cell
        level = "" if kind == "efficiency" else f"{100 * r['level']:6.0f}%"
        lines.append(f"{shown:<36}{r['method']:<8}{level}{_fmt(r['reference'], spec):>8}"
                     f"{_fmt(r['observed'], spec):>8}{_fmt(r['deviation'], '+' + spec):>8}")
    return "\n".join(lines) + "\n"


def cmd_reproduce(args):
    ident = str(args.table)
    if ident not in presets.IDENTIFIERS:
        raise UsageError(f"unknown table {ident!r}; choose from {', '.join(presets.IDENTIFIERS)}")
    reps = args.replications or (FAST_REPLICATIONS if args.fast else 3000)
    seed = 0 if args.seed is None else args.seed
    cells, reports = reproduce(ident, reps, seed, args.threads, args.max_truncation)
    if ident == "4":
        rows, kind = efficiency_rows(cells, reports), "efficiency"
    else:
        rows, kind = comparison_rows(ident, cells, reports), "coverage"
    text = format_comparison(ident, rows, args.format, reps, seed, kind)
    _emit(text, args.output_dir, f"table_{ident}.{args.format}")
    if args.output_dir:
        full = [r.to_dict() for r in reports]
        _emit(json.dumps({"schema_version": SCHEMA_VERSION, "reports": full}, indent=2) + "\n",
              args.output_dir, f"table_{ident}_reports.json")
    return EXIT_OK


# ---------------------------------------------------------------- main

def _c_value(text):
    try:
        c = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < c < 1:
        raise argparse.ArgumentTypeError(f"c must lie in (0, 1), got {c}")
    return c


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--c", type=_c_value, default=None,
                        help=f"CV band exponent in (0, 1) (default {DEFAULT_C})")
    common.add_argument("--restriction", choices=RESTRICTIONS, default="all")
    common.add_argument("--replications", type=_positive, default=None)
    common.add_argument("--threads", type=_positive, default=os.cpu_count() or 1,
                        help="worker processes (default: available cores)")
    common.add_argument("--output-dir", default=None, help="write files here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--max-truncation", type=_positive, default=None,
                        help="override the Parzen truncation cap m(n) of the candidate class")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fdcv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("estimate", parents=[common], help="HAC standard error for one series")
    p.add_argument("--input", help="one numeric value per line; '#' comments allowed")
    p = sub.add_parser("simulate", parents=[common], help="coverage experiment from a TOML config")
    p.add_argument("--config")
    p = sub.add_parser("reproduce", parents=[common], help="run a reference table's grid")
    p.add_argument("table", help=f"one of {', '.join(presets.IDENTIFIERS)}")
    p.add_argument("--fast", action="store_true", help=f"{FAST_REPLICATIONS} replications")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    args.c_given = args.c is not None
    if args.c is None:
        args.c = DEFAULT_C
    handler = {"estimate": cmd_estimate, "simulate": cmd_simulate, "reproduce": cmd_reproduce}
    try:
        return handler[args.command](args)
    except UsageError as exc:
        print(f"fdcv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"fdcv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SelectionError, RemlError, ArithmeticError, FloatingPointError) as exc:
        print(f"fdcv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # remaining ValueErrors come from input validation (length, finiteness)
        print(f"fdcv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
