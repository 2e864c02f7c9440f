"""Command line driver: ``hyperharm verify|constants|eval|report``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import inequalities, mobius
from .harmonic import AtomicHarmonic, extremal_function, poisson_grad, poisson_kernel
from .report import PreconditionError
from .suites import SUITES, SuiteError, run_suites

COLUMNS = ["check", "n", "m", "point", "lhs", "rhs", "margin", "tol", "regime", "pass", "seed", "trial"]
CONFIG_FIELDS = {"suite", "dims", "trials", "seed", "quad_size", "tol", "out", "format", "timing"}
MAX_SEED = 2**64 - 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def _vector(text):
    try:
        return np.array([float(t) for t in text.split(",")], dtype=np.float64)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _matrix(text):
    rows = [_vector(r) for r in text.split(";")]
    if len({r.size for r in rows}) != 1:
        raise argparse.ArgumentTypeError("rows of unequal length")
    return np.stack(rows)


def _dims(value):
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
    else:
        parts = list(value)
    try:
        dims = [int(p) for p in parts]
    except (TypeError, ValueError):
        raise ConfigError(f"field 'dims': expected integers, got {value!r}") from None
    if not dims:
        raise ConfigError("field 'dims': empty")
    for n in dims:
        if not 1 <= n <= 8:
            raise ConfigError(f"field 'dims': dimension {n} outside 1..8")
    return sorted(set(dims))


def _tol_overrides(items):
    out = {}
    for item in items or []:
        if isinstance(item, str):
            name, sep, val = item.partition("=")
            if not sep:
                raise ConfigError(f"field 'tol': expected CHECK=VALUE, got {item!r}")
        else:
            name, val = item
        try:
            out[name] = float(val)
        except ValueError:
            raise ConfigError(f"field 'tol': bad value for {name!r}: {val!r}") from None
        if not math.isfinite(out[name]) or out[name] < 0:
            raise ConfigError(f"field 'tol': {name!r} must be finite and non-negative")
    return out


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    unknown = sorted(set(data) - CONFIG_FIELDS)
    if unknown:
        raise ConfigError(f"{path}: unknown field {unknown[0]!r}")
    if isinstance(data.get("tol"), dict):
        data["tol"] = list(data["tol"].items())
    return data


def default_seed():
    env = os.environ.get("HYPERHARM_SEED")
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise ConfigError(f"HYPERHARM_SEED: not an integer: {env!r}") from None


def resolve_config(args):
    """Merge config file and flags; flags win."""
    cfg = load_config(args.config) if args.config else {}
    for key in CONFIG_FIELDS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    suites = cfg.get("suite", ["all"])
    if isinstance(suites, str):
        suites = [s for s in suites.split(",") if s]
    trials = cfg.get("trials", 100)
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"field 'trials': must be an integer >= 1, got {trials!r}")
    seed = cfg.get("seed")
    seed = default_seed() if seed is None else seed
    if not isinstance(seed, int) or not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"field 'seed': must be an integer in [0, 2^64), got {seed!r}")
    quad = cfg.get("quad_size")
    if quad is not None and (not isinstance(quad, int) or quad < 1):
        raise ConfigError(f"field 'quad_size': must be a positive integer, got {quad!r}")
    fmt = cfg.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"field 'format': expected json or csv, got {fmt!r}")
    return {
        "suite": suites,
        "dims": _dims(cfg.get("dims", [2, 3, 4])),
        "trials": trials,
        "seed": seed,
        "quad_size": quad,
        "tol": _tol_overrides(cfg.get("tol")),
        "out": cfg.get("out"),
        "format": fmt,
        "timing": bool(cfg.get("timing", False)),
    }


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def summarize(records):
    asserting = [r for r in records if r["regime"] != "informational"]
    failed = [r for r in asserting if not r["pass"]]
    worst = {}
    for r in records:
        key = r["check"]
        if key not in worst or r["margin"] < worst[key]["margin"]:
            worst[key] = {"margin": r["margin"], "n": r["n"], "trial": r["trial"], "pass": r["pass"]}
    return {
        "total": len(records),
        "asserting": len(asserting),
        "passed": len(asserting) - len(failed),
        "failed": len(failed),
        "informational": len(records) - len(asserting),
        "failed_checks": sorted({r["check"] for r in failed}),
        "worst_margins": dict(sorted(worst.items())),
    }


def render(records, summary, fmt):
    if fmt == "json":
        return json.dumps({"records": records, "summary": summary}, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([json.dumps(r[c]) if c in ("point", "m") else r[c] for c in COLUMNS])
    for line in json.dumps(summary, indent=1).splitlines():
        buf.write("# " + line + "\n")
    return buf.getvalue()


def read_report(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)["records"]
    rows = csv.DictReader(line for line in text.splitlines() if not line.startswith("#"))
    out = []
    for row in rows:
        rec = dict(row)
        for c in ("lhs", "rhs", "margin", "tol"):
            rec[c] = float(rec[c])
        for c in ("n", "trial"):
            rec[c] = int(rec[c]) if rec[c] not in ("", None) else None
        rec["pass"] = rec["pass"] == "True"
        rec["point"] = json.loads(rec["point"]) if rec["point"] else None
        rec["m"] = json.loads(rec["m"]) if rec["m"] else None
        out.append(rec)
    return out


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args):
    cfg = resolve_config(args)
    if cfg["out"] not in (None, "-"):
        parent = os.path.dirname(os.path.abspath(cfg["out"]))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise ConfigError(f"output path not writable: {cfg['out']}")
    start = time.perf_counter()
    results = run_suites(cfg["suite"], cfg["dims"], cfg["trials"], cfg["seed"], cfg["quad_size"], cfg["tol"])
    records = [rep.record(seed=cfg["seed"], trial=trial) for rep, trial in results]
    summary = summarize(records)
    runtime = time.perf_counter() - start
    if cfg["timing"]:
        summary["runtime_s"] = round(runtime, 3)
    try:
        _write(render(records, summary, cfg["format"]), cfg["out"])
    except OSError as exc:
        raise ConfigError(f"output path not writable: {cfg['out']}: {exc.strerror}") from None
    print(
        f"{summary['passed']}/{summary['asserting']} asserting checks passed, "
        f"{summary['informational']} informational, {runtime:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


def cmd_constants(args):
    n = args.n
    if n < 2:
        raise ConfigError("constants: n must be >= 2")
    frac, pi_pow = inequalities.liu_constant_exact(n)
    exact = str(frac) + (f"/pi^{pi_pow}" if pi_pow > 1 else "/pi" if pi_pow == 1 else "")
    out = {
        "n": n,
        "ball_volume": inequalities.ball_volume(n),
        "liu_constant": inequalities.liu_constant(n),
        "liu_constant_exact": exact,
        "gradient_constant": inequalities.gradient_constant(n),
    }
    if n == 3:
        out["gradient_constant_exact"] = "8/(3*sqrt(3))"
    if args.json:
        print(json.dumps(out, indent=1))
    else:
        for k, v in out.items():
            print(f"{k} = {v}")
    return EXIT_OK


def cmd_eval(args):
    what = args.what
    if what == "phi":
        out = {"phi": mobius.mobius_map(args.a, args.x).tolist(), "bracket": float(mobius.bracket(args.x, args.a))}
    elif what == "poisson":
        out = {"P": float(poisson_kernel(args.x, args.xi)), "grad": poisson_grad(args.x, args.xi).tolist()}
    elif what == "dist":
        out = {"rho": float(mobius.pseudo_metric(args.x, args.y)), "d": float(mobius.hyperbolic_metric(args.x, args.y))}
    elif what == "atomic":
        f = AtomicHarmonic(args.weights, args.sites)
        out = {"f": float(f.value(args.x)), "grad": f.grad(args.x).tolist()}
    elif what == "extremal":
        f = extremal_function(args.a, args.xi, args.scale)
        out = {"f": float(f.value(args.x)), "grad": f.grad(args.x).tolist()}
    print(json.dumps(out))
    return EXIT_OK


def cmd_report(args):
    try:
        records = read_report(args.file)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read report {args.file}: {exc}") from None
    summary = summarize(records)
    print(json.dumps(summary, indent=1))
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="hyperharm", description="Seeded numerical verification of sharp bounds for harmonic maps of the ball.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run check suites and write a report")
    v.add_argument("--suite", action="append", help=f"suite name (repeatable): all, {', '.join(SUITES)}")
    v.add_argument("--dims", help="comma-separated dimensions, e.g. 2,3,8")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=lambda s: int(s, 0), help="64-bit seed (default: $HYPERHARM_SEED or 0)")
    v.add_argument("--quad-size", dest="quad_size", type=int, help="quadrature nodes per panel or Monte Carlo samples")
    v.add_argument("--tol", action="append", metavar="CHECK=VALUE", help="override a check's tolerance")
    v.add_argument("--out", help="output file (default stdout)")
    v.add_argument("--format", choices=["json", "csv"])
    v.add_argument("--config", help="JSON file mirroring the flags")
    v.add_argument("--timing", action="store_true", help="include runtime in the summary (breaks byte-identity)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="print the sharp constants for dimension n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_constants)

    e = sub.add_parser("eval", help="evaluate maps and kernels at explicit points")
    e.add_argument("what", choices=["phi", "poisson", "dist", "atomic", "extremal"])
    e.add_argument("--a", type=_vector)
    e.add_argument("--x", type=_vector, required=True)
    e.add_argument("--y", type=_vector)
    e.add_argument("--xi", type=_vector)
    e.add_argument("--scale", type=float, default=1.0)
    e.add_argument("--weights", type=_vector)
    e.add_argument("--sites", type=_matrix, help="rows separated by ';'")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("report", help="re-summarize an existing report file")
    r.add_argument("file")
    r.set_defaults(func=cmd_report)
    return p


_EVAL_NEEDS = {"phi": ("a",), "poisson": ("xi",), "dist": ("y",), "atomic": ("weights", "sites"), "extremal": ("a", "xi")}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval":
        missing = [k for k in _EVAL_NEEDS[args.what] if getattr(args, k) is None]
        if missing:
            parser.error(f"eval {args.what} requires --{missing[0]}")
    try:
        return args.func(args)
    except (ConfigError, SuiteError, PreconditionError, ValueError) as exc:
        print(f"hyperharm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
