"""Command-line interface: eval, identity, theorem, scan, verify-disc."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .classes import (ClassSpec, RtauSpec, disc_sample_mstar, disc_sample_nstar,
                      disc_sample_rtau, load_series)
from .errors import DomainError
from .identities import Case, Family, check_identity
from .numerics import EvalConfig, SeriesParams, pfq
from .operators import OperatorSpec, apply_operator, operator_coefficients
from .theorems import TheoremId, evaluate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_IDENTITY_FAILED = 3
EXIT_DOES_NOT_HOLD = 4
EXIT_IO = 5

#: Scans with more rows than this default to JSON Lines.
JSONL_THRESHOLD = 10_000
SCAN_PARAMS = ("a", "b", "c", "lambda", "alpha", "A", "B", "tau")
SCAN_COLUMNS = SCAN_PARAMS + ("status", "holds", "lhs", "rhs", "margin", "reason")

CONFIG_KEYS = {
    "reltol": "rel_tol", "rel_tol": "rel_tol",
    "maxterms": "max_terms", "max_terms": "max_terms",
    "minterms": "min_terms", "min_terms": "min_terms",
    "absslack": "abs_slack", "abs_slack": "abs_slack",
}


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output

def fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def to_json(obj) -> str:
    """Compact deterministic JSON with 17 significant digits for floats."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float, np.integer, np.floating)):
        return fmt_number(obj)
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit(obj) -> None:
    sys.stdout.write(to_json(obj) + "\n")


# ----------------------------------------------------------------- parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits with status 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def number(text: str):
    """Real number, or a complex one written like 0.3+0.4j."""
    try:
        return float(text)
    except ValueError:
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def read_config(path: str) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        name = CONFIG_KEYS.get(key.lower().replace("-", "_"))
        if name is None:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        value = value.strip("'\"")
        out[name] = int(value) if name.endswith("terms") else float(value)
    return out


def build_config(args) -> EvalConfig:
    values = {}
    if args.config:
        values.update(read_config(args.config))
    for name in ("rel_tol", "max_terms", "min_terms", "abs_slack"):
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    return EvalConfig(**values)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("evaluation settings")
    g.add_argument("--config", help="key=value file setting relTol, maxTerms, minTerms, absSlack")
    g.add_argument("--rel-tol", dest="rel_tol", type=real)
    g.add_argument("--max-terms", dest="max_terms", type=int)
    g.add_argument("--min-terms", dest="min_terms", type=int)
    g.add_argument("--abs-slack", dest="abs_slack", type=real)


def _add_abc(p: argparse.ArgumentParser, required: bool = True, kind=real) -> None:
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", type=kind if name != "c" else real, required=required)


def _add_class_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=real, default=None)
    p.add_argument("--alpha", type=real, default=None)
    p.add_argument("--A", dest="A", type=real)
    p.add_argument("--B", dest="B", type=real)
    p.add_argument("--tau", type=real, help="modulus of tau")
    p.add_argument("--tau-phase", dest="tau_phase", type=real, default=0.0)


def _rtau(args) -> RtauSpec | None:
    if args.A is None and args.B is None and args.tau is None:
        return None
    if None in (args.A, args.B, args.tau):
        raise UsageError("--A, --B and --tau must be given together")
    return RtauSpec(args.A, args.B, args.tau, args.tau_phase)


# ---------------------------------------------------------------- commands

def cmd_eval(args) -> int:
    cfg = build_config(args)
    if args.family == "generic":
        params = SeriesParams(args.upper or [], args.lower or [])
    else:
        if None in (args.a, args.b, args.c):
            raise UsageError(f"--a, --b and --c are required for family {args.family}")
        split = OperatorSpec.cubic if args.family == "cubic" else OperatorSpec.quartic
        params = split(args.a, args.b, args.c).series_params()
    res = pfq(params, args.z, cfg)
    emit({"value": res.value, "termsUsed": res.terms_used,
          "converged": res.converged, "errorEstimate": res.error_estimate})
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


_CASES = {"dj": Case.BASE, "cj": Case.BASE, "base": Case.BASE,
          "w1": Case.W1, "w2": Case.W2, "w3": Case.W3, "w4": Case.W4}


def cmd_identity(args) -> int:
    cfg = build_config(args)
    report = check_identity(Family(args.family), _CASES[args.case], (args.a, args.b, args.c), cfg)
    out = report.to_dict()
    out["tolerance"] = args.tolerance
    emit(out)
    return EXIT_OK if report.rel_error <= args.tolerance else EXIT_IDENTITY_FAILED


def _theorem_spec(args) -> tuple[ClassSpec, RtauSpec | None]:
    if args.alpha is None:
        raise UsageError("--alpha is required")
    lam = 0.0 if args.corollary or args.lam is None else args.lam
    if args.corollary and args.lam not in (None, 0.0):
        raise UsageError("--corollary fixes lambda = 0")
    return ClassSpec(lam, args.alpha), _rtau(args)


def cmd_theorem(args) -> int:
    cfg = build_config(args)
    theorem = TheoremId(args.id)
    spec, rt = _theorem_spec(args)
    verdict = evaluate(theorem, args.a, args.b, args.c, spec, rt, cfg)
    out = {"theorem": theorem.value}
    out.update(verdict.to_dict())
    emit(out)
    return EXIT_OK if verdict.holds else EXIT_DOES_NOT_HOLD


def _parse_grid(spec: str) -> tuple[str, list[float]]:
    try:
        name, rng = spec.split("=", 1)
        parts = rng.split(":")
        if len(parts) == 1:
            start = stop = float(parts[0])
            steps = 1
        else:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid {spec!r}; expected name=start:stop:steps") from None
    name = {"lam": "lambda", "tauModulus": "tau"}.get(name, name)
    if name not in SCAN_PARAMS:
        raise UsageError(f"unknown grid parameter {name!r}")
    if steps < 1 or start > stop:
        raise UsageError(f"grid {name}: need steps >= 1 and start <= stop")
    values = [start] if steps == 1 else np.linspace(start, stop, steps).tolist()
    return name, values


def _scan_point(job) -> dict:
    theorem_value, point, cfg = job
    theorem = TheoremId(theorem_value)
    row = {k: point.get(k) for k in SCAN_PARAMS}
    try:
        if point.get("alpha") is None:
            raise UsageError("alpha is required")
        spec = ClassSpec(point.get("lambda") or 0.0, point["alpha"])
        rt = None
        if theorem.needs_rtau:
            if None in (point.get("A"), point.get("B"), point.get("tau")):
                raise UsageError("A, B and tau are required")
            rt = RtauSpec(point["A"], point["B"], point["tau"])
        v = evaluate(theorem, point["a"], point["b"], point["c"], spec, rt, cfg)
        row.update(status="ok", holds=v.holds, lhs=v.lhs, rhs=v.rhs, margin=v.margin, reason="")
    except (DomainError, UsageError, OverflowError) as exc:
        row.update(status="skipped", holds=None, lhs=None, rhs=None, margin=None, reason=str(exc))
    return row


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return fmt_number(v)


def cmd_scan(args) -> int:
    cfg = build_config(args)
    theorem = TheoremId(args.id)
    fixed = {"a": args.a, "b": args.b, "c": args.c, "lambda": args.lam,
             "alpha": args.alpha, "A": args.A, "B": args.B, "tau": args.tau}
    axes = {}
    for g in args.grid or []:
        name, values = _parse_grid(g)
        axes[name] = values
    names = [n for n in SCAN_PARAMS if n in axes]
    for n in ("a", "b", "c"):
        if n not in axes and fixed[n] is None:
            raise UsageError(f"parameter {n} needs a value or a grid")
    points = []
    for combo in itertools.product(*(axes[n] for n in names)):
        p = dict(fixed)
        p.update(zip(names, combo))
        points.append(p)
    jobs = [(theorem.value, p, cfg) for p in points]
    if args.workers and args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_scan_point, jobs, chunksize=max(1, len(jobs) // (4 * args.workers))))
    else:
        rows = [_scan_point(j) for j in jobs]
    fmt = args.format or ("jsonl" if len(rows) > JSONL_THRESHOLD else "csv")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SCAN_COLUMNS)
        for r in rows:
            w.writerow([_csv_cell(r[k]) for k in SCAN_COLUMNS])
        text = buf.getvalue()
    else:
        text = "".join(to_json({k: r[k] for k in SCAN_COLUMNS}) + "\n" for r in rows)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            sys.stderr.write(f"error: cannot write {args.out}: {exc}\n")
            return EXIT_IO
    return EXIT_OK


def cmd_verify_disc(args) -> int:
    if args.coeffs:
        try:
            series = load_series(args.coeffs)
        except OSError as exc:
            sys.stderr.write(f"error: cannot read {args.coeffs}: {exc}\n")
            return EXIT_IO
    elif args.family:
        if None in (args.a, args.b, args.c):
            raise UsageError("--a, --b and --c are required with --family")
        op = (OperatorSpec.cubic if args.family == "cubic" else OperatorSpec.quartic)(
            args.a, args.b, args.c)
        if args.extremal:
            rt = _rtau(args)
            if rt is None:
                raise UsageError("--extremal needs --A, --B and --tau")
            from .classes import dixit_pal_extremal
            series = apply_operator(op, dixit_pal_extremal(rt, args.terms))
        else:
            series = operator_coefficients(op, args.terms)
    else:
        raise UsageError("give --coeffs FILE or --family with --a --b --c")
    if args.cls == "rtau":
        rt = _rtau(args)
        if rt is None:
            raise UsageError("class rtau needs --A, --B and --tau")
        report = disc_sample_rtau(series, rt, args.samples, args.radius)
    else:
        if args.alpha is None:
            raise UsageError("--alpha is required")
        spec = ClassSpec(args.lam or 0.0, args.alpha)
        fn = disc_sample_mstar if args.cls == "mstar" else disc_sample_nstar
        report = fn(series, spec, args.samples, args.radius)
    out = {"class": args.cls}
    out.update(report.to_dict())
    emit(out)
    return EXIT_OK if report.member else EXIT_DOES_NOT_HOLD


# ------------------------------------------------------------------ wiring

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypunivalent", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="print a banner on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a hypergeometric series")
    e.add_argument("--family", choices=("cubic", "quartic", "generic"), required=True)
    _add_abc(e, required=False)
    e.add_argument("--upper", type=real, nargs="*", help="numerator parameters (generic)")
    e.add_argument("--lower", type=real, nargs="*", help="denominator parameters (generic)")
    e.add_argument("--z", type=real, required=True)
    _add_config_flags(e)
    e.set_defaults(func=cmd_eval)

    i = sub.add_parser("identity", help="compare both sides of a summation identity")
    i.add_argument("--family", choices=("cubic", "quartic"), required=True)
    i.add_argument("--case", choices=tuple(_CASES), required=True)
    _add_abc(i)
    i.add_argument("--tolerance", type=real, default=1e-7)
    _add_config_flags(i)
    i.set_defaults(func=cmd_identity)

    ids = tuple(t.value for t in TheoremId)
    t = sub.add_parser("theorem", help="evaluate a sufficient condition")
    t.add_argument("--id", choices=ids, required=True)
    _add_abc(t, kind=number)
    _add_class_flags(t)
    t.add_argument("--corollary", action="store_true", help="lambda = 0 specialisation")
    _add_config_flags(t)
    t.set_defaults(func=cmd_theorem)

    s = sub.add_parser("scan", help="evaluate a condition over a parameter grid")
    s.add_argument("--id", choices=ids, required=True)
    _add_abc(s, required=False)
    _add_class_flags(s)
    s.add_argument("--grid", action="append", metavar="NAME=START:STOP:STEPS")
    s.add_argument("--out", help="output file (default stdout)")
    s.add_argument("--format", choices=("csv", "jsonl"))
    s.add_argument("--workers", type=int, default=1)
    _add_config_flags(s)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify-disc", help="sample a class functional on the disc")
    v.add_argument("--coeffs", help="coefficient file")
    v.add_argument("--family", choices=("cubic", "quartic"))
    _add_abc(v, required=False)
    v.add_argument("--terms", type=int, default=64)
    v.add_argument("--extremal", action="store_true",
                   help="apply the operator to the extremal R^tau series")
    v.add_argument("--class", dest="cls", choices=("mstar", "nstar", "rtau"), required=True)
    _add_class_flags(v)
    v.add_argument("--samples", type=int, default=8192)
    v.add_argument("--radius", type=real, default=0.999)
    v.set_defaults(func=cmd_verify_disc)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        sys.stderr.write(f"hypunivalent {__version__}\n")
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
