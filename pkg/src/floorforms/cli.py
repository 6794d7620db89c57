"""Command-line interface: ``floorform <command> ...``.

Every command prints one JSON envelope
``{schema_version, command, parameters, result, elapsed_ms}`` with sorted
keys.  Exit codes: 0 found / ok, 1 not found (or a violated plan), 2 usage
or hypothesis error, 3 file error.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .arith import is_prime, prime_divisors
from .coset import ResidueTriple, default_convention
from .floorform import FloorForm, ScanReport, representation_count, scan_range, search_representation
from .padic import PrecisionError
from .planner import VIOLATED, HypothesisError, local_statuses, plan_for_form, verify_plan
from .theta import obstruction_modulus, obstruction_scan, residue_class_theta

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

# integers beyond this magnitude are written as decimal strings
JSON_SAFE_INT = 2**53


class UsageError(Exception):
    pass


def _json_safe(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > JSON_SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def dumps(obj):
    return json.dumps(_json_safe(obj), sort_keys=True) + "\n"


def envelope(command, parameters, result, elapsed_ms):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "result": result,
        "elapsed_ms": elapsed_ms,
    }


def _form(text):
    try:
        return FloorForm.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _natural(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {v}")
    return v


def _positive(text):
    v = _natural(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# ------------------------------------------------------------------ commands


def cmd_represent(args):
    params = {"form": str(args.form), "n": args.n, "all": args.all}
    wit = search_representation(args.form, args.n)
    result = {"found": wit is not None, "witness": list(wit.as_tuple()) if wit else None}
    if args.all:
        result["count"] = representation_count(args.form, args.n)
    quiet = " ".join(map(str, result["witness"])) if wit else ""
    return params, result, quiet, EXIT_OK if wit else EXIT_NOT_FOUND


def _cached_scan(path, params):
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None
    if not isinstance(data, dict) or data.get("command") != "scan":
        return None
    result = data.get("result") or {}
    same = all(data.get("parameters", {}).get(k) == params[k] for k in ("form", "from", "to"))
    if not same or result.get("tool_version") != __version__:
        return None
    try:
        ScanReport.from_dict(result)
    except (KeyError, TypeError, ValueError):
        return None
    return data


def cmd_scan(args):
    if args.lo > args.hi:
        raise UsageError(f"--from {args.lo} exceeds --to {args.hi}")
    params = {"form": str(args.form), "from": args.lo, "to": args.hi}
    out = Path(args.out) if args.out else None
    if out is not None and out.exists():
        cached = _cached_scan(out, params)
        if cached is not None:
            quiet = " ".join(map(str, cached["result"]["exceptions"]))
            return params, cached["result"], quiet, EXIT_OK
    try:
        report = scan_range(args.form, args.lo, args.hi, workers=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = report.to_dict()
    quiet = " ".join(map(str, report.exceptions))
    return params, result, quiet, EXIT_OK


def cmd_plan(args):
    params = {"form": str(args.form), "n": args.n}
    plan = plan_for_form(args.form, args.n)
    ver = verify_plan(plan)
    result = {"plan": plan.to_dict(), "verification": ver.to_dict()}
    witness = ver.escape_witness or ver.brute_force_witness
    quiet = ver.verdict + (" " + " ".join(map(str, witness.as_tuple())) if witness else "")
    return params, result, quiet, EXIT_NOT_FOUND if ver.verdict == VIOLATED else EXIT_OK


def cmd_local(args):
    params = {
        "form": str(args.form),
        "n": args.n,
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "prime": args.prime,
    }
    residues = ResidueTriple.from_residues(args.form, args.alpha, args.beta, args.gamma)
    primes = [args.prime] if args.prime is not None else None
    if args.prime is not None and not is_prime(args.prime):
        raise UsageError(f"--prime {args.prime} is not prime")
    if primes is None:
        primes = prime_divisors(obstruction_modulus(args.form) * 2)
    try:
        statuses = local_statuses(args.form, args.n, residues, default_convention(args.form), primes)
    except PrecisionError as exc:
        raise UsageError(str(exc)) from None
    result = [s.to_dict() for s in statuses]
    quiet = " ".join(f"{s.prime}:{'yes' if s.solvable else 'no'}" for s in statuses)
    return params, result, quiet, EXIT_OK


def cmd_theta(args):
    params = {
        "form": str(args.form),
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "max": args.max,
    }
    residues = ResidueTriple.from_residues(args.form, args.alpha, args.beta, args.gamma)
    series = residue_class_theta(args.form, residues, args.max)
    return params, series.to_dict(), " ".join(map(str, series.coefficients)), EXIT_OK


def cmd_obstruct(args):
    if args.lo > args.hi:
        raise UsageError(f"--from {args.lo} exceeds --to {args.hi}")
    params = {"form": str(args.form), "from": args.lo, "to": args.hi}
    report = obstruction_scan(args.form, args.lo, args.hi)
    quiet = " ".join(str(e["n"]) for e in report["entries"])
    return params, report, quiet, EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(prog="floorform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--quiet", action="store_true", help="print only the witness / exception list")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--form", type=_form, required=True, help="a,b,c")
        p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = add("represent", cmd_represent, "find a representation of n")
    p.add_argument("--n", type=_natural, required=True)
    p.add_argument("--all", action="store_true", help="also count all signed representations")

    p = add("scan", cmd_scan, "list the n in a range that are not represented")
    p.add_argument("--from", dest="lo", type=_natural, required=True)
    p.add_argument("--to", dest="hi", type=_natural, required=True)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--out", help="write the report here; reused when it matches")

    p = add("plan", cmd_plan, "choose residues for n and verify them")
    p.add_argument("--n", type=_natural, required=True)

    p = add("local", cmd_local, "local solubility of the coset at each prime")
    p.add_argument("--n", type=_natural, required=True)
    for name in ("alpha", "beta", "gamma"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--prime", type=_positive)

    p = add("theta", cmd_theta, "theta coefficients of a residue class")
    for name in ("alpha", "beta", "gamma"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--max", type=_natural, required=True)

    p = add("obstruct", cmd_obstruct, "square-class obstructions along a range")
    p.add_argument("--from", dest="lo", type=_natural, required=True)
    p.add_argument("--to", dest="hi", type=_natural, required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        params, result, quiet, code = args.func(args)
    except (UsageError, HypothesisError) as exc:
        print(f"floorform {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = int((time.perf_counter() - t0) * 1000)
    report = envelope(args.command, params, result, elapsed)
    if getattr(args, "out", None):
        try:
            Path(args.out).write_text(dumps(report), encoding="utf-8")
        except OSError as exc:
            print(f"floorform {args.command}: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.quiet:
        print(quiet)
    else:
        sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
