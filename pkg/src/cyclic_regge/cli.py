"""Command-line interface: ``cyclic-regge {complex,curvature,optimize,admissible}``.

Exit codes: 0 success, 2 argument error, 3 metric error, 4 non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .complex import Complex, build_complex
from .conformal import cyclic_admissibility, find_critical_point
from .curvature import Metric, check_csc, cyclic_metric, fmt, report
from .errors import ArgumentError, DomainError, NumericalError

EXIT_OK, EXIT_ARGS, EXIT_METRIC, EXIT_NOCONV = 0, 2, 3, 4


class UsageError(Exception):
    pass


def read_lengths(path: str, c: Complex) -> np.ndarray:
    """Read ``i,j,value`` rows (0-based vertices), one per edge."""
    out = np.full(len(c.edges), np.nan)
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                i, j, val = int(row[0]), int(row[1]), float(row[2])
            except (ValueError, IndexError):
                if lineno == 1:  # header
                    continue
                raise UsageError(f"{path}:{lineno}: expected 'i,j,value'") from None
            key = (min(i, j), max(i, j))
            if key not in c.edge_index:
                raise UsageError(f"{path}:{lineno}: ({i}, {j}) is not an edge for n={c.n}")
            out[c.edge_index[key]] = val
    missing = [c.edges[k] for k in np.flatnonzero(np.isnan(out))]
    if missing:
        raise UsageError(f"{path}: {len(missing)} edges missing, first {missing[0]}")
    return out


def read_f(path: str, n: int) -> np.ndarray:
    """Read ``v,value`` rows, one per vertex."""
    out = np.full(n, np.nan)
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                v, val = int(row[0]), float(row[1])
            except (ValueError, IndexError):
                if lineno == 1:
                    continue
                raise UsageError(f"{path}:{lineno}: expected 'v,value'") from None
            if not 0 <= v < n:
                raise UsageError(f"{path}:{lineno}: vertex {v} out of range")
            out[v] = val
    if np.any(np.isnan(out)):
        raise UsageError(f"{path}: values missing for vertices {np.flatnonzero(np.isnan(out)).tolist()}")
    return out


def parse_levels(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--levels must be comma-separated numbers, got {text!r}") from None


def _complex(args) -> Complex:
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 5:
        raise UsageError(f"--n must be >= 5, got {args.n}")
    return build_complex(args.n)


def _levels(args, c):
    levels = parse_levels(args.levels)
    if len(levels) != c.m + 1:
        raise UsageError(f"n={c.n} needs m+1={c.m + 1} levels, got {len(levels)}")
    return levels


def _base(args, c, default_ones=False) -> np.ndarray:
    if args.lengths and args.levels:
        raise UsageError("give at most one of --lengths and --levels")
    if args.lengths:
        return read_lengths(args.lengths, c)
    if args.levels:
        return cyclic_metric(c, _levels(args, c)).lengths
    if default_ones:
        return np.ones(len(c.edges))
    raise UsageError("one of --lengths or --levels is required")


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_complex(args) -> int:
    c = _complex(args)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "c", "d", "type"])
        for t, tt in zip(c.tetrahedra, c.types):
            w.writerow([*t, str(tt)])
        _emit(args, buf.getvalue())
    else:
        _emit(args, c.to_json())
    return EXIT_OK


def cmd_curvature(args) -> int:
    c = _complex(args)
    base = _base(args, c)
    g = Metric(c, base)
    r = report(c, g)
    verdict = check_csc(r, args.tol)
    if args.format == "csv":
        _emit(args, r.to_csv())
    else:
        doc = r.to_dict()
        doc["csc"] = verdict.to_dict()
        _emit(args, json.dumps(doc, indent=2))
    print(f"LCSC: {'pass' if verdict.lcsc else 'fail'}", file=sys.stderr)
    print(f"VCSC: {'pass' if verdict.vcsc else 'fail'}", file=sys.stderr)
    return EXIT_OK


def cmd_optimize(args) -> int:
    c = _complex(args)
    base = _base(args, c, default_ones=True)
    if args.f0:
        f0 = read_f(args.f0, c.n)
    elif args.seed is not None:
        f0 = np.random.default_rng(args.seed).uniform(-args.perturb, args.perturb, c.n)
    else:
        f0 = np.zeros(c.n)
    tol = 1e-8 if args.tol is None else args.tol
    res = find_critical_point(c, base, f0, target=args.target, tol=tol, max_iter=args.max_iter)
    adm = cyclic_admissibility(c, base)
    verdict = check_csc(res.report, 1e-6)
    if args.trace:
        Path(args.trace).write_text(res.trace_csv())
    if args.format == "csv":
        _emit(args, res.trace_csv())
    else:
        doc = {
            "metadata": {
                "n": c.n,
                "target": args.target,
                "seed": args.seed,
                "tol": tol,
                "status": res.status,
                "converged": res.converged,
                "iterations": res.iterations,
                "class_admits_cyclic_metric": adm.admissible,
                "admissibility_residual": adm.residual,
            },
            "f": [float(x) for x in res.f],
            "csc": verdict.to_dict(),
            "report": res.report.to_dict(),
            "trace": [
                {"iteration": t.iteration, "value": t.value, "grad_norm": t.grad_norm,
                 "step": t.step, "min_cm": t.min_cm}
                for t in res.trace
            ],
        }
        _emit(args, json.dumps(doc, indent=2))
    print(f"status: {res.status} after {res.iterations} steps", file=sys.stderr)
    return EXIT_OK if res.converged else EXIT_NOCONV


def cmd_admissible(args) -> int:
    c = _complex(args)
    base = _base(args, c, default_ones=True)
    res = cyclic_admissibility(c, base)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["admissible", "residual"])
        w.writerow([str(res.admissible).lower(), fmt(res.residual)])
        if res.admissible:
            w.writerow([])
            w.writerow(["v", "f"])
            for v, x in enumerate(res.f):
                w.writerow([v, fmt(x)])
            w.writerow([])
            w.writerow(["D", "level"])
            for k, x in enumerate(res.levels, 1):
                w.writerow([k, fmt(x)])
        _emit(args, buf.getvalue())
    else:
        _emit(args, json.dumps({"n": c.n, **res.to_dict()}, indent=2))
    print("admissible" if res.admissible else "inadmissible", file=sys.stderr)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, help="number of vertices (>= 5)")
    common.add_argument("--levels", help="comma-separated L_1..L_{m+1} of a cyclic length metric")
    common.add_argument("--lengths", help="CSV file of 'i,j,value' edge lengths")
    common.add_argument("--f0", help="CSV file of 'v,value' initial conformal factors")
    common.add_argument("--tol", type=float, default=None, help="tolerance")
    common.add_argument("--seed", type=int, default=None, help="RNG seed for random f0")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    p = _Parser(prog="cyclic-regge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("complex", parents=[common], help="facets, census and symmetry of the boundary of C(n,4)")
    sub.add_parser("curvature", parents=[common], help="curvature report and CSC verdicts")
    opt = sub.add_parser("optimize", parents=[common], help="critical point search in a conformal class")
    opt.add_argument("--target", choices=("lehr", "vehr"), default="lehr")
    opt.add_argument("--max-iter", type=int, default=500)
    opt.add_argument("--perturb", type=float, default=0.05, help="sup-norm of random f0 when --seed is given")
    opt.add_argument("--trace", help="also write the optimizer trace CSV here")
    sub.add_parser("admissible", parents=[common], help="does the conformal class contain a cyclic length metric")
    return p


COMMANDS = {
    "complex": cmd_complex,
    "curvature": cmd_curvature,
    "optimize": cmd_optimize,
    "admissible": cmd_admissible,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "curvature" and args.tol is None:
            args.tol = 1e-9
        if args.tol is not None and args.tol <= 0:
            raise UsageError("--tol must be positive")
        return COMMANDS[args.command](args)
    except (UsageError, ArgumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (DomainError, NumericalError) as exc:
        print(f"metric error: {exc}", file=sys.stderr)
        return EXIT_METRIC


if __name__ == "__main__":
    sys.exit(main())
