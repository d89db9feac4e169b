"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors
(including unsupported element/space combinations).
"""

from __future__ import annotations

import argparse
import io
import sys

from hpdual import audit
from hpdual.biorth import (
    DEFAULT_MARGIN, DEFAULT_TOL, assemble_gram, pattern_to_csv, pattern_to_pbm,
    sparsity_pattern, verify_biorthogonality,
)
from hpdual.catalog import WHICH, FamilySpec, gram_families
from hpdual.project import DEFAULT_MARGIN as PROJECT_MARGIN
from hpdual.project import SCALAR_FUNCTIONS, builtin_function, project
from hpdual.textio import dumps, num

COMMANDS = ("verify", "gram", "sparsity", "coeffs", "project", "tables")
FORMATS = {
    "verify": ("json", "csv"),
    "gram": ("csv", "json"),
    "sparsity": ("pbm", "csv", "json"),
    "coeffs": ("csv", "json"),
    "project": ("json", "csv"),
    "tables": ("csv", "json"),
}


class UsageError(Exception):
    pass


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _degree(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("polynomial degree must be at least 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--element", choices=("quad", "hex", "tri", "tet"), required=True)
    common.add_argument("--space", choices=("h1", "hcurl"), required=True)
    common.add_argument("--p", type=_degree, required=True)
    common.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    common.add_argument("--format", choices=("csv", "json", "pbm"))
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--mode", choices=("oracle", "paper"), default="oracle",
                        help="dual scaling: measured (oracle) or published (paper)")
    common.add_argument("--margin", type=int, default=None,
                        help="extra quadrature degree beyond 2p")

    parser = argparse.ArgumentParser(
        prog="hpdual", description="Dual shape functions for hp finite elements.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "check biorthogonality and print a report",
        "gram": "write a Gram matrix",
        "sparsity": "write the nonzero pattern of a Gram matrix",
        "coeffs": "compare published recombination coefficients with measured ones",
        "project": "interpolate a built-in test function",
        "tables": "compare measured diagonal constants with closed forms",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name in ("verify", "gram", "sparsity"):
            p.add_argument("--which", choices=WHICH, default="dual",
                           help="dual: basis vs duals; aux: split fields vs "
                                "auxiliary duals; basis: basis vs auxiliary duals")
        if name == "project":
            p.add_argument("--function", choices=sorted(SCALAR_FUNCTIONS), default="sin")
    return parser


def _csv_row(values) -> str:
    out = []
    for v in values:
        if v is None:
            out.append("")
        elif isinstance(v, float):
            out.append(num(v))
        else:
            out.append(f'"{v}"' if "," in str(v) else str(v))
    return ",".join(out) + "\n"


def _gram(args, spec):
    rows, cols = gram_families(spec, getattr(args, "which", "dual"), args.mode)
    margin = DEFAULT_MARGIN if args.margin is None else args.margin
    return assemble_gram(rows, cols, spec.p, margin)


def _run_verify(args, spec, fmt):
    which = args.which
    mode = "identity" if which == "dual" else "diagonal"
    report = verify_biorthogonality(_gram(args, spec), args.tol, mode=mode)
    data = report.to_dict()
    data.update({"which": which, "dual_mode": args.mode})
    if fmt == "json":
        text = dumps(data) + "\n"
    else:
        text = "".join(_csv_row([k, v if not isinstance(v, list) else
                                 ";".join(num(x) for x in v)])
                       for k, v in data.items())
    return text, 0 if report.passed else 1


def _run_gram(args, spec, fmt):
    gram = _gram(args, spec)
    return (gram.to_csv() if fmt == "csv" else gram.to_json()), 0


def _run_sparsity(args, spec, fmt):
    gram = _gram(args, spec)
    pattern = sparsity_pattern(gram, args.tol)
    if fmt == "pbm":
        return pattern_to_pbm(pattern), 0
    if fmt == "csv":
        return pattern_to_csv(pattern), 0
    return dumps({"rows": [str(r) for r in gram.rows],
                  "cols": [str(c) for c in gram.cols],
                  "pattern": [[int(v) for v in row] for row in pattern]}) + "\n", 0


def _run_coeffs(args, spec, fmt):
    rows = audit.coefficient_table(spec.element, spec.space, spec.p)
    if fmt == "json":
        return dumps([{"index": str(r.index), "quantity": r.quantity,
                       "value": r.value(args.mode), "paper": r.paper,
                       "oracle": r.oracle, "ratio": r.ratio,
                       "discrepancy": r.status} for r in rows]) + "\n", 0
    out = io.StringIO()
    out.write(f"# mode={args.mode}\n")
    out.write("index,quantity,value,paper,oracle,paper/oracle,discrepancy\n")
    for r in rows:
        out.write(_csv_row([str(r.index), r.quantity, r.value(args.mode), r.paper,
                            r.oracle, r.ratio, r.status]))
    return out.getvalue(), 0


def _run_tables(args, spec, fmt):
    rows = audit.diagonal_table(spec.element, spec.space, spec.p)
    if fmt == "json":
        return dumps([{"index": str(r.index), "measured": r.measured,
                       "printed": r.printed, "derived": r.derived,
                       "ratio": r.ratio, "discrepancy": r.status}
                      for r in rows]) + "\n", 0
    out = io.StringIO()
    out.write("index,measured,printed,derived,measured/printed,discrepancy\n")
    for r in rows:
        out.write(_csv_row([str(r.index), r.measured, r.printed, r.derived,
                            r.ratio, r.status]))
    return out.getvalue(), 0


def _run_project(args, spec, fmt):
    margin = PROJECT_MARGIN if args.margin is None else args.margin
    result = project(builtin_function(args.function, spec.space), spec, margin)
    if fmt == "json":
        return result.to_json(), 0
    out = io.StringIO()
    out.write("index,value\n")
    for idx, v in result.coefficients.items():
        out.write(_csv_row([str(idx), float(v)]))
    out.write(_csv_row(["l2_error", result.l2_error]))
    return out.getvalue(), 0


RUNNERS = {"verify": _run_verify, "gram": _run_gram, "sparsity": _run_sparsity,
           "coeffs": _run_coeffs, "project": _run_project, "tables": _run_tables}


def run(args) -> int:
    fmt = args.format or FORMATS[args.command][0]
    if fmt not in FORMATS[args.command]:
        raise UsageError(f"format {fmt!r} is not available for {args.command}")
    try:
        spec = FamilySpec(args.element, args.space, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text, status = RUNNERS[args.command](args, spec, fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hpdual: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
