"""Command-line runner for the identity catalog and the component checks.

    hbessel list
    hbessel run [--filter GLOB] [--draws N] [--seed S] [--tol T] [--format F]
                [--N SIZE] [--threads K] [--out PATH] [--timing]
    hbessel specfun-check
    hbessel integrals [--draws N] [--seed S] [--tol T]
    hbessel oracle [--N SIZE]

Exit status is 0 when everything passes, 1 when any check fails and 2 for
bad arguments.
"""

import argparse
import csv
import io
import json
import os
import sys

from . import arith, engine, quad, specfun

FORMATS = ("table", "json-lines", "csv")
CSV_COLUMNS = ("id", "params", "lhs", "rhs", "abs_diff", "rel_diff", "lhs_tail", "rhs_tail", "quad_err",
               "terms_lhs", "terms_rhs", "pass", "ms")
TOL_RANGE = (1e-12, 1e-2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def _positive_int(minimum):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {v}")
        return v
    return parse


def _tol(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}")
    if not (v > 0 and v <= TOL_RANGE[1]):
        raise argparse.ArgumentTypeError(f"tol must be in (0, {TOL_RANGE[1]:g}], got {text}")
    return v


def build_parser():
    p = _Parser(prog="hbessel", description="Numerical verification of Bessel-series identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="print the identity catalog")

    run = sub.add_parser("run", help="evaluate catalog identities and emit reports")
    run.add_argument("--filter", default="*", help="glob on identity ids (default: *)")
    run.add_argument("--draws", type=_positive_int(1), default=3)
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--tol", type=_tol, default=1e-7)
    run.add_argument("--format", choices=FORMATS, default="json-lines")
    run.add_argument("--N", type=_positive_int(64), default=4096, help="initial coefficient table size")
    run.add_argument("--threads", type=_positive_int(1), default=None)
    run.add_argument("--out", default=None, help="write reports here instead of stdout")
    run.add_argument("--timing", action="store_true", help="fill the ms field (output no longer reproducible)")

    sub.add_parser("specfun-check", help="special-function invariant battery")

    integ = sub.add_parser("integrals", help="table integrals against their closed forms")
    integ.add_argument("--draws", type=_positive_int(1), default=20)
    integ.add_argument("--seed", type=int, default=0)
    integ.add_argument("--tol", type=_tol, default=1e-7)

    orc = sub.add_parser("oracle", help="fast arithmetic tables against brute-force oracles")
    orc.add_argument("--N", type=_positive_int(64), default=200)
    return p


def _fmt(v):
    if v is None:
        return "nan"
    if isinstance(v, list):
        return f"{v[0]:.12g}{v[1]:+.12g}j"
    return f"{v:.12g}"


def _params_text(params):
    return " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in params.items())


def format_reports(reports, fmt, timing=False):
    rows = [r.to_dict(timing) for r in reports]
    if fmt == "json-lines":
        return "".join(json.dumps(row, separators=(",", ":")) + "\n" for row in rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([row["id"], json.dumps(row["params"], separators=(",", ":")),
                        json.dumps(row["lhs"]), json.dumps(row["rhs"]), row["abs_diff"], row["rel_diff"],
                        row["lhs_tail"], row["rhs_tail"], row["quad_err"], row["terms"]["lhs"],
                        row["terms"]["rhs"], row["pass"], "" if row["ms"] is None else row["ms"]])
        return buf.getvalue()
    lines = [f"{'id':<16} {'pass':<5} {'abs_diff':>10} {'lhs':>22} {'rhs':>22}  params"]
    for row in rows:
        diff = "nan" if row["abs_diff"] is None else f"{row['abs_diff']:.2e}"
        lines.append(f"{row['id']:<16} {'ok' if row['pass'] else 'FAIL':<5} {diff:>10} "
                     f"{_fmt(row['lhs']):>22} {_fmt(row['rhs']):>22}  {_params_text(row['params'])}")
    return "\n".join(lines) + "\n"


def _cmd_list(args, out):
    for e in engine.catalog_entries():
        variants = "; ".join(engine._variant_label(v) or "-" for v in e.variants)
        out.write(f"{e.id:<16} {e.title}  [{variants}]\n")
    return 0


def _threads(args):
    env = os.environ.get("HB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"hbessel: ignoring invalid HB_THREADS={env!r}", file=sys.stderr)
    return args.threads


def _cmd_run(args, out):
    if args.tol < TOL_RANGE[0]:
        print(f"hbessel: warning: tol {args.tol:g} is below {TOL_RANGE[0]:g}; failures are expected",
              file=sys.stderr)
    reports = engine.run_suite(args.filter, args.draws, args.seed, args.tol, args.N, _threads(args))
    if not reports:
        print(f"hbessel: no identity matches {args.filter!r}", file=sys.stderr)
        return 2
    text = format_reports(reports, args.format, args.timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        extra = f" ({r.notes})" if r.notes else ""
        print(f"FAIL {r.identity_id} {_params_text(r.params)}: |diff|={r.abs_diff:.3g} "
              f"tol={r.tol:.3g} err={r.lhs.abs_error + r.rhs.abs_error:.3g}{extra}", file=sys.stderr)
    return 1 if failed else 0


def _print_checks(results, out):
    for r in results:
        out.write(f"{'ok' if r.passed else 'FAIL':<5} {r.name:<34} worst={r.worst:.3g} tol={r.tol:.3g} "
                  f"cases={r.cases}\n")
    return 0 if all(r.passed for r in results) else 1


def _cmd_specfun(args, out):
    return _print_checks(specfun.invariant_battery(), out)


def _cmd_integrals(args, out):
    reports = quad.table_battery(args.draws, args.seed, args.tol)
    out.write(format_reports(reports, "table"))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_oracle(args, out):
    return _print_checks(arith.oracle_battery(args.N, min(args.N, 100)), out)


_COMMANDS = {
    "list": _cmd_list,
    "run": _cmd_run,
    "specfun-check": _cmd_specfun,
    "integrals": _cmd_integrals,
    "oracle": _cmd_oracle,
}


def main(argv=None, out=None):
    """Entry point; returns the exit status."""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return _COMMANDS[args.command](args, out)


if __name__ == "__main__":
    sys.exit(main())
