"""Command-line front end.

Subcommands: `audit` (bracket-table consistency), `dims` (brute-force
dimension tables vs predictions over parameter grids), `cocycles`
(re-derived explicit cocycles with verification), `selftest` (invariant
suites). Rationals on the command line are exact "p/q" or integer
literals; floats are rejected.

Exit codes: 0 all checks pass, 1 a mathematical mismatch, 2 usage or
input error.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import algebra, engine
from .cochains import (coboundary, cochain_to_json, cup, is_reduced,
                       make_f_k, make_ftilde_k, make_h_lambda,
                       restrict_sl2)
from .superdiff import op_str
from .weightmod import to_oppoly

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def parse_rational(text):
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(
            f"{text!r}: rationals must be exact p/q or integer literals")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"{text!r}: {exc}") from None


def parse_grid(spec):
    """'halfints:LO..HI' -> all half-integer pairs; 'pairs:l,m;l,m' -> list."""
    kind, _, body = spec.partition(":")
    if kind == "halfints":
        lo_s, _, hi_s = body.partition("..")
        lo, hi = parse_rational(lo_s), parse_rational(hi_s)
        vals = []
        v = lo
        while v <= hi:
            vals.append(v)
            v += Fraction(1, 2)
        return [(a, b) for a in vals for b in vals]
    if kind == "pairs":
        out = []
        for chunk in body.split(";"):
            if not chunk.strip():
                continue
            l_s, m_s = chunk.split(",")
            out.append((parse_rational(l_s), parse_rational(m_s)))
        return out
    raise argparse.ArgumentTypeError(f"unknown grid spec {spec!r}")


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _reports_csv(reports):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=engine.CSV_FIELDS)
    writer.writeheader()
    for rep in reports:
        for row in rep.csv_rows():
            writer.writerow(row)
    return buf.getvalue().rstrip("\n")


def cmd_audit(args):
    if args.no_repair:
        table = (algebra.printed_table() if args.table == "printed"
                 else algebra.adopted_table())
        failures = table.jacobi_failures()
        payload = {
            "variant": args.table,
            "jacobi_failures_printed": [
                {"triple": list(t), "defect": algebra.format_combo(d)}
                for t, d in failures
            ],
        }
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(["triple", "defect"])
            for t, d in failures:
                writer.writerow([" ".join(t), algebra.format_combo(d)])
            _emit(buf.getvalue().rstrip("\n"), args.out)
        else:
            _emit(json.dumps(payload, indent=2), args.out)
        return EXIT_MISMATCH if failures else EXIT_OK
    try:
        report = engine.run_audit()
    except algebra.NoConsistentRepair as exc:
        print(f"audit failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = report.to_json()
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["pair", "from", "to"])
        for ch in payload["changes"]:
            writer.writerow([ch["pair"], ch["from"], ch["to"]])
        _emit(buf.getvalue().rstrip("\n"), args.out)
    else:
        _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def cmd_dims(args):
    if args.grid:
        pairs = parse_grid(args.grid)
    elif args.lam is not None and args.mu is not None:
        pairs = [(args.lam, args.mu)]
    else:
        print("dims: provide --lambda/--mu or --grid", file=sys.stderr)
        return EXIT_USAGE
    reports = engine.grid_reports(pairs, K=args.kmax, nmax=args.nmax,
                                  wmax=args.wmax, threads=args.threads)
    if args.format == "csv":
        _emit(_reports_csv(reports), args.out)
    else:
        payload = [r.to_json() for r in reports]
        _emit(json.dumps(payload[0] if len(payload) == 1 else payload,
                         indent=2), args.out)
    return EXIT_OK if all(r.match for r in reports) else EXIT_MISMATCH


def _verify_cocycle(f, table):
    checks = {
        "closed": coboundary(f, table).is_zero(),
        "reduced": is_reduced(f),
        "nontrivial": engine.is_coboundary(f, table) is None,
    }
    res = restrict_sl2(f)
    checks["restriction_nontrivial"] = (
        not res.is_zero() and engine.is_coboundary(res, table) is None)
    return checks


def cmd_cocycles(args):
    table = algebra.adopted_table()
    try:
        if args.kind == "h":
            if args.lam is None:
                print("cocycles --kind h needs --lambda", file=sys.stderr)
                return EXIT_USAGE
            f, ratios = make_h_lambda(args.lam, table=table)
        elif args.kind == "f":
            f, ratios = make_f_k(args.k, table=table)
        elif args.kind == "ftilde":
            f, ratios = make_ftilde_k(args.k, table=table)
        else:  # cup
            fk, _ = make_f_k(args.k, table=table)
            h, _ = make_h_lambda(Fraction(-args.k, 2), table=table)
            omega, variant = cup(fk, h, table)
            gf = engine.gelfand_fuchs_check(args.k, table)
            slots = {
                algebra.monomial_str(u): op_str(to_oppoly(v))
                for u, v in sorted(omega.values.items())
            }
            checks = {
                "closed": coboundary(omega, table).is_zero(),
                "nontrivial": engine.is_coboundary(omega, table) is None,
                "restriction_nontrivial":
                    engine.is_coboundary(restrict_sl2(omega), table)
                    is None,
            }
            payload = {"kind": "cup", "k": args.k, "slots": slots,
                       "cup_sign_variant": variant,
                       "gelfand_fuchs": gf, "checks": checks}
            _emit(json.dumps(payload, indent=2), args.out)
            return EXIT_OK if all(checks.values()) else EXIT_MISMATCH
    except Exception as exc:
        print(f"cocycles: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    checks = _verify_cocycle(f, table)
    payload = {
        "kind": args.kind,
        "k": args.k,
        "lambda": str(args.lam) if args.lam is not None else None,
        "slots": {algebra.monomial_str(u): op_str(to_oppoly(v))
                  for u, v in sorted(f.values.items())},
        "ratios_to_printed": {s: str(r) for s, r in sorted(ratios.items())},
        "checks": checks,
        "cochain": cochain_to_json(f),
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK if all(checks.values()) else EXIT_MISMATCH


def cmd_selftest(args):
    results = engine.selftest(args.suite)
    payload = {
        "suite": args.suite,
        "results": [{"name": n, "ok": ok, "detail": d}
                    for n, ok, d in results],
        "ok": all(ok for _, ok, _ in results),
    }
    _emit(json.dumps(payload, indent=2), args.out)
    if payload["ok"]:
        return EXIT_OK
    failing = [n for n, ok, _ in results if not ok]
    print(f"selftest failures: {', '.join(failing)}", file=sys.stderr)
    return EXIT_MISMATCH


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ospcoho",
        description="Exact cohomology of osp(1|2) weight modules of "
                    "differential operators on the superline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="bracket-table consistency audit")
    p_audit.add_argument("--table", choices=("printed", "repaired"),
                         default="printed")
    p_audit.add_argument("--no-repair", action="store_true",
                         help="only list Jacobi failures of the table")
    p_audit.add_argument("--format", choices=("json", "csv"),
                         default="json")
    p_audit.add_argument("--out", default=None)
    p_audit.set_defaults(func=cmd_audit)

    p_dims = sub.add_parser("dims", help="dimension tables vs predictions")
    p_dims.add_argument("--lambda", dest="lam", type=parse_rational,
                        default=None)
    p_dims.add_argument("--mu", type=parse_rational, default=None)
    p_dims.add_argument("--grid", default=None,
                        help="halfints:LO..HI or pairs:l,m;l,m;...")
    p_dims.add_argument("--kmax", type=int, default=None,
                        help="truncation depth K (deepened by the guard)")
    p_dims.add_argument("--nmax", type=int, default=engine.NMAX_DEFAULT,
                        choices=range(0, 7))
    p_dims.add_argument("--wmax", type=parse_rational,
                        default=engine.WMAX_DEFAULT,
                        help="half-integer weight window for n <= 2")
    p_dims.add_argument("--threads", type=int, default=None,
                        help="parallel grid workers "
                             "(default: available parallelism)")
    p_dims.add_argument("--format", choices=("json", "csv"),
                        default="json")
    p_dims.add_argument("--out", default=None)
    p_dims.set_defaults(func=cmd_dims)

    p_coc = sub.add_parser("cocycles", help="re-derived explicit cocycles")
    p_coc.add_argument("--kind", choices=("h", "f", "ftilde", "cup"),
                       required=True)
    p_coc.add_argument("--k", type=int, default=0)
    p_coc.add_argument("--lambda", dest="lam", type=parse_rational,
                       default=None)
    p_coc.add_argument("--out", default=None)
    p_coc.set_defaults(func=cmd_cocycles)

    p_self = sub.add_parser("selftest", help="run invariant suites")
    p_self.add_argument("--suite", default="all",
                        choices=("algebra", "module", "complex", "oracle",
                                 "all"))
    p_self.add_argument("--out", default=None)
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
