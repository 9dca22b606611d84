"""Command-line driver: counting runs, equidistribution reports, constant
tables, geometry self-tests and oracle comparisons.

Subcommands: count, equidist, constants, geom-selftest, oracle.  Exact
rationals are serialized as strings "p/q"; decimals only appear in
clearly labeled display fields.  Identical configurations produce
byte-identical JSON regardless of the thread count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import constants as K
from . import counting as C
from . import hyperbolic as G
from .orders import Order, OrderError, builtin_order, load_order_spec

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

CACHE_ENV = "HEIS_MERTENS_CACHE"


def _load_order(name: str) -> Order:
    try:
        if name.lower() in ("hurwitz", "d3", "a3"):
            return builtin_order(name)
        if not os.path.exists(name):
            raise OrderError(f"no such order or order-spec file: {name}")
        return load_order_spec(name)
    except (OrderError, OSError, json.JSONDecodeError) as exc:
        raise SystemExit(_usage_error(f"invalid order: {exc}"))


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _parse_grid(text: str):
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise SystemExit(_usage_error(f"bad s grid '{text}'"))


def _emit(payload: dict, out: str, fmt: str, csv_rows=None):
    blob = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in csv_rows:
            writer.writerow(row)
        blob = buf.getvalue()
    if out == "-":
        sys.stdout.write(blob)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(blob)


def _checkpoint_path(args, tag: str):
    base = getattr(args, "cache", None) or os.environ.get(CACHE_ENV)
    if not base:
        return None
    os.makedirs(base, exist_ok=True)
    return os.path.join(base, tag + ".jsonl")


def cmd_count(args) -> int:
    order = _load_order(args.order)
    if args.s_grid:
        grid = _parse_grid(args.s_grid)
    elif args.s_max is not None:
        grid = [Fraction(args.s_max)]
    else:
        return _usage_error("count needs --s-grid or --s-max")
    if sorted(grid) != grid:
        return _usage_error("s grid must be ascending")
    if args.scale < 1:
        return _usage_error("scale must be >= 1")
    d = K.ArithmeticData(order.D_A, len(order.units))
    ref = K.mertens_constant(d)
    ckpt = _checkpoint_path(
        args, f"count_{order.name or 'custom'}_{max(grid)}_{args.scale}")
    table = C.count_table(order, grid, scale=args.scale,
                          reference_constant=ref.value(),
                          reference_symbolic=str(ref),
                          checkpoint_path=ckpt, threads=args.threads)
    payload = table.to_json_dict()
    csv_rows = [("s", "count", "ratio")]
    for (s, cnt), ratio in zip(table.rows, table.ratios or [None] * len(table.rows)):
        csv_rows.append((C._frac_str(s), cnt,
                         "" if ratio is None else f"{ratio:.12g}"))
    _emit(payload, args.out, args.format, csv_rows)
    return EXIT_OK


def cmd_equidist(args) -> int:
    order = _load_order(args.order)
    rep = C.equidist_histogram(order, Fraction(args.s), threads=args.threads)
    payload = rep.to_json_dict()
    csv_rows = [("cell", "observed", "expected")]
    for idx, (o, e) in enumerate(zip(rep.observed, rep.expected)):
        csv_rows.append((idx, o, f"{e:.12g}"))
    _emit(payload, args.out, args.format, csv_rows)
    return EXIT_OK


def cmd_constants(args) -> int:
    try:
        d = K.ArithmeticData(args.da, args.units, args.ha)
    except ValueError as exc:
        return _usage_error(str(exc))
    payload = K.constants_report(d, n=args.n, with_quadrature=not args.no_quadrature)
    _emit(payload, args.out, "json")
    return EXIT_OK


def cmd_geom_selftest(args) -> int:
    rep = G.geom_selftest(tol_limit=args.tol_limit)
    payload = {k: (bool(v) if isinstance(v, bool) else float(v))
               for k, v in rep.items()}
    _emit(payload, args.out, "json")
    return EXIT_OK if rep["pass"] else EXIT_MISMATCH


def cmd_oracle(args) -> int:
    order = _load_order(args.order)
    smax = int(args.s)
    rows = []
    ok = True
    for s in range(1, smax + 1):
        psi, _ = C.psi_count(order, s, with_triples=False)
        oracle = C.brute_force_psi(order, s)
        rows.append({"s": s, "psi": psi, "oracle": oracle,
                     "match": psi == oracle})
        ok &= psi == oracle
    _emit({"order": order.name, "rows": rows, "all_match": ok}, args.out, "json")
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heisquat",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        if order:
            p.add_argument("--order", default="hurwitz",
                           help="builtin name (hurwitz, d3) or order-spec JSON path")
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("count", help="counting run over an s grid")
    common(p)
    p.add_argument("--s-grid", help="comma separated ascending s values")
    p.add_argument("--s-max", help="single s value")
    p.add_argument("--scale", type=int, default=1,
                   help="congruence scale: alpha, c restricted to scale*O")
    p.add_argument("--cache", help=f"checkpoint dir (or ${CACHE_ENV})")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("equidist", help="128-cell equidistribution histogram")
    common(p)
    p.add_argument("--s", required=True)
    p.set_defaults(func=cmd_equidist)

    p = sub.add_parser("constants", help="closed-form constant table")
    common(p, order=False)
    p.add_argument("--da", type=int, required=True)
    p.add_argument("--units", type=int, required=True)
    p.add_argument("--ha", type=int, default=None)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--no-quadrature", action="store_true")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("geom-selftest", help="geometry kernel residual report")
    common(p, order=False)
    p.add_argument("--tol-limit", type=float, default=1e-6)
    p.set_defaults(func=cmd_geom_selftest)

    p = sub.add_parser("oracle", help="psi_count vs brute-force oracle")
    common(p)
    p.add_argument("--s", required=True, help="check all integer s up to this")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
