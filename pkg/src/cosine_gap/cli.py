"""Command-line frontend: ``cosine-gap <command> ...``.

Exit status is 0 on success, 1 when an operation fails or a postcondition
does not hold, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .chebyshev import sup_cheb_distance
from .decomposition import boundedness_probe, decompose, rigidity_check
from .errors import CosineGapError, DomainError
from .kronecker import running_sup
from .matrix_calculus import (
    SeriesOptions,
    alpha_coefficients,
    coefficient_partial_sums,
)
from .matrix_io import load_matrix
from .omega import enumerate_omega, scalar_distance
from .selftest import run_selftest

THREADS_ENV = "COSINE_GAP_THREADS"


def _workers():
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be a nonnegative integer, got {raw!r}")
    if n < 0:
        raise DomainError(f"{THREADS_ENV} must be a nonnegative integer, got {raw!r}")
    return n if n > 0 else (os.cpu_count() or 1)


def _num(x):
    """Shortest text for a float, dropping a trailing ``.0``."""
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2**53 else repr(x)


def _parse_number(text):
    try:
        return int(text), True
    except ValueError:
        pass
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return x, False


def _uint(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return n


def _emit(args, record, rows=None, header=None):
    """Print ``record`` as json, or ``rows`` as tsv, or key/value lines."""
    if args.format == "json":
        print(json.dumps(record, indent=2))
    elif args.format == "tsv":
        if rows is None:
            header, rows = ["key", "value"], [(k, v) for k, v in record.items()]
        print("\t".join(header))
        for row in rows:
            print("\t".join(_cell(v) for v in row))
    else:
        for k, v in record.items():
            print(f"{k}: {_cell(v)}")


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def cmd_distance(args):
    (x, xint), (y, yint) = args.x, args.y
    if xint and yint and x > 0 and y > 0:
        res = sup_cheb_distance(x, y)
        record = {"value": res.value, "t_star": res.t_star, "u_star": res.u_star,
                  "method": "chebyshev_exact", "lower": res.value, "upper": res.value,
                  "certified": res.certified}
        ok = res.certified
    else:
        rep = scalar_distance(x, y, kronecker_n=args.n_max)
        record = {"value": rep.value, "t_star": rep.t_star, "method": rep.method,
                  "lower": rep.lower, "upper": rep.upper}
        ok = rep.lower <= rep.value <= rep.upper
    if args.format == "human":
        print(_num(record["value"]))
        for k, v in list(record.items())[1:]:
            print(f"{k}: {_cell(v)}")
    else:
        _emit(args, record)
    return 0 if ok else 1


def cmd_omega(args):
    om = enumerate_omega(args.a, args.m, workers=_workers())
    # Omega(0, m) is the single frequency 0
    members = [{"ratio": str(r) if om.base else "0", "value": r.value, "distance": d}
               for r, d in zip(om.members, om.distances)]
    if args.format == "json":
        print(json.dumps({"a": om.base, "m": om.budget, "candidate_bound": om.candidate_bound,
                          "members": members}, indent=2))
    elif args.format == "tsv":
        _emit(args, {}, [(r["ratio"], r["value"], r["distance"]) for r in members],
              ["ratio", "value", "distance"])
    else:
        print("{" + ", ".join(r["ratio"] for r in members) + "}")
        for r in members:
            print(f"{r['ratio']}\t{r['value']!r}\t{r['distance']!r}")
    return 0


def cmd_decompose(args):
    dec = decompose(load_matrix(args.matrix), args.a, args.opts)
    record = dec.to_dict()
    if args.format == "json":
        print(json.dumps(record, indent=2))
    elif args.format == "tsv":
        rows = [(j, b) for j, b in enumerate(dec.frequencies)]
        _emit(args, record, rows, ["j", "frequency"])
    else:
        print(f"k: {dec.k}")
        print(f"frequencies: {_cell([float(b) for b in dec.frequencies])}")
        print(f"distance: {dec.distance!r}")
        print(f"residual: {dec.residual!r}")
        print("omega: {" + ", ".join(str(r) for r in dec.omega) + "}")
    return 0


def cmd_rigidity(args):
    rep = rigidity_check(load_matrix(args.matrix), args.a, args.opts)
    _emit(args, {"distance": rep.distance, "forced_scalar": rep.forced_scalar,
                 "asserted": rep.asserted})
    # an asserted rigidity that fails to force a scalar family is a violation
    return 1 if rep.asserted and not rep.forced_scalar else 0


def cmd_probe(args):
    rep = boundedness_probe(load_matrix(args.matrix), args.t_max, args.samples, args.opts)
    _emit(args, {"sup_norm": rep.sup_norm, "growing": rep.growing, "t_max": args.t_max})
    return 0


def cmd_kronecker(args):
    seq = running_sup(args.a, args.b, args.n_max)
    if args.format == "tsv":
        sys.stdout.write(seq.to_tsv())
    elif args.format == "json":
        print(json.dumps({"n_max": args.n_max, "final_sup": seq.final_sup,
                          "records": [[n, v] for n, v in seq.pairs]}, indent=2))
    else:
        print(f"final_sup: {seq.final_sup!r}")
        print(f"records: {len(seq.pairs)}")
        if seq.pairs:
            print(f"last_record_n: {seq.pairs[-1][0]}")
    vals = [v for _, v in seq.pairs]
    return 0 if all(x < y for x, y in zip(vals, vals[1:])) else 1


def cmd_alpha(args):
    coeffs = [float(c) for c in alpha_coefficients(args.p).coefficients]
    if args.format == "json":
        print(json.dumps({"p": args.p, "alpha": coeffs}))
    elif args.format == "tsv":
        _emit(args, {}, list(enumerate(coeffs)), ["k", "alpha"])
    else:
        print(" ".join(_num(c) for c in coeffs))
    return 0 if abs(math.fsum(coeffs) - 1.0) <= 1e-12 else 1


def cmd_coeffsum(args):
    sums = coefficient_partial_sums(args.terms)
    monotone = bool((sums[1:] > sums[:-1]).all())
    record = {"terms": args.terms, "partial_sum": float(sums[-1]),
              "gap": math.pi / 2 - float(sums[-1]), "monotone": monotone}
    _emit(args, record)
    return 0 if monotone and record["gap"] > 0 else 1


def cmd_selftest(args):
    seed = args.seed_pos if args.seed_pos is not None else args.seed
    results = run_selftest(seed)
    if args.format == "json":
        print(json.dumps({"seed": seed, "checks": [
            {"name": n, "passed": ok, "detail": d} for n, ok, d in results]}, indent=2))
    elif args.format == "tsv":
        _emit(args, {}, results, ["check", "passed", "detail"])
    else:
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv", "human"], default="human")
    common.add_argument("--tol", type=float, default=1e-13,
                        help="series truncation tolerance for matrix functions")
    common.add_argument("--seed", type=_uint, default=0)
    common.add_argument("--n-max", type=_uint, default=10**5,
                        help="integer horizon for record searches (default 1e5)")
    common.add_argument("--t-max", type=float, default=100.0,
                        help="time window for the boundedness probe")

    parser = argparse.ArgumentParser(
        prog="cosine-gap", description="Sup-norm distances between cosine families.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common],
                       help="sup_t |cos(xt) - cos(yt)|; integers take the exact Chebyshev path")
    p.add_argument("x", type=_parse_number)
    p.add_argument("y", type=_parse_number)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("omega", parents=[common], help="frequencies within distance m of cos(at)")
    p.add_argument("a", type=float)
    p.add_argument("m", type=float)
    p.set_defaults(func=cmd_omega)

    for name, func, text in [
        ("decompose", cmd_decompose, "spectral decomposition of cos(tA)"),
        ("rigidity", cmd_rigidity, "check the scalar rigidity law"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("matrix", help="matrix file (JSON or whitespace text)")
        p.add_argument("a", type=float)
        p.set_defaults(func=func)

    p = sub.add_parser("probe", parents=[common], help="sample ||cos(tA)|| on [0, t-max]")
    p.add_argument("matrix")
    p.add_argument("--samples", type=int, default=2001)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("kronecker", parents=[common],
                       help="running max of |cos(na) - cos(nb)| over integers n")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.set_defaults(func=cmd_kronecker)

    p = sub.add_parser("alpha", parents=[common], help="power-reduction coefficients of c_1^p")
    p.add_argument("p", type=_uint)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("coeffsum", parents=[common], help="partial sums of the arccos coefficients")
    p.add_argument("terms", type=int, nargs="?", default=10**6)
    p.set_defaults(func=cmd_coeffsum)

    p = sub.add_parser("selftest", parents=[common], help="seeded invariant suite")
    p.add_argument("seed_pos", metavar="seed", type=_uint, nargs="?")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.opts = SeriesOptions(tol=args.tol)
        return args.func(args)
    except (CosineGapError, ValueError) as exc:
        print(f"cosine-gap {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
