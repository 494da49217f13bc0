"""Command-line entry point: ``wgcalc <subcommand> [flags]``.

Exit codes: 0 success, 1 domain error or failed verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from .combinatorics import format_cycle_type, partitions_of
from .engine import (
    SYMBOLIC,
    DimensionError,
    WgRoute,
    ascension,
    descension,
    gram_function,
    pseudo_weingarten,
    weingarten,
)
from .group_algebra import ClassFunction, NotInvertible
from .moments import MomentQuery, QueryError, TermBoundExceeded, exact_moment, moment_u_recursive
from .numerics import to_exact_string
from .sampler import SamplerConfig, SamplerError, default_workers, estimate_moment
from .verify import SUITES, run_suite

DOMAIN_ERRORS = (
    DimensionError,
    QueryError,
    TermBoundExceeded,
    SamplerError,
    NotInvertible,
    ArithmeticError,
    ValueError,
    KeyError,
)

DECIMAL_DIGITS = 20


class UsageError(Exception):
    pass


def class_label(mu) -> str:
    if all(p == 1 for p in mu):
        return "e"
    return "(" + format_cycle_type(mu) + ")"


def decimal_string(v, digits: int = DECIMAL_DIGITS) -> str | None:
    if not isinstance(v, (int, Fraction)):
        return None
    v = Fraction(v)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(v.numerator) / Decimal(v.denominator))


def _dimension(args):
    if getattr(args, "symbolic", False):
        if args.n is not None:
            raise UsageError("give either -n or --symbolic, not both")
        return SYMBOLIC
    if args.n is None:
        raise UsageError("a dimension is required: -n N or --symbolic")
    return args.n


# ------------------------------------------------------------ rendering


def render_class_function(f: ClassFunction, fmt: str, decimal: bool = False, extra: dict | None = None) -> str:
    order = partitions_of(f.k)
    if fmt == "json":
        d = f.to_json_dict()
        if extra:
            d.update(extra)
        if decimal and not f.symbolic:
            d["decimal"] = {format_cycle_type(mu): decimal_string(f.values[mu]) for mu in order}
        return json.dumps(d, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["cycle_type", "value"] + (["decimal"] if decimal else [])
        w.writerow(header)
        for mu in order:
            row = [format_cycle_type(mu), to_exact_string(f.values[mu])]
            if decimal:
                row.append(decimal_string(f.values[mu]) or "")
            w.writerow(row)
        return buf.getvalue().rstrip("\n")
    lines = []
    for mu in reversed(order):
        s = f"{class_label(mu)}: {to_exact_string(f.values[mu])}"
        if decimal:
            dec = decimal_string(f.values[mu])
            if dec is not None:
                s += f"  ~ {dec}"
        lines.append(s)
    return "\n".join(lines)


def _emit(text: str, out_path: str | None):
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as e:
            raise OSError(f"cannot write {out_path}: {e.strerror or e}") from e
    else:
        print(text)


# ------------------------------------------------------------- commands

_BUILDERS = {
    "wg": lambda k, n, args: weingarten(k, n, getattr(args, "route", "char")),
    "pseudo-wg": lambda k, n, args: pseudo_weingarten(k, n),
    "raise": lambda k, n, args: ascension(k, n),
    "lower": lambda k, n, args: descension(k, n),
    "gram": lambda k, n, args: gram_function(k, n),
}


def cmd_function(args) -> int:
    n = _dimension(args)
    f = _BUILDERS[args.command](args.k, n, args)
    _emit(render_class_function(f, args.format, args.decimal, {"object": args.command, "n": str(n)}), args.out)
    return 0


def cmd_table(args) -> int:
    build = _BUILDERS[args.object]
    if args.symbolic or args.n is not None:
        return cmd_function(argparse.Namespace(**{**vars(args), "command": args.object}))
    if args.nmin is None or args.nmax is None:
        raise UsageError("table needs -n N, --symbolic, or --nmin/--nmax")
    if args.nmin > args.nmax:
        raise UsageError("--nmin must not exceed --nmax")
    tables = [(n, build(args.k, n, args)) for n in range(args.nmin, args.nmax + 1)]
    if args.format == "json":
        payload = [dict(f.to_json_dict(), object=args.object, n=str(n)) for n, f in tables]
        text = json.dumps(payload, indent=2)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "cycle_type", "value"])
        for n, f in tables:
            for mu in partitions_of(args.k):
                w.writerow([n, format_cycle_type(mu), to_exact_string(f.values[mu])])
        text = buf.getvalue().rstrip("\n")
    else:
        text = "\n\n".join(f"n={n}\n" + render_class_function(f, "human", args.decimal) for n, f in tables)
    _emit(text, args.out)
    return 0


def cmd_moment(args) -> int:
    n = _dimension(args)
    q = MomentQuery.parse(args.query)
    if args.u_route == "recursive":
        if q.target != "U":
            raise UsageError("--u-route applies to u[...] queries only")
        v = moment_u_recursive(q, n)
    else:
        v = exact_moment(q, n)
    exact = to_exact_string(v)
    dec = decimal_string(v) if args.decimal else None
    if args.format == "json":
        d = {"query": str(q), "n": str(n), "value": exact}
        if dec is not None:
            d["decimal"] = dec
        text = json.dumps(d, indent=2)
    elif args.format == "csv":
        text = "query,n,value\n" + f"\"{q}\",{n},{exact}"
    else:
        text = f"E[{q}] = {exact}" + (f"  ~ {dec}" if dec else "")
    _emit(text, args.out)
    return 0


def cmd_sample(args) -> int:
    if args.n is None:
        raise UsageError("sample needs a concrete -n")
    cfg = SamplerConfig(seed=args.seed, samples=args.samples, workers=args.workers or default_workers())
    est = estimate_moment(args.query, args.n, cfg)
    if args.format == "json":
        text = est.to_json(indent=2)
    else:
        m = est.mean
        lines = [
            f"query:  {est.query}",
            f"n:      {est.n}",
            f"N:      {est.samples}  (seed {est.seed}, workers {cfg.workers})",
            f"mean:   {m.real:.6g}{m.imag:+.6g}i",
            f"stderr: {est.standard_error:.3g}",
        ]
        if est.exact is not None:
            lines.append(f"exact:  {est.exact}")
            lines.append(f"z:      {est.z_score:.3f}")
        text = "\n".join(lines)
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.kmax, args.nmax, args.k, args.n)
    failed = [c for c in checks if not c.passed]
    if args.format == "json":
        text = json.dumps(
            {
                "suite": args.suite,
                "passed": len(checks) - len(failed),
                "failed": len(failed),
                "checks": [c.to_json_dict() for c in checks],
            },
            indent=2,
        )
    else:
        lines = [c.line() for c in checks]
        lines.append(f"summary: {len(checks) - len(failed)} passed, {len(failed)} failed")
        text = "\n".join(lines)
    _emit(text, args.out)
    return 1 if failed else 0


# --------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=["human", "json", "csv"], default="human")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--decimal", action="store_true", help="also print decimal approximations")


def _dim_flags(p, symbolic=True):
    p.add_argument("-n", type=int)
    if symbolic:
        p.add_argument("--symbolic", action="store_true", help="compute as rational functions of n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgcalc", description="Exact Weingarten calculus and Haar moments")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in [
        ("wg", "Weingarten function Wg_{k,n}"),
        ("pseudo-wg", "pseudo-Weingarten W_{k,n} (any k, n)"),
        ("raise", "ascension function Raise_{k,n}"),
        ("lower", "descension function Lower_{k,n}"),
        ("gram", "Gram function pi -> n^cycles(pi)"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("-k", type=int, required=True)
        _dim_flags(p)
        if name == "wg":
            p.add_argument("--route", choices=[r.value for r in WgRoute], default="char")
        _common(p)
        p.set_defaults(func=cmd_function)

    p = sub.add_parser("table", help="emit a table of wg/raise/lower values")
    p.add_argument("object", choices=sorted(_BUILDERS))
    p.add_argument("-k", type=int, required=True)
    _dim_flags(p)
    p.add_argument("--nmin", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--route", choices=[r.value for r in WgRoute], default="char")
    _common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("moment", help="exact moment of a monomial query")
    p.add_argument("query", help='e.g. "p[1,2]^2 p~[n,2]^2 r[2,2]^3"')
    _dim_flags(p)
    p.add_argument("--u-route", choices=["weingarten", "recursive"], default="weingarten")
    _common(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("sample", help="Monte Carlo estimate with exact prediction and z-score")
    p.add_argument("query")
    _dim_flags(p, symbolic=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=None, help="default: $WGCALC_WORKERS or 1")
    _common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--kmax", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("-k", "--k", type=int, dest="k")
    p.add_argument("-n", "--n", type=int, dest="n")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"wgcalc: usage error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"wgcalc: error: {e}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"wgcalc: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
