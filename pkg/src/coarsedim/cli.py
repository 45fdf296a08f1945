"""Command-line front end.

Exit codes: 0 pass, 1 verification failed, 2 usage or I/O error,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import covers, jsonio, metric, oracle, witness
from .metric import BudgetExceeded

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=1)
    if getattr(args, "report", None):
        jsonio.write_json(args.report, payload)
    else:
        print(text)


def _space(args):
    return jsonio.space_from_json(jsonio.read_json(args.space))


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def cmd_gen(args) -> int:
    if args.kind == "grid":
        space = metric.gen_grid(args.dim, args.side, args.norm)
    elif args.kind == "graph":
        obj = jsonio.read_json(args.edges)
        space = metric.from_graph(int(obj["size"]), obj["edges"])
    else:
        rng = np.random.default_rng(args.seed)
        space = metric.random_graph_space(args.size, args.p, rng)
    jsonio.write_json(args.output, jsonio.space_to_json(space, args.keep_generator))
    print(json.dumps({"size": space.size, "output": args.output}))
    return EXIT_PASS


def _verify_cover(args) -> int:
    space = _space(args)
    cov = jsonio.cover_from_json(jsonio.read_json(args.cover), space.size)
    report = covers.verify_cover(space, cov, n=args.n, S=args.S, L=args.L)
    _emit(args, jsonio.cover_report_to_json(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


def _verify_witness(args) -> int:
    space = _space(args)
    fam = jsonio.witness_from_json(jsonio.read_json(args.witness), space.size)
    report = witness.verify_witness(space, fam, args.R, args.eps, args.n)
    _emit(args, jsonio.witness_report_to_json(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_cover(args) -> int:
    if args.action == "verify":
        return _verify_cover(args)
    space = _space(args)
    cov = covers.brick_cover(space, args.q)
    jsonio.write_json(args.output, jsonio.cover_to_json(cov))
    report = covers.verify_cover(space, cov, n=space.grid.dim, S=(space.grid.dim + 1) * args.q - 1)
    _emit(args, jsonio.cover_report_to_json(report))
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_witness(args) -> int:
    return _verify_witness(args)


def cmd_verify(args) -> int:
    return _verify_cover(args) if args.target == "cover" else _verify_witness(args)


def cmd_convert(args) -> int:
    space = _space(args)
    if args.direction == "cover-to-witness":
        cov = jsonio.cover_from_json(jsonio.read_json(args.cover), space.size)
        L = args.L if args.L is not None else witness.choose_scale(args.R, args.eps, args.n)
        fam = witness.cover_to_witness(space, cov, args.R, L)
        jsonio.write_json(args.output, jsonio.witness_to_json(fam))
        report = witness.verify_witness(space, fam, args.R, args.eps, args.n)
        payload = jsonio.witness_report_to_json(report)
        payload["L"] = L
        _emit(args, payload)
        return EXIT_PASS if report.passed else EXIT_FAIL

    fam = jsonio.witness_from_json(jsonio.read_json(args.witness), space.size)
    if args.certify:
        cert = witness.certify_c_implies_a(space, fam, args.R, args.n)
        jsonio.write_json(args.output, jsonio.cover_to_json(cert.derived.cover))
        _emit(args, jsonio.certificate_to_json(cert))
        return EXIT_PASS if cert.passed else EXIT_FAIL
    derived = witness.witness_to_cover(space, fam)
    jsonio.write_json(args.output, jsonio.cover_to_json(derived.cover))
    # closed R-balls inside elements <=> margin > R
    report = covers.verify_cover(space, derived.cover, n=args.n, S=2 * fam.radius_S, L=args.R)
    payload = jsonio.cover_report_to_json(report)
    payload["centers"] = list(derived.centers)
    payload["selected"] = list(derived.selected)
    _emit(args, payload)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_oracle(args) -> int:
    space = _space(args)
    if args.check == "min-mult":
        budget = oracle.OracleBudget(max_points=args.max_points, time_limit=args.time_limit)
        k = oracle.min_multiplicity_exhaustive(space, args.S, args.L, budget)
        _emit(args, {"min_multiplicity": k, "S": args.S, "L": args.L})
        return EXIT_PASS
    if args.check == "pair-scan":
        fam = jsonio.witness_from_json(jsonio.read_json(args.witness), space.size)
        report = oracle.independent_pair_scan(space, fam, args.R, args.eps, args.n)
        _emit(args, jsonio.witness_report_to_json(report))
        return EXIT_PASS if report.passed else EXIT_FAIL
    cov = jsonio.cover_from_json(jsonio.read_json(args.cover), space.size)
    ok = oracle.ball_inclusion_scan(space, cov, args.L)
    _emit(args, {"lebesgue_at_least": ok, "L": args.L})
    return EXIT_PASS if ok else EXIT_FAIL


def _add_cover_verify(p):
    p.add_argument("--space", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--S", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--report", help="write the report here instead of stdout")


def _add_witness_verify(p):
    p.add_argument("--space", required=True)
    p.add_argument("--witness", required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--eps", type=_fraction, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarsedim",
                                     description="Bounded covers and witness families on finite metric spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a metric space")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    g = gen_sub.add_parser("grid")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--side", type=int, required=True)
    g.add_argument("--norm", choices=("linf", "l1"), default="linf")
    g = gen_sub.add_parser("graph", help="shortest-path metric of an edge list")
    g.add_argument("--edges", required=True, help='JSON {"size": N, "edges": [[i, j, w], ...]}')
    g = gen_sub.add_parser("random-graph")
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--p", type=float, default=0.2)
    g.add_argument("--seed", type=int, required=True)
    for g in gen_sub.choices.values():
        g.add_argument("-o", "--output", required=True)
        g.add_argument("--keep-generator", action="store_true")
    gen.set_defaults(func=cmd_gen)

    cov = sub.add_parser("cover", help="build or verify covers")
    cov_sub = cov.add_subparsers(dest="action", required=True)
    c = cov_sub.add_parser("brick", help="shifted-cube cover of an linf grid")
    c.add_argument("--space", required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--report")
    _add_cover_verify(cov_sub.add_parser("verify"))
    cov.set_defaults(func=cmd_cover)

    wit = sub.add_parser("witness", help="verify witness families")
    wit_sub = wit.add_subparsers(dest="action", required=True)
    _add_witness_verify(wit_sub.add_parser("verify"))
    wit.set_defaults(func=cmd_witness)

    ver = sub.add_parser("verify", help="verify a cover or a witness family")
    ver_sub = ver.add_subparsers(dest="target", required=True)
    _add_cover_verify(ver_sub.add_parser("cover"))
    _add_witness_verify(ver_sub.add_parser("witness"))
    ver.set_defaults(func=cmd_verify)

    con = sub.add_parser("convert", help="cover <-> witness constructions")
    con_sub = con.add_subparsers(dest="direction", required=True)
    c = con_sub.add_parser("cover-to-witness")
    c.add_argument("--cover", required=True)
    c.add_argument("--R", type=float, required=True)
    c.add_argument("--eps", type=_fraction, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--L", type=float, help="Lebesgue scale; default chosen from --eps and --n")
    c = con_sub.add_parser("witness-to-cover")
    c.add_argument("--witness", required=True)
    c.add_argument("--R", type=float, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--certify", action="store_true")
    for c in con_sub.choices.values():
        c.add_argument("--space", required=True)
        c.add_argument("-o", "--output", required=True)
        c.add_argument("--report")
    con.set_defaults(func=cmd_convert)

    orc = sub.add_parser("oracle", help="brute-force checks for tiny spaces")
    orc_sub = orc.add_subparsers(dest="check", required=True)
    o = orc_sub.add_parser("min-mult")
    o.add_argument("--S", type=float, required=True)
    o.add_argument("--L", type=float, required=True)
    o.add_argument("--max-points", type=int, default=12)
    o.add_argument("--time-limit", type=float, default=60.0)
    o = orc_sub.add_parser("pair-scan")
    o.add_argument("--witness", required=True)
    o.add_argument("--R", type=float, required=True)
    o.add_argument("--eps", type=_fraction, required=True)
    o.add_argument("--n", type=int)
    o = orc_sub.add_parser("ball-scan")
    o.add_argument("--cover", required=True)
    o.add_argument("--L", type=float, required=True)
    for o in orc_sub.choices.values():
        o.add_argument("--space", required=True)
        o.add_argument("--report")
    orc.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (witness.LebesgueTooSmall, witness.PremiseFailed, oracle.NoCoverExists,
            covers.NotACover) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        if isinstance(exc, witness.PremiseFailed):
            _emit(args, {"passed": False, "error": "PremiseFailed",
                         "premise": jsonio.witness_report_to_json(exc.report)})
        return EXIT_FAIL
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
