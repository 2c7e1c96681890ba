"""Command-line entry point: ``steenrod-charp <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .char_classes import rost_number
from .checks import run_all
from .dual_algebra import BmuElement, bmu_coaction, default_truncation
from .graded_modules import ChowClass, ProjSpaceRing, QuadricRing, act
from .qform_bounds import (
    WittChain,
    chain_sweep,
    hoffmann_feasible_i1,
    inq_allowed_dims,
    v2_chain_ok,
)
from .steenrod_ops import Mode, ModeError, ParseError, SteenrodElement, adem_reduce


class CliError(Exception):
    pass


def _emit(args, text: str, record) -> None:
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def cmd_adem(args):
    mode = Mode.parse(args.mode)
    e = SteenrodElement.parse(args.expr, args.prime, mode)
    nf = adem_reduce(e, args.strategy)
    _emit(args, nf.to_text(), nf.to_record())


def _act_target(args):
    chosen = [x is not None for x in (args.quadric, args.projspace, args.bmu)]
    if sum(chosen) != 1:
        raise CliError("choose exactly one of --quadric, --projspace, --bmu")
    if args.quadric is not None:
        if args.prime not in (None, 2):
            raise ModeError("quadric modules are mod 2 only")
        ring = QuadricRing(args.quadric)
        return ChowClass.parse(args.cls, ring), 2, Mode.CHAR_P_CHOW
    if args.prime is None:
        raise CliError("-p is required with --projspace and --bmu")
    if args.projspace is not None:
        ring = ProjSpaceRing(args.projspace, args.prime)
        return ChowClass.parse(args.cls, ring), args.prime, Mode.CHAR_P_CHOW
    return BmuElement.parse(args.cls, args.prime, args.bmu), args.prime, Mode.CHAR0_MOTIVIC


def cmd_act(args):
    x, p, mode = _act_target(args)
    e = SteenrodElement.parse(args.op, p, mode)
    y = act(e, x)
    _emit(args, y.to_text(), y.to_record())


def cmd_coaction(args):
    n = args.truncation if args.truncation is not None else default_truncation()
    x = BmuElement.parse(args.poly, args.prime, n)
    c = bmu_coaction(x)
    _emit(args, c.to_text(), c.to_record())


def cmd_rost(args):
    deg, q = rost_number(args.n, args.prime)
    _emit(
        args,
        f"deg={deg} quotient={q}",
        {"n": args.n, "prime": args.prime, "deg": deg, "quotient": int(q)},
    )


def cmd_witt(args):
    if args.hoffmann is not None:
        vals = hoffmann_feasible_i1(args.hoffmann)
        _emit(args, " ".join(map(str, vals)), {"dim": args.hoffmann, "i1": vals})
    elif args.inq_holes is not None:
        vals = sorted(inq_allowed_dims(args.inq_holes))
        _emit(args, " ".join(map(str, vals)), {"n": args.inq_holes, "dims": vals})
    elif args.chain is not None:
        dim, *idx = args.chain
        chain = WittChain(dim, tuple(idx))
        ok = v2_chain_ok(chain)
        _emit(args, "true" if ok else "false", {"dim": dim, "indices": idx, "v2_chain_ok": ok})
    elif args.sweep is not None:
        checked, bad = chain_sweep(args.sweep)
        lines = [f"checked={checked} violations={len(bad)}"]
        lines += [f"{c.dim} " + " ".join(map(str, c.indices)) for c in bad]
        _emit(
            args,
            "\n".join(lines),
            {"max_dim": args.sweep, "checked": checked, "violations": [[c.dim, *c.indices] for c in bad]},
        )
    else:
        raise CliError("choose one of --hoffmann, --inq-holes, --chain, --sweep")


def cmd_verify(args):
    results = run_all(args.workers)
    if args.format == "json":
        for r in results:
            print(json.dumps({"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}))
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="steenrod-charp",
        description="Reduced power operations, Adem relations and related invariants.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("adem", parents=[common], help="reduce a composition to admissible form")
    p.add_argument("-p", "--prime", type=int, default=2)
    p.add_argument("--mode", default="charp", help="charp (default) or char0")
    p.add_argument("--strategy", choices=("leftmost", "rightmost"), default="leftmost")
    p.add_argument("expr")
    p.set_defaults(func=cmd_adem)

    p = sub.add_parser("act", parents=[common], help="apply an operation to a class")
    p.add_argument("--quadric", type=int, metavar="DIM")
    p.add_argument("--projspace", type=int, metavar="N")
    p.add_argument("--bmu", type=int, metavar="TRUNC", help="Bmu_p truncated at v^TRUNC (odd p)")
    p.add_argument("-p", "--prime", type=int)
    p.add_argument("op")
    p.add_argument("cls")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("coaction", parents=[common], help="coaction on H(Bmu_p)")
    p.add_argument("-p", "--prime", type=int, required=True)
    p.add_argument("-N", "--truncation", type=int, help="defaults to $STEENROD_CHARP_TRUNCATION or 64")
    p.add_argument("poly")
    p.set_defaults(func=cmd_coaction)

    p = sub.add_parser("rost", parents=[common], help="deg w_n(-T_X) of a split quadric")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", "--prime", type=int, required=True)
    p.set_defaults(func=cmd_rost)

    p = sub.add_parser("witt", parents=[common], help="Witt index bounds")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--hoffmann", type=int, metavar="DIM")
    g.add_argument("--inq-holes", type=int, metavar="N")
    g.add_argument("--chain", type=int, nargs="+", metavar="DIM I")
    g.add_argument("--sweep", type=int, metavar="MAXDIM")
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance sweep")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except (CliError, ParseError, ModeError, ValueError, TypeError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
