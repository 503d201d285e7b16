"""Command-line front door.

Subcommands
-----------
verify     run verification pipelines and emit their reports
derive     run a derivation chain and emit its report
reduce     apply the substitution/limit lattice to a catalog entry
integrate  integrate an operator flow and emit the trajectory as CSV
catalog    list or show the recorded constructions

Exit codes are the process-level contract: 0 when every requested case is
verified or verified-with-notes, 1 on any discrepancy or failed
computation, 2 on usage errors (unknown selectors are rejected before any
computation runs).  Identical invocations are byte-deterministic in json
mode.  The ``LAXLAB_PASS_BUDGET`` environment variable overrides the
rewrite pass budget of every rule-set application.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog, verify
from .ncexpr import (
    BUILTIN_RULESET_NAMES,
    LaxlabError,
    NCExpr,
    DEFAULT_CONTEXT as CTX,
    builtin_ruleset,
    combine_rulesets,
    normalize,
    parse as parse_expr,
)
from .laxmat import Mat2


def _print_report(report, fmt: str) -> None:
    if fmt == "json":
        print(report.to_json())
    else:
        print(report.to_text(), end="")


def _status_code(status: str) -> int:
    return 1 if status == verify.DISCREPANCY else 0


def _cmd_verify(args) -> int:
    rules = None
    if args.rules:
        if args.case != "prop31":
            print("error: --rules applies only to --case prop31",
                  file=sys.stderr)
            return 2
        sets = [builtin_ruleset(name) for name in args.rules]
        rules = sets[0] if len(sets) == 1 else combine_rulesets(
            "+".join(args.rules), *sets
        )
    if args.case == "all":
        reports = verify.run_all(negative_control=args.negative_control)
        if args.format == "json":
            print(json.dumps([r.to_dict() for r in reports], indent=2,
                             ensure_ascii=False))
        else:
            for rep in reports:
                _print_report(rep, "text")
                print()
            print("summary:")
            width = max(len(r.case) for r in reports)
            for rep in reports:
                print(f"  {rep.case:{width}s}  {rep.status}")
        return 1 if any(
            r.status == verify.DISCREPANCY for r in reports
        ) else 0
    if rules is not None:
        report = verify.verify_prop31(rules=rules)
    else:
        report = verify.run(args.case,
                            negative_control=args.negative_control)
    _print_report(report, args.format)
    return _status_code(report.status)


def _cmd_derive(args) -> int:
    report = verify.derive_p34()
    _print_report(report, args.format)
    return _status_code(report.status)


def _format_mat(m: Mat2) -> str:
    strings = m.to_strings()["entries"]
    return "\n".join(
        f"  entry {r + 1}{c + 1}: {strings[r][c]}"
        for r in range(2) for c in range(2)
    )


def _cmd_reduce(args) -> int:
    if (args.key is None) == (args.expr is None):
        print("error: give exactly one of a catalog KEY or --expr",
              file=sys.stderr)
        return 2
    if args.key is not None and args.key not in catalog.keys():
        print(f"error: unknown catalog key {args.key!r}", file=sys.stderr)
        return 2

    subs = None
    if args.v_du:
        subs = {"v": NCExpr.gen("u", 1, ctx=CTX)}
    elif args.v_u:
        subs = {"v": NCExpr.gen("u", ctx=CTX)}
    elif args.v_zero:
        subs = {"v": NCExpr.zero(CTX)}
    rules = None
    if args.rules:
        sets = [builtin_ruleset(name) for name in args.rules]
        rules = sets[0] if len(sets) == 1 else combine_rulesets(
            "+".join(args.rules), *sets
        )

    def reduce_expr(e: NCExpr) -> NCExpr:
        if subs is not None:
            e = e.substitute(subs)
        if args.hbar_zero:
            e = e.classical_limit()
        if rules is not None:
            e = normalize(e, rules)
        if args.scalarize:
            e = e.scalarize()
        if args.canonical:
            e = e.canonical()
        return e

    try:
        if args.expr is not None:
            print(reduce_expr(parse_expr(args.expr, CTX)))
            return 0
        obj = catalog.build(args.key)
    except LaxlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if isinstance(obj, catalog.TargetEquation):
        print(reduce_expr(obj.lhs))
    elif isinstance(obj, catalog.TargetSystem):
        for k, eq in enumerate(obj.equations, start=1):
            print(f"eq {k}: {reduce_expr(eq)}")
    elif isinstance(obj, catalog.LaxPairSpec):
        print("z-member:")
        print(_format_mat(obj.p.map(reduce_expr)))
        print("spectral member:")
        print(_format_mat(obj.q.map(reduce_expr)))
    else:
        print(f"error: catalog key {args.key!r} holds a gauge matrix, "
              "which the reduction lattice does not apply to",
              file=sys.stderr)
        return 2
    return 0


def _cmd_integrate(args) -> int:
    from . import numeric

    try:
        problem = numeric.ODEProblem(
            args.rhs,
            alpha=args.alpha,
            n=args.n,
            z0=args.z0,
            z1=args.z1,
            u0=args.u0,
            du0=args.du0,
            ddu0=args.ddu0,
            rtol=args.rtol,
            atol=args.atol,
            grid_points=args.grid,
        )
    except numeric.NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        trajectory = numeric.integrate(problem)
    except numeric.NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    csv_text = trajectory.to_csv()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_catalog(args) -> int:
    if args.action == "list":
        for key in catalog.keys():
            info = catalog.describe(key)
            params = ", ".join(info["params"]) if info["params"] else "-"
            print(f"{key}  [{info['kind']}; params: {params}]")
            print(f"    {info['citation']}")
        return 0
    # show
    if args.key is None:
        print("error: catalog show requires a KEY", file=sys.stderr)
        return 2
    if args.key not in catalog.keys():
        print(f"error: unknown catalog key {args.key!r}", file=sys.stderr)
        return 2
    info = catalog.describe(args.key)
    print(f"key: {args.key}")
    print(f"kind: {info['kind']}")
    params = ", ".join(info["params"]) if info["params"] else "-"
    print(f"params: {params}")
    print(f"notes: {info['citation']}")
    obj = catalog.build(args.key)
    if isinstance(obj, catalog.TargetEquation):
        print(f"lhs: {obj.lhs}")
    elif isinstance(obj, catalog.TargetSystem):
        for k, eq in enumerate(obj.equations, start=1):
            print(f"eq {k}: {eq}")
    elif isinstance(obj, catalog.LaxPairSpec):
        if obj.rules:
            print(f"rule sets: {', '.join(obj.rules)}")
        print("z-member:")
        print(_format_mat(obj.p))
        print("spectral member:")
        print(_format_mat(obj.q))
    else:
        print("gauge matrix:")
        print(_format_mat(obj.g))
        print("inverse:")
        print(_format_mat(obj.g_inv))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laxlab",
        description="Symbolic and numeric checks for 2x2 spectral-problem "
                    "compatibility derivations.",
        epilog="The LAXLAB_PASS_BUDGET environment variable overrides the "
               "rewrite pass budget.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_verify = sub.add_parser(
        "verify", help="run verification pipelines",
        description="Run one pipeline (or all of them) and print its "
                    "report.  Exit 0 on verified/verified-with-notes, "
                    "1 on discrepancy.",
    )
    p_verify.add_argument("--case", required=True,
                          choices=verify.CASES + ("all",),
                          help="pipeline id, or 'all'")
    p_verify.add_argument("--format", choices=("text", "json"),
                          default="text")
    p_verify.add_argument("--negative-control", action="store_true",
                          help="run the pipeline's mutated twin, which "
                               "must report a discrepancy")
    p_verify.add_argument("--rules", action="append",
                          choices=tuple(BUILTIN_RULESET_NAMES),
                          help="normalize under a built-in rule set "
                               "(prop31 only; repeatable)")
    p_verify.set_defaults(func=_cmd_verify)

    p_derive = sub.add_parser(
        "derive", help="run a derivation chain",
        description="Run a derivation chain end to end and print its "
                    "report.",
    )
    p_derive.add_argument("target", choices=("p34",),
                          help="derivation to run")
    p_derive.add_argument("--format", choices=("text", "json"),
                          default="text")
    p_derive.set_defaults(func=_cmd_derive)

    p_reduce = sub.add_parser(
        "reduce", help="apply substitutions and limits",
        description="Apply the substitution/limit lattice to a catalog "
                    "entry or an --expr expression and print the result.  "
                    "Order: v-binding, hbar -> 0, rule normalization, "
                    "scalar projection, canonical form.",
    )
    p_reduce.add_argument("key", nargs="?", default=None,
                          help="catalog key to reduce")
    p_reduce.add_argument("--expr", default=None,
                          help="expression text to reduce instead of a "
                               "catalog key")
    group = p_reduce.add_mutually_exclusive_group()
    group.add_argument("--v-du", action="store_true",
                       help="bind v = u'")
    group.add_argument("--v-u", action="store_true", help="bind v = u")
    group.add_argument("--v-zero", action="store_true", help="bind v = 0")
    p_reduce.add_argument("--hbar-zero", action="store_true",
                          help="take the hbar -> 0 limit")
    p_reduce.add_argument("--rules", action="append",
                          choices=tuple(BUILTIN_RULESET_NAMES),
                          help="normalize under a built-in rule set "
                               "(repeatable)")
    p_reduce.add_argument("--scalarize", action="store_true",
                          help="project to the commutative scalar image")
    p_reduce.add_argument("--canonical", action="store_true",
                          help="rescale to the canonical normal form")
    p_reduce.set_defaults(func=_cmd_reduce)

    p_int = sub.add_parser(
        "integrate", help="integrate an operator flow",
        description="Integrate one of the recorded flows and print the "
                    "trajectory as CSV (columns: z, Re/Im of every matrix "
                    "entry of each stored derivative level, and the "
                    "independent finite-difference residual).",
    )
    p_int.add_argument("rhs", choices=("pii", "p34", "matrix-pii", "dpii3"),
                       help="flow to integrate")
    p_int.add_argument("--alpha", type=float, default=0.0)
    p_int.add_argument("--z0", type=float, default=1.0)
    p_int.add_argument("--z1", type=float, default=5.0)
    p_int.add_argument("--u0", type=complex, default=0.0,
                       help="initial value (complex accepted, j-notation)")
    p_int.add_argument("--du0", type=complex, default=0.0,
                       help="initial first derivative")
    p_int.add_argument("--ddu0", type=complex, default=None,
                       help="initial second derivative (third-order flow "
                            "only)")
    p_int.add_argument("--n", type=int, default=1,
                       help="matrix size (entries are n x n multiples of "
                            "identity when initial data is scalar)")
    p_int.add_argument("--grid", type=int, default=161,
                       help="number of output grid points")
    p_int.add_argument("--rtol", type=float, default=1e-10)
    p_int.add_argument("--atol", type=float, default=1e-12)
    p_int.add_argument("--output", default=None,
                       help="write CSV here instead of standard output")
    p_int.set_defaults(func=_cmd_integrate)

    p_cat = sub.add_parser(
        "catalog", help="list or show recorded constructions",
        description="List every catalog key with its kind, parameter "
                    "slots, and notes, or show one entry in full.",
    )
    p_cat.add_argument("action", choices=("list", "show"))
    p_cat.add_argument("key", nargs="?", default=None,
                       help="catalog key (for show)")
    p_cat.set_defaults(func=_cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
