"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
Errors are printed to stderr as one JSON object {"error": {...}}.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence

from .algebraic import bracket_contains
from .closedforms import CSV_COLUMNS, OutOfRange, discontinuity_report, g_best_known
from .colorizer import CaseTag, InapplicableCase, extend_universal, minimal_epsilon, verify_coloring
from .graphs import (BudgetExceeded, build_universal, kneser, kneser_odd_girth_formula, layer_independence_bound,
                     odd_girth)
from .lp.extension import minimal_extension_epsilon
from .lp.fractional import (dual_certificate_d6, expansion_ratio, fractional_clique_d6, neighborhood_load,
                            second_eigenvalue)
from .lp.mwis import DEFAULT_NODE_BUDGET
from .measure import CarveError, as_fraction
from .table import DEFAULT_ROWS, DESK_SCALE_MAX_P, PUBLISHED, evaluate_row

BUDGET_ENV = "FRACEXT_BUDGET"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

EPILOG = f"""\
CSV columns:
  table1     p,q,d,eps_lo,eps_hi,computed_5dp,published,delta,tolerance,closed_form,status,note
  threshold  p,q,d,eps_lo,eps_hi,closed_form,source
  gvalue     {",".join(CSV_COLUMNS)}

The search budget (--budget) can also be set with the {BUDGET_ENV} environment variable;
the flag wins when both are given.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ArithmeticError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--n", type=_positive_int, default=1)
    sp.add_argument("--eps", type=_rational)
    sp.add_argument("--tol", type=_rational, default=Fraction(1, 10**6))
    sp.add_argument("--budget", type=_positive_int)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sp.add_argument("--out")
    sp.add_argument("--jobs", type=_positive_int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracext", description="Fractional precoloring extension toolkit.",
                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("table1", help="reproduce the minimum-eps table with the extension LP")
    _common(sp)
    sp.add_argument("--allow-large", action="store_true", help=f"permit rows with p > {DESK_SCALE_MAX_P}")

    sp = sub.add_parser("color", help="color U^n_{p,q,d} with an explicit construction and verify it")
    _common(sp)
    sp.add_argument("--case", required=True, choices=[c.value for c in CaseTag])

    sp = sub.add_parser("certify", help="check a lower-bound certificate")
    _common(sp)
    sp.add_argument("kind", choices=("expansion", "eigen", "clique", "dual-d6", "load"))
    sp.add_argument("--p-prime", type=int, help="dual-d6: numerator of the target span p'/q")
    sp.add_argument("--case", choices=[c.value for c in CaseTag], help="load: construction to inspect")

    sp = sub.add_parser("gvalue", help="best known g(k,d) with provenance")
    _common(sp)
    sp.add_argument("--k", type=_rational)
    sp.add_argument("--discontinuities", action="store_true", help="report one-sided values at k = 2+1/m")

    sp = sub.add_parser("threshold", help="certified bracket for the minimal extendable eps")
    _common(sp)

    sp = sub.add_parser("graph-info", help="size and structure of K(p,q) or U^n_{p,q,d}")
    _common(sp)
    return parser


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            v = int(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be a positive integer, got {env!r}")
        if v <= 0:
            raise UsageError(f"{BUDGET_ENV} must be a positive integer, got {env!r}")
        return v
    return DEFAULT_NODE_BUDGET


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _render(payload: dict, fmt: str, header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(header, rows)
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() for r in [header, *rows]]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def _table_row(args_tuple):
    p, q, d, tol, budget = args_tuple
    return evaluate_row(p, q, d, tol, budget).as_dict()


def cmd_table1(args) -> tuple:
    rows = list(DEFAULT_ROWS)
    if args.p is not None or args.q is not None or args.d is not None:
        keys = [(p, q) for (p, q) in PUBLISHED] + [(p, q) for p, q, _ in DEFAULT_ROWS]
        rows = sorted({(p, q, d) for p, q in keys for d in (5, 6, 7, 8)
                       if (args.p is None or p == args.p) and (args.q is None or q == args.q)
                       and (args.d is None or d == args.d)})
        if not rows:
            raise UsageError("no table row matches the filter")
    large = [r for r in rows if r[0] > DESK_SCALE_MAX_P]
    if large and not args.allow_large:
        raise UsageError(f"rows with p > {DESK_SCALE_MAX_P} need --allow-large: {large}")
    budget = _budget(args)
    work = [(p, q, d, args.tol, budget) for p, q, d in rows]
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as pool:
            results = list(pool.map(_table_row, work))  # map keeps row order
    else:
        results = [_table_row(w) for w in work]
    header = ["p", "q", "d", "eps_lo", "eps_hi", "computed_5dp", "published", "delta", "tolerance",
              "closed_form", "status", "note"]
    table = [[r[h] if r[h] is not None else "" for h in header] for r in results]
    if args.format == "text":
        header = ["p", "q", "d", "computed", "published", "delta", "closed form", "in bracket", "status", "note"]
        table = [[r["p"], r["q"], r["d"], r["computed_5dp"] or "", r["published"] or "--", r["delta"] or "",
                  r["closed_form"], {True: "yes", False: "NO", None: ""}[r["closed_form_in_bracket"]],
                  r["status"], r["note"]] for r in results]
    code = EXIT_OK
    if any(r["status"] == "FAIL" or r["closed_form_in_bracket"] is False for r in results):
        code = EXIT_FAIL
    if any(r["status"] == "ERROR" for r in results):
        code = EXIT_BUDGET
    return _render({"rows": results}, args.format, header, table), code


def cmd_color(args) -> tuple:
    _need(args, "p", "q", "d", "eps")
    case = CaseTag(args.case)
    G, coloring, pre = extend_universal(case, args.p, args.q, args.d, args.n, args.eps)
    violations = verify_coloring(G, coloring, pre)
    report = {
        "case": case.value, "p": args.p, "q": args.q, "d": args.d, "n": args.n, "eps": str(args.eps),
        "vertices": G.n, "edges": G.num_edges(),
        "threshold": minimal_epsilon(case, Fraction(args.p, args.q), args.d).describe(),
        "violations": [str(v) for v in violations],
        "verified": not violations,
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(coloring.to_json())
        report["coloring_file"] = args.out
    else:
        report["coloring"] = json.loads(coloring.to_json())
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.format == "text":
        text = (f"{case.value} p={args.p} q={args.q} d={args.d} n={args.n} eps={args.eps}: "
                f"{G.n} vertices, {len(violations)} violations\n" + "".join(f"  {v}\n" for v in violations))
    return text, EXIT_OK if not violations else EXIT_FAIL


def cmd_certify(args) -> tuple:
    kind = args.kind
    _need(args, "p", "q")
    p, q = args.p, args.q
    budget = _budget(args)
    if kind == "expansion":
        r = expansion_ratio(p, q, budget=budget)
        bound = Fraction(p - q, q)
        rep = {"kind": kind, "p": p, "q": q, "ratio": str(r), "bound": str(bound), "pass": r >= bound}
    elif kind == "eigen":
        lam = second_eigenvalue(p, q)
        target = q / (p - q)
        rep = {"kind": kind, "p": p, "q": q, "second_eigenvalue": repr(lam), "expected": repr(target),
               "pass": abs(lam - target) <= 1e-9}
    elif kind == "clique":
        c = fractional_clique_d6(p, q)
        total, mwis = c.total(), c.max_independent_weight(budget)
        rep = {"kind": kind, "p": p, "q": q, "weight": str(total), "max_independent_weight": str(mwis),
               "pass": total == Fraction(p, q) and mwis <= 1}
    elif kind == "dual-d6":
        _need(args, "p_prime")
        cert = dual_certificate_d6(p, q, args.p_prime, budget)
        target = Fraction(p, q) + Fraction(q, args.p_prime)
        rep = {"kind": kind, "p": p, "q": q, "p_prime": args.p_prime, "objective": str(cert.objective),
               "target": str(target), "feasible": cert.feasible,
               "mwis_with_special": str(cert.mwis_with_special),
               "mwis_without_special": str(cert.mwis_without_special),
               "pass": cert.feasible and cert.objective >= target}
    else:
        _need(args, "d", "eps", "case")
        G, coloring, pre = extend_universal(args.case, p, q, args.d, args.n, args.eps)
        v, load = neighborhood_load(G, coloring)
        room = coloring.span - 1
        rep = {"kind": kind, "p": p, "q": q, "d": args.d, "eps": str(args.eps), "vertex": v,
               "load": str(load), "room": str(room), "pass": load <= room}
    text = json.dumps(rep, indent=1, sort_keys=True) + "\n"
    if args.format == "text":
        text = " ".join(f"{k}={rep[k]}" for k in sorted(rep) if k != "pass") + f" -> {'PASS' if rep['pass'] else 'FAIL'}\n"
    return text, EXIT_OK if rep["pass"] else EXIT_FAIL


def cmd_gvalue(args) -> tuple:
    header = list(CSV_COLUMNS)
    if args.discontinuities:
        _need(args, "d")
        pts = discontinuity_report(args.d)
        out = [{"k": str(pt.k), "d": args.d,
                "left": pt.left.decimal(5) if pt.left else None,
                "left_provenance": pt.left.provenance if pt.left else None,
                "right": pt.right.decimal(5) if pt.right else None,
                "right_provenance": pt.right.provenance if pt.right else None,
                "gap": pt.gap} for pt in pts]
        header = ["k", "d", "left", "left_provenance", "right", "right_provenance", "gap"]
        rows = [[r[h] if r[h] is not None else "" for h in header] for r in out]
        return _render({"points": out}, args.format, header, rows), EXIT_OK
    _need(args, "k", "d")
    try:
        g = g_best_known(args.k, args.d)
    except OutOfRange as exc:
        raise UsageError(str(exc))
    rec = {"k": str(args.k), "d": args.d, "value_5dp": g.decimal(5), "provenance": g.provenance,
           "source": g.source, "exact": g.value.describe()}
    return _render(rec, args.format, header, [[rec[h] for h in header]]), EXIT_OK


def cmd_threshold(args) -> tuple:
    _need(args, "p", "q", "d")
    b = minimal_extension_epsilon(args.p, args.q, args.d, tol=args.tol, budget=_budget(args))
    closed, source, inside, proved = "", "lp", None, False
    try:
        g = g_best_known(Fraction(args.p, args.q), args.d)
        closed = g.value.describe()
        source = f"lp; {g.source} ({g.provenance})"
        inside = bracket_contains(b.lo, b.hi, g.value)
        proved = g.provenance == "proved"
    except OutOfRange:
        pass
    header = ["p", "q", "d", "eps_lo", "eps_hi", "closed_form", "source"]
    row = [args.p, args.q, args.d, str(b.lo), str(b.hi), closed, source]
    payload = dict(zip(header, row))
    payload.update({"closed_form_in_bracket": inside, "probes": b.probes})
    code = EXIT_FAIL if inside is False and proved else EXIT_OK
    return _render(payload, args.format, header, [row]), code


def cmd_graph_info(args) -> tuple:
    _need(args, "p", "q")
    if args.d is None:
        G = kneser(args.p, args.q)
        info = {"graph": f"K({args.p},{args.q})", "vertices": G.n, "edges": G.num_edges(),
                "degree": G.degree(0) if G.n else 0}
        if args.p > 2 * args.q:
            info["odd_girth"] = odd_girth(G)
            info["odd_girth_formula"] = kneser_odd_girth_formula(args.p, args.q)
    else:
        G = build_universal(args.p, args.q, args.d, args.n)
        info = {"graph": f"U^{args.n}_({args.p},{args.q},{args.d})", "vertices": G.n, "edges": G.num_edges(),
                "special_vertices": len(G.special)}
        if args.p > 2 * args.q:
            info["layer_independence_bound"] = layer_independence_bound(args.p, args.q, args.d)
    header = list(info)
    return _render(info, args.format, header, [[info[h] for h in header]]), EXIT_OK


COMMANDS = {
    "table1": cmd_table1, "color": cmd_color, "certify": cmd_certify, "gvalue": cmd_gvalue,
    "threshold": cmd_threshold, "graph-info": cmd_graph_info,
}


def _error(kind: str, message: str, **extra) -> str:
    return json.dumps({"error": {"kind": kind, "message": message, **extra}}, sort_keys=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(_error("usage", str(exc)), file=sys.stderr)
        return EXIT_USAGE
    except InapplicableCase as exc:
        print(_error("inapplicable_case", str(exc), condition="case applicability"), file=sys.stderr)
        return EXIT_USAGE
    except CarveError as exc:
        case = getattr(args, "case", None)
        condition = f"{case} side condition" if case else "layer measure"
        print(_error("carve_deficit", str(exc), condition=condition, context=exc.context,
                     deficit=str(exc.deficit)), file=sys.stderr)
        return EXIT_FAIL
    except BudgetExceeded as exc:
        print(_error("budget_exceeded", str(exc), budget=exc.budget), file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OutOfRange) as exc:
        print(_error("usage", str(exc)), file=sys.stderr)
        return EXIT_USAGE
    if args.out and args.command != "color":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
