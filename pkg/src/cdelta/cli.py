"""Command line entry point: ``cdelta analyze|decompose|verify|search|cache``.

Exit codes: 0 success, 2 parse errors, 3 order cap exceeded, 4 a check failed,
5 any other error (including suite entries that could not be built or checked).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import analysis as an
from . import cache, corpus, reports
from . import theorems as th
from .dsl import build, parse_element, resolve_element
from .errors import CDeltaError
from .ring import order_cap_override

EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_CHECK_FAIL, EXIT_INTERNAL = 0, 2, 3, 4, 5
DEFAULT_CAP = 65536


def _emit(doc: dict, path: str | None, out) -> None:
    text = reports.dumps(doc)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _ring_from(args):
    if getattr(args, "from_cache", None):
        return cache.read(args.from_cache), args.from_cache
    if not args.expr:
        raise CDeltaError("a ring expression or --from-cache is required")
    R = build(args.expr)
    return R, R.provenance


def cmd_analyze(args, out) -> int:
    R, expr = _ring_from(args)
    _emit(reports.analysis_report(R, expr, full_sets=args.full_sets), args.json, out)
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    R, expr = _ring_from(args)
    a = resolve_element(R, parse_element(args.element))
    _emit(reports.decomposition_report(R, expr, a, an.normalize_kind(args.kind)), args.json, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    entries = corpus.load(args.corpus)
    selection = None
    if args.checks:
        selection = [c.strip() for c in args.checks.split(",") if c.strip()]
    report = th.run_suite(entries, selection, threads=args.threads, budget=args.derived_budget)
    doc = reports.suite_report(report, args.corpus or "standard")
    if args.json:
        _emit(doc, args.json, out)
    totals = doc["totals"]
    for r in report.results:
        if r.verdict == "fail":
            out.write(f"FAIL {r.check_id} on {r.ring}: {r.detail}\n")
    for e in report.errors:
        out.write(f"ERROR {e['check'] or 'build'} on {e['ring']}: {e['error']}: {e['message']}\n")
    out.write(
        f"{len(report.corpus)} rings x {len(report.checks)} checks: "
        f"{totals['pass']} pass, {totals['fail']} fail, {totals['not-applicable']} not-applicable, "
        f"{len(report.errors)} errors\n"
    )
    if report.fail_count:
        return EXIT_CHECK_FAIL
    return EXIT_INTERNAL if report.errors else EXIT_OK


def cmd_search(args, out) -> int:
    entries = corpus.load(args.corpus)
    an.parse_predicate(args.where)  # reject a bad predicate before building anything
    found = 0
    for name, rep in an.search(((n, (lambda e=e: build(e))) for n, e in entries), args.where):
        out.write(json.dumps(reports.search_match(name, rep), ensure_ascii=False) + "\n")
        found += 1
    sys.stderr.write(f"{found} match(es)\n")
    return EXIT_OK


def cmd_cache(args, out) -> int:
    if args.from_cache:
        R = cache.read(args.from_cache)
        doc = {"file": args.from_cache, "order": R.order, "zero": R.zero, "one": R.one,
               "bytes": os.path.getsize(args.from_cache)}
        if args.out:
            doc["written"] = cache.write(R, args.out)
        _emit(doc, None, out)
        return EXIT_OK
    if not args.expr or not args.out:
        raise CDeltaError("cache needs an expression and --out, or --from-cache")
    R = build(args.expr)
    n = cache.write(R, args.out)
    _emit({"expression": R.provenance, "file": args.out, "order": R.order, "bytes": n}, None, out)
    return EXIT_OK


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--order-cap", type=int, default=d(DEFAULT_CAP), help="refuse rings larger than this")
    p.add_argument("--threads", type=int, default=d(1), help="worker threads for verify")
    p.add_argument("--seed", type=int, default=d(None), help="accepted and ignored; all output is deterministic")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdelta", description="Finite ring workbench for CΔ decompositions.")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    a = sub.add_parser("analyze", parents=[common], help="classify one ring")
    a.add_argument("expr", nargs="?")
    a.add_argument("--from-cache", metavar="FILE")
    a.add_argument("--full-sets", action="store_true", help="include element labels, subsets and witness tables")
    a.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", parents=[common], help="find a decomposition of one element")
    d.add_argument("expr", nargs="?")
    d.add_argument("--from-cache", metavar="FILE")
    d.add_argument("--element", required=True)
    d.add_argument("--kind", default="cdelta", help=", ".join(an.KINDS))
    d.add_argument("--json", metavar="PATH")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", parents=[common], help="run the theorem catalog over a corpus")
    v.add_argument("--corpus", metavar="FILE", help="JSON corpus (default: bundled standard corpus)")
    v.add_argument("--checks", metavar="IDS", help="comma-separated check ids (default: all)")
    v.add_argument("--json", metavar="PATH")
    v.add_argument("--derived-budget", type=int, default=th.DEFAULT_DERIVED_BUDGET,
                   help="largest auxiliary ring a check may build")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="filter a corpus by a property predicate")
    s.add_argument("--corpus", metavar="FILE")
    s.add_argument("--where", required=True, help='e.g. "cdelta & !cj"')
    s.set_defaults(func=cmd_search)

    c = sub.add_parser("cache", parents=[common], help="write or load a binary table cache")
    c.add_argument("expr", nargs="?")
    c.add_argument("--out", metavar="FILE")
    c.add_argument("--from-cache", metavar="FILE")
    c.set_defaults(func=cmd_cache)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        with order_cap_override(args.order_cap):
            return args.func(args, out)
    except CDeltaError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
