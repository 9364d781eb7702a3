"""Command-line surface: count, enumerate, verify, bounds, estimate, show.

Exit codes are a stable contract: 0 success, 1 a verification check failed,
2 usage or data error, 3 a resource limit was hit.  All output is plain
text (delimited rows or fixed line protocols) so runs diff cleanly.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .asymptotics import (
    AsymptoticsError,
    BadAnchor,
    estimate_constant,
    remark_bounds,
)
from .cache import CacheMismatch, CountsCache
from .counting import count_exact, count_float
from .diagram import Diagram, DiagramError, NodeRef, parse_code
from .generation import ResourceLimit, enumerate_diagrams
from .verification import ALL_CHECKS, run_checks

__all__ = ["main", "render_ascii"]

ENUM_CEILING = 26

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

CONJECTURED_BAND = (0.023, 0.073)


def render_ascii(d: Diagram) -> str:
    """Fixed-width drawing: one row per level (top first), slashes for
    edges, ``#`` marking the two corners."""
    spacing = 4
    width = (max(d.level_sizes) - 1) * spacing + 1
    cols = {}
    for k, s in enumerate(d.level_sizes):
        span = (s - 1) * spacing
        left = (width - span) // 2
        for p in range(1, s + 1):
            cols[(k, p)] = left + (p - 1) * spacing
    marks = {d.corner_left(), d.corner_right()}
    rows = []
    for k in range(d.length, -1, -1):
        node_row = [" "] * width
        for p in range(1, d.level_sizes[k] + 1):
            node_row[cols[(k, p)]] = "#" if NodeRef(k, p) in marks else "o"
        rows.append("".join(node_row).rstrip())
        if k > 0:
            edge_row = [" "] * width
            for i, j in d.gap_edges[k - 1]:
                a, b = cols[(k - 1, i)], cols[(k, j)]
                mid = (a + b) // 2
                glyph = "|" if a == b else ("/" if b > a else "\\")
                edge_row[mid] = glyph if edge_row[mid] in (" ", glyph) else "x"
            rows.append("".join(edge_row).rstrip())
    return "\n".join(rows)


def _cmd_count(args) -> int:
    rows = None
    if args.mode == "float" and args.cache:
        print("error: the counts cache stores exact rows only", file=sys.stderr)
        return EXIT_USAGE
    if args.mode == "exact":
        if args.cache:
            try:
                cache = CountsCache.load(args.cache)
                rows = cache.extend(args.max_n, recheck_to=args.recheck)
            except CacheMismatch as e:
                print(f"error: {e}", file=sys.stderr)
                return EXIT_USAGE
        else:
            rows = count_exact(args.max_n)
        lines = [f"{r.n},{r.N},{r.W}" for r in rows]
    else:
        lines = [f"{r.n},{r.r!r},{r.err!r}" for r in count_float(args.max_n)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    if args.n > ENUM_CEILING:
        print(f"error: enumeration is capped at size {ENUM_CEILING}", file=sys.stderr)
        return EXIT_RESOURCE
    try:
        if args.emit == "codes":
            visitor = lambda d, size: print(d.code()) if size == args.n else None
            enumerate_diagrams(args.n, visitor=visitor, workers=args.workers)
        else:
            rep = enumerate_diagrams(args.n, workers=args.workers)
            w = rep.w(args.n) if args.n >= 2 else 0
            print(f"N={rep.n(args.n)} W={w}")
    except ResourceLimit as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def _cmd_verify(args) -> int:
    names = None
    if args.checks != "all":
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in names if c not in ALL_CHECKS]
        if unknown:
            print(f"error: unknown check(s): {', '.join(unknown)}", file=sys.stderr)
            return EXIT_USAGE
    reports = run_checks(args.max_n, names)
    failed = False
    for rep in reports:
        print(rep.line())
        failed = failed or not rep.passed
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _cmd_bounds(args) -> int:
    try:
        interval = remark_bounds(args.m, args.N, args.variant)
    except (BadAnchor, AsymptoticsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(interval.line())
    return EXIT_OK


def _cmd_estimate(args) -> int:
    try:
        if args.mode == "exact":
            rows = count_exact(args.max_n)
        else:
            rows = count_float(args.max_n)
        interval = estimate_constant(rows, args.max_n)
    except (BadAnchor, AsymptoticsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(interval.line())
    lo_band, hi_band = CONJECTURED_BAND
    inside = lo_band <= interval.lo and interval.hi <= hi_band
    print(f"conjectured_band,{lo_band}..{hi_band} within_band,{'yes' if inside else 'no'}")
    return EXIT_OK


def _cmd_show(args) -> int:
    codes = [args.code] if args.code else [l for l in sys.stdin.read().splitlines() if l.strip()]
    first = True
    for k, code in enumerate(codes, start=1):
        try:
            d = parse_code(code, line=k)
        except DiagramError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        if not first:
            print()
        print(render_ascii(d))
        first = False
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ssdlat",
        description="Planar slim semimodular lattice diagrams: enumeration, "
        "exact counts, lemma checks, and growth-constant bounds.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="exact or normalised counts up to a size")
    c.add_argument("--max-n", type=int, required=True)
    c.add_argument("--mode", choices=["exact", "float"], default="exact")
    c.add_argument("--out", help="write delimited rows here instead of stdout")
    c.add_argument("--cache", help="counts cache file to verify and extend")
    c.add_argument("--recheck", type=int, default=None,
                   help="recheck depth for cached rows (default: all)")
    c.set_defaults(fn=_cmd_count)

    e = sub.add_parser("enumerate", help="walk all diagrams of one size")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--emit", choices=["codes", "stats"], default="stats")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(fn=_cmd_enumerate)

    v = sub.add_parser("verify", help="run the structural lemma checks")
    v.add_argument("--max-n", type=int, required=True)
    v.add_argument("--checks", default="all",
                   help=f"comma list from: {', '.join(ALL_CHECKS)} (or 'all')")
    v.set_defaults(fn=_cmd_verify)

    b = sub.add_parser("bounds", help="two-sided bounds on C from one count")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--N", type=int, required=True)
    b.add_argument("--variant", choices=["remark", "proof"], default="proof")
    b.set_defaults(fn=_cmd_bounds)

    s = sub.add_parser("estimate", help="bounds on C anchored at --max-n")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--mode", choices=["exact", "float"], default="exact")
    s.set_defaults(fn=_cmd_estimate)

    w = sub.add_parser("show", help="ASCII-render codes (argument or stdin)")
    w.add_argument("--code", help="one canonical code; otherwise read stdin lines")
    w.set_defaults(fn=_cmd_show)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimit as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DiagramError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
