"""Reverse-search generation of slim semimodular diagrams.

Every slim semimodular diagram of size at least two has exactly one parent:
remove the bottom when the left rank is zero, otherwise remove the left
corner.  Inverting that parent function gives each diagram at most two
children, namely a new bottom hung under the old one, and, when the corner
is not a coatom, a new node to the left of the boundary covering the corner.
Walking the resulting tree from the one-element diagram therefore visits
every diagram exactly once, with no isomorphism rejection and no storage of
previously seen objects.

The walker below operates on a compact mutable encoding (per-gap adjacency
rows) with O(level-size) apply/undo surgeries, so full tree walks up to size
26 stay cheap.  An independent brute-force enumerator over all leveled
noncrossing encodings acts as the oracle for the whole scheme.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator, Optional

from .diagram import Diagram, DiagramError, build, render_code

__all__ = [
    "GenerationError",
    "CornerIsCoatom",
    "RankZero",
    "ResourceLimit",
    "ParentTag",
    "EnumerationReport",
    "add_bottom",
    "insert_left_corner",
    "remove_corner",
    "remove_bottom",
    "parent",
    "children",
    "insert_blocked",
    "enumerate_diagrams",
    "brute_force_lattices",
    "brute_force_enumerate",
    "BRUTE_FORCE_CEILING",
]

BRUTE_FORCE_CEILING = 10
DEFAULT_NODE_BUDGET = 500_000_000


class GenerationError(DiagramError):
    """Base class for generation-specific errors."""


class CornerIsCoatom(GenerationError):
    """Insertion is blocked: the left corner is a coatom (or size is 1)."""


class RankZero(GenerationError):
    """The left corner is the bottom; remove the bottom instead."""


class ResourceLimit(GenerationError):
    """A configured node budget or size ceiling was exceeded."""


class ParentTag(Enum):
    REMOVED_BOTTOM = "removed-bottom"
    REMOVED_LEFT_CORNER = "removed-left-corner"


# -- single-step surgeries on Diagram values ---------------------------------


def add_bottom(e: Diagram) -> Diagram:
    """Hang a new bottom under e; the child has left rank zero."""
    return Diagram((1,) + e.level_sizes, (((1, 1),),) + e.gap_edges)


def insert_blocked(e: Diagram) -> bool:
    """True when e has no insertion child (its corner is a coatom)."""
    return e.n == 1 or e.left_rank() == e.length - 1


def insert_left_corner(e: Diagram) -> Diagram:
    """Add a new node to the left of the boundary, covering the corner.

    With p the left corner and q its unique upper cover, the new node x sits
    leftmost on q's level and carries exactly the edges p-x and x-w, where w
    is the leftmost upper cover of q.  The result has the same length, its
    corner is x, and removing x gives back e.
    """
    if e.n == 1:
        raise CornerIsCoatom("the one-element diagram has no insertion child")
    r = e.left_rank()
    if r == e.length - 1:
        raise CornerIsCoatom(f"left corner {e.corner_left()} is a coatom")
    # The corner is on the left boundary, so q is the next boundary node.
    assert e.up_covers((r, 1)) == ((r + 1, 1),)
    jw = e.up_covers((r + 1, 1))[0].pos
    sizes = list(e.level_sizes)
    sizes[r + 1] += 1
    gaps = [list(p) for p in e.gap_edges]
    gaps[r] = [(i, j + 1) for i, j in gaps[r]] + [(1, 1)]
    gaps[r + 1] = [(i + 1, j) for i, j in gaps[r + 1]] + [(1, jw)]
    return Diagram(sizes, gaps)


def remove_corner(d: Diagram) -> Diagram:
    """Delete the left corner and its two edges (the hat of d)."""
    r = d.left_rank()
    if r == 0:
        raise RankZero("left rank is zero; the parent removes the bottom")
    sizes = list(d.level_sizes)
    assert sizes[r] >= 2
    sizes[r] -= 1
    gaps = [list(p) for p in d.gap_edges]
    below = [(i, j - 1) for i, j in gaps[r - 1] if j != 1]
    above = [(i - 1, j) for i, j in gaps[r] if i != 1]
    assert len(below) == len(gaps[r - 1]) - 1 and len(above) == len(gaps[r]) - 1
    gaps[r - 1] = below
    gaps[r] = above
    return Diagram(sizes, gaps)


def remove_bottom(d: Diagram) -> Diagram:
    """Delete the bottom; requires left rank zero (bottom has one cover)."""
    if d.n == 1:
        raise GenerationError("the one-element diagram has no parent")
    if d.left_rank() != 0:
        raise GenerationError("bottom has two covers; remove the corner instead")
    return Diagram(d.level_sizes[1:], d.gap_edges[1:])


def parent(d: Diagram) -> tuple[Diagram, ParentTag]:
    """The unique parent in the generation tree, for size >= 2."""
    if d.n < 2:
        raise GenerationError("the one-element diagram has no parent")
    if d.left_rank() == 0:
        return remove_bottom(d), ParentTag.REMOVED_BOTTOM
    return remove_corner(d), ParentTag.REMOVED_LEFT_CORNER


def children(e: Diagram, validate: bool = False) -> list[Diagram]:
    """All children of e, bottom-extension first.

    With ``validate`` the products are re-checked to be slim and semimodular
    (belt and braces during development; the surgeries guarantee it).
    """
    out = [add_bottom(e)]
    if not insert_blocked(e):
        out.append(insert_left_corner(e))
    if validate:
        for c in out:
            if not (c.is_slim() and c.is_semimodular() and c.gk_condition()):
                raise GenerationError(f"child {c.code()} failed revalidation")
    return out


# -- the fast tree walker ------------------------------------------------------
#
# State: ups[k][p-1] is the sorted tuple of upper-cover positions of node
# (k, p); the top level is implicit.  The left corner is always node
# (rank, 1) and its unique upper cover is (rank+1, 1), so both surgeries and
# their undos touch one or two adjacency rows only.


class _Ctx:
    __slots__ = ("n_max", "counts", "blocked", "hist_to", "hists", "visitor", "budget")

    def __init__(self, n_max, hist_to, visitor, budget):
        self.n_max = n_max
        self.counts = [0] * (n_max + 1)
        self.blocked = [0] * (n_max + 1)
        self.hist_to = hist_to
        self.hists = {s: defaultdict(int) for s in range(1, min(hist_to, n_max) + 1)}
        self.visitor = visitor
        self.budget = budget


def _ups_to_diagram(ups) -> Diagram:
    sizes = [len(row) for row in ups] + [1]
    gaps = [
        [(i + 1, j) for i, t in enumerate(row) for j in t] for row in ups
    ]
    return build(sizes, gaps)


def _visit(ctx: _Ctx, ups, rank, size) -> bool:
    """Count one node; returns its insertion-blocked flag."""
    ctx.counts[size] += 1
    ctx.budget -= 1
    if ctx.budget < 0:
        raise ResourceLimit("node budget exceeded")
    length = len(ups)
    blk = size == 1 or rank == length - 1
    if blk:
        ctx.blocked[size] += 1
    if size <= ctx.hist_to:
        ctx.hists[size][(rank, length)] += 1
    if ctx.visitor is not None:
        ctx.visitor(_ups_to_diagram(ups), size)
    return blk


def _expand(ctx: _Ctx, ups, rank, size, blk) -> None:
    if size == ctx.n_max:
        return
    child = size + 1
    # bottom extension
    ups.insert(0, [(1,)])
    _walk(ctx, ups, 0, child)
    del ups[0]
    if not blk:
        # corner insertion at level rank+1
        lvl = rank + 1
        row = ups[rank]
        jw = ups[lvl][0][0]
        new_row = [tuple(j + 1 for j in t) for t in row]
        new_row[0] = (1, row[0][0] + 1)
        ups[rank] = new_row
        ups[lvl].insert(0, (jw,))
        _walk(ctx, ups, lvl, child)
        del ups[lvl][0]
        ups[rank] = row


def _walk(ctx: _Ctx, ups, rank, size) -> None:
    blk = _visit(ctx, ups, rank, size)
    _expand(ctx, ups, rank, size, blk)


@dataclass
class EnumerationReport:
    """Per-size totals from one full tree walk."""

    n_max: int
    counts: list[int]
    blocked: list[int]
    histograms: dict[int, dict[tuple[int, int], int]]
    nodes_visited: int

    def n(self, size: int) -> int:
        return self.counts[size]

    def w(self, size: int) -> int:
        """Diagrams of size ``size``-1 with no insertion child."""
        if size == 1:
            raise ValueError("W starts at size 2")
        return self.blocked[size - 1]


def _subtree_job(args):
    ups_t, rank, n_max, hist_to, emit_codes = args
    ups = [[t for t in row] for row in ups_t]
    codes: Optional[list[tuple[int, str]]] = [] if emit_codes else None
    visitor = None
    if emit_codes:
        visitor = lambda d, s: codes.append((s, render_code(d)))
    ctx = _Ctx(n_max, hist_to, visitor, DEFAULT_NODE_BUDGET)
    size = sum(len(row) for row in ups) + 1
    length = len(ups)
    blk = size == 1 or rank == length - 1
    _expand(ctx, ups, rank, size, blk)
    return ctx.counts, ctx.blocked, {s: dict(h) for s, h in ctx.hists.items()}, codes


def enumerate_diagrams(
    n_max: int,
    visitor: Optional[Callable[[Diagram, int], None]] = None,
    workers: int = 1,
    histograms_to: int = 0,
    node_budget: Optional[int] = None,
    frontier_size: int = 12,
) -> EnumerationReport:
    """Walk the generation tree and count every diagram of size <= n_max.

    The visitor, when given, receives each diagram exactly once together
    with its size; with one worker the order is deterministic (bottom
    extension explored before corner insertion).  Counts are identical for
    any worker count.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    budget = node_budget if node_budget is not None else DEFAULT_NODE_BUDGET
    hist_to = min(histograms_to, n_max)
    if workers <= 1 or n_max <= frontier_size:
        ctx = _Ctx(n_max, hist_to, visitor, budget)
        _walk(ctx, [], 0, 1)
        visited = budget - ctx.budget
        return EnumerationReport(
            n_max, ctx.counts, ctx.blocked, {s: dict(h) for s, h in ctx.hists.items()}, visited
        )

    # Parallel mode: walk serially down to the frontier (streaming those
    # diagrams to the visitor), then farm the frontier subtrees out to
    # worker processes and merge their tallies.
    frontier: list[tuple] = []

    def collect(ups, rank, size):
        frontier.append((tuple(tuple(t for t in row) for row in ups), rank))

    ctx = _Ctx(frontier_size, hist_to, visitor, budget)
    _walk_collect(ctx, [], 0, 1, frontier_size, collect)
    counts = ctx.counts + [0] * (n_max - frontier_size)
    blocked = ctx.blocked + [0] * (n_max - frontier_size)
    hists = {s: defaultdict(int, h) for s, h in ctx.hists.items()}
    for s in range(frontier_size + 1, hist_to + 1):
        hists[s] = defaultdict(int)
    emit = visitor is not None
    jobs = [(ups_t, rank, n_max, hist_to, emit) for ups_t, rank in frontier]
    visited = budget - ctx.budget
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for pcounts, pblocked, phists, pcodes in ex.map(_subtree_job, jobs):
            for s in range(1, n_max + 1):
                counts[s] += pcounts[s]
                blocked[s] += pblocked[s]
            for s, h in phists.items():
                for st, c in h.items():
                    hists[s][st] += c
            visited += sum(pcounts)
            if pcodes:
                from .diagram import parse_code

                for s, code in pcodes:
                    visitor(parse_code(code), s)
    if visited > budget:
        raise ResourceLimit("node budget exceeded")
    return EnumerationReport(
        n_max, counts, blocked, {s: dict(h) for s, h in hists.items()}, visited
    )


def _walk_collect(ctx, ups, rank, size, frontier_size, collect):
    blk = _visit(ctx, ups, rank, size)
    if size == frontier_size:
        collect(ups, rank, size)
        return
    _expand_collect(ctx, ups, rank, size, blk, frontier_size, collect)


def _expand_collect(ctx, ups, rank, size, blk, frontier_size, collect):
    child = size + 1
    ups.insert(0, [(1,)])
    _walk_collect(ctx, ups, 0, child, frontier_size, collect)
    del ups[0]
    if not blk:
        lvl = rank + 1
        row = ups[rank]
        jw = ups[lvl][0][0]
        new_row = [tuple(j + 1 for j in t) for t in row]
        new_row[0] = (1, row[0][0] + 1)
        ups[rank] = new_row
        ups[lvl].insert(0, (jw,))
        _walk_collect(ctx, ups, lvl, child, frontier_size, collect)
        del ups[lvl][0]
        ups[rank] = row


# -- independent brute-force oracle --------------------------------------------


@lru_cache(maxsize=None)
def _gap_graphs(s: int, t: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All noncrossing edge sets between s lower and t upper nodes that
    cover every node.

    Sorted edge lists of such sets are exactly the staircase walks from
    (1, 1) to (s, t) with steps (0,1), (1,0), (1,1): skipping a position on
    either side would leave it uncovered or force a crossing.
    """
    if s == 1 and t == 1:
        return (((1, 1),),)
    out = []
    if s > 1:
        out.extend(p + ((s, t),) for p in _gap_graphs(s - 1, t))
    if t > 1:
        out.extend(p + ((s, t),) for p in _gap_graphs(s, t - 1))
    if s > 1 and t > 1:
        out.extend(p + ((s, t),) for p in _gap_graphs(s - 1, t - 1))
    return tuple(out)


def _mid_compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _mid_compositions(total - first):
            yield (first,) + rest


def _level_compositions(n: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (1,)
    elif n == 2:
        yield (1, 1)
    else:
        for mid in _mid_compositions(n - 2):
            yield (1,) + mid + (1,)


def brute_force_lattices(n: int, ceiling: int = BRUTE_FORCE_CEILING) -> Iterator[Diagram]:
    """Every validated leveled noncrossing lattice diagram of size n.

    This enumerates all level compositions (bottom and top level of size
    one), all covering noncrossing edge sets per gap, and keeps exactly the
    candidates that validate as lattices.  It never looks at the generation
    tree, so it can serve as an oracle for it.
    """
    if n > ceiling:
        raise ResourceLimit(f"brute force is capped at size {ceiling}")
    if n < 1:
        return
    for sizes in _level_compositions(n):
        stacks = [_gap_graphs(sizes[g], sizes[g + 1]) for g in range(len(sizes) - 1)]
        for gaps in _product(stacks):
            try:
                yield Diagram(sizes, gaps)
            except DiagramError:
                continue


def _product(stacks):
    if not stacks:
        yield ()
        return
    head, *rest = stacks
    for h in head:
        for r in _product(rest):
            yield (h,) + r


def brute_force_enumerate(n: int, ceiling: int = BRUTE_FORCE_CEILING) -> set[str]:
    """Canonical codes of all slim semimodular diagrams of size n, from scratch."""
    return {
        d.code()
        for d in brute_force_lattices(n, ceiling)
        if d.is_slim() and d.is_semimodular()
    }
