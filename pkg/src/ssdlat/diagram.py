"""Leveled planar lattice diagrams with exact order-theoretic queries.

A diagram is a graded Hasse diagram drawn on horizontal levels: level 0 is
the bottom, every cover edge joins two adjacent levels, and the nodes of one
level are read left to right.  Within one gap (a pair of adjacent levels)
the cover edges must be noncrossing, so the encoding pins down a planar
drawing up to deformations that keep all left-to-right orders.  Equality of
canonical codes is therefore the working notion of similarity here: one
``Diagram`` value stands for one similarity class.

All structural validation happens on construction.  A ``Diagram`` that
exists is a planar leveled lattice: it has a unique bottom and top, no
dangling node, no crossing, and every pair of elements has a unique join
and meet.  Queries after that are pure lookups in precomputed tables
(reachability bitmasks plus full join/meet tables), which keeps every
predicate simple and obviously correct at the sizes this package handles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

__all__ = [
    "DiagramError",
    "NotBoundedPoset",
    "Crossing",
    "NotLattice",
    "BoundaryNotChain",
    "ParseError",
    "NodeRef",
    "Cell",
    "Diagram",
    "build",
    "chain",
    "render_code",
    "parse_code",
]

CODE_PREFIX = "SSD1"


class DiagramError(Exception):
    """Base class for structural errors raised by this package."""


class NotBoundedPoset(DiagramError):
    """No unique bottom/top, or some node is missing a cover."""


class Crossing(DiagramError):
    """Two cover edges inside one gap cross."""


class NotLattice(DiagramError):
    """Some pair of nodes has no unique join or no unique meet."""


class BoundaryNotChain(DiagramError):
    """A boundary walk is not a maximal chain (corrupt structure)."""


class ParseError(DiagramError):
    """Canonical-code text failed to parse; carries line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NodeRef(NamedTuple):
    """A node addressed by level (0 = bottom) and 1-based position."""

    level: int
    pos: int


@dataclass(frozen=True)
class Cell:
    """One internal face of the drawing, split into its two boundary chains.

    ``left`` and ``right`` both run from ``bottom`` to ``top`` inclusive.
    """

    bottom: NodeRef
    top: NodeRef
    left: tuple[NodeRef, ...]
    right: tuple[NodeRef, ...]

    @property
    def elements(self) -> frozenset[NodeRef]:
        return frozenset(self.left) | frozenset(self.right)

    def __len__(self) -> int:
        return len(self.elements)


GapEdges = Union[
    Mapping[int, Iterable[tuple[int, int]]],
    Sequence[Iterable[tuple[int, int]]],
]


def _normalize_gaps(level_sizes: Sequence[int], gap_edges: GapEdges):
    gaps = len(level_sizes) - 1
    rows: list[Iterable[tuple[int, int]]]
    if isinstance(gap_edges, Mapping):
        for g in gap_edges:
            if not 0 <= int(g) < gaps:
                raise NotBoundedPoset(f"gap index {g} out of range 0..{gaps - 1}")
        rows = [gap_edges.get(g, ()) for g in range(gaps)]
    else:
        rows = list(gap_edges)
        if len(rows) != gaps:
            raise NotBoundedPoset(
                f"expected {gaps} gap edge groups, got {len(rows)}"
            )
    out = []
    for g, row in enumerate(rows):
        pairs = sorted({(int(i), int(j)) for i, j in row})
        for i, j in pairs:
            if not (1 <= i <= level_sizes[g]):
                raise NotBoundedPoset(
                    f"gap {g}: source position {i} out of range 1..{level_sizes[g]}"
                )
            if not (1 <= j <= level_sizes[g + 1]):
                raise NotBoundedPoset(
                    f"gap {g}: target position {j} out of range 1..{level_sizes[g + 1]}"
                )
        out.append(tuple(pairs))
    return tuple(out)


class Diagram:
    """One similarity class of a planar leveled lattice diagram.

    Construction validates everything; instances are immutable and all
    queries are pure.  Do not mutate the stored tuples.
    """

    __slots__ = (
        "level_sizes",
        "gap_edges",
        "_offsets",
        "_up",
        "_down",
        "_upmask",
        "_downmask",
        "_join",
        "_meet",
        "_cells",
    )

    def __init__(self, level_sizes: Sequence[int], gap_edges: GapEdges):
        sizes = tuple(int(s) for s in level_sizes)
        if not sizes or any(s <= 0 for s in sizes):
            raise NotBoundedPoset("level sizes must be a nonempty list of positive ints")
        if sizes[0] != 1:
            raise NotBoundedPoset("bottom level must have exactly one node")
        if sizes[-1] != 1:
            raise NotBoundedPoset("top level must have exactly one node")
        self.level_sizes = sizes
        self.gap_edges = _normalize_gaps(sizes, gap_edges)

        offsets = [0]
        for s in sizes:
            offsets.append(offsets[-1] + s)
        self._offsets = tuple(offsets)
        n = offsets[-1]

        up: list[list[int]] = [[] for _ in range(n)]
        down: list[list[int]] = [[] for _ in range(n)]
        for g, pairs in enumerate(self.gap_edges):
            base, nxt = offsets[g], offsets[g + 1]
            for i, j in pairs:
                up[base + i - 1].append(nxt + j - 1)
                down[nxt + j - 1].append(base + i - 1)
        self._up = tuple(tuple(sorted(t)) for t in up)
        self._down = tuple(tuple(sorted(t)) for t in down)

        self._check_degrees()
        self._check_noncrossing()
        self._build_order_tables()
        self._cells = None

    # -- construction-time validation ------------------------------------

    def _check_degrees(self) -> None:
        top = self.n - 1
        for x in range(self.n):
            if x != top and not self._up[x]:
                raise NotBoundedPoset(f"node {self._ref(x)} has no upper cover")
            if x != 0 and not self._down[x]:
                raise NotBoundedPoset(f"node {self._ref(x)} has no lower cover")

    def _check_noncrossing(self) -> None:
        for g, pairs in enumerate(self.gap_edges):
            run_max = 0
            prev_i = 0
            for i, j in pairs:  # sorted lexicographically
                if i != prev_i:
                    # entering a new source; everything before has smaller i
                    if j < run_max:
                        raise Crossing(
                            f"gap {g}: edge {i}-{j} crosses an edge from a source to its left"
                        )
                    prev_i = i
                run_max = max(run_max, j)

    def _build_order_tables(self) -> None:
        n = self.n
        upmask = [0] * n
        for x in range(n - 1, -1, -1):
            m = 1 << x
            for y in self._up[x]:
                m |= upmask[y]
            upmask[x] = m
        downmask = [0] * n
        for x in range(n):
            m = 1 << x
            for y in self._down[x]:
                m |= downmask[y]
            downmask[x] = m
        self._upmask = upmask
        self._downmask = downmask

        join = [[0] * n for _ in range(n)]
        meet = [[0] * n for _ in range(n)]
        for u in range(n):
            ju, mu_ = join[u], meet[u]
            for v in range(u, n):
                common = upmask[u] & upmask[v]
                w = (common & -common).bit_length() - 1
                if common & ~upmask[w]:
                    raise NotLattice(
                        f"{self._ref(u)} and {self._ref(v)} have no least upper bound"
                    )
                ju[v] = w
                join[v][u] = w
                common = downmask[u] & downmask[v]
                w = common.bit_length() - 1
                if common & ~downmask[w]:
                    raise NotLattice(
                        f"{self._ref(u)} and {self._ref(v)} have no greatest lower bound"
                    )
                mu_[v] = w
                meet[v][u] = w
        self._join = join
        self._meet = meet

    # -- basic geometry ----------------------------------------------------

    @property
    def n(self) -> int:
        """Number of elements."""
        return self._offsets[-1]

    @property
    def length(self) -> int:
        """Number of levels minus one; the height of the top element."""
        return len(self.level_sizes) - 1

    def nodes(self) -> Iterator[NodeRef]:
        for k, s in enumerate(self.level_sizes):
            for p in range(1, s + 1):
                yield NodeRef(k, p)

    def _idx(self, ref) -> int:
        k, p = ref
        if not (0 <= k < len(self.level_sizes) and 1 <= p <= self.level_sizes[k]):
            raise DiagramError(f"node reference {(k, p)} out of range")
        return self._offsets[k] + p - 1

    def _ref(self, idx: int) -> NodeRef:
        lo, hi = 0, len(self.level_sizes) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._offsets[mid] <= idx:
                lo = mid
            else:
                hi = mid - 1
        return NodeRef(lo, idx - self._offsets[lo] + 1)

    @property
    def bottom(self) -> NodeRef:
        return NodeRef(0, 1)

    @property
    def top(self) -> NodeRef:
        return NodeRef(self.length, 1)

    def up_covers(self, ref) -> tuple[NodeRef, ...]:
        return tuple(self._ref(i) for i in self._up[self._idx(ref)])

    def down_covers(self, ref) -> tuple[NodeRef, ...]:
        return tuple(self._ref(i) for i in self._down[self._idx(ref)])

    # -- order queries -----------------------------------------------------

    def leq(self, u, v) -> bool:
        return bool(self._upmask[self._idx(u)] >> self._idx(v) & 1)

    def covers(self, u, v) -> bool:
        """True when v covers u."""
        return self._idx(v) in self._up[self._idx(u)]

    def join(self, u, v) -> NodeRef:
        return self._ref(self._join[self._idx(u)][self._idx(v)])

    def meet(self, u, v) -> NodeRef:
        return self._ref(self._meet[self._idx(u)][self._idx(v)])

    def ideal(self, ref) -> frozenset[NodeRef]:
        """All elements below or equal to ``ref``."""
        m = self._downmask[self._idx(ref)]
        return frozenset(self._ref(i) for i in _bits(m))

    # -- lattice-theoretic predicates ---------------------------------------

    def is_semimodular(self) -> bool:
        """x wedge y covered by x implies y covered by x vee y, for all x, y."""
        n = self.n
        meet, join, up = self._meet, self._join, self._up
        for x in range(n):
            mx = meet[x]
            jx = join[x]
            for y in range(n):
                if mx[y] != x and x in up[mx[y]]:
                    if jx[y] not in up[y]:
                        return False
        return True

    def join_irreducibles(self) -> frozenset[NodeRef]:
        """Elements with exactly one lower cover; the bottom is excluded."""
        return frozenset(
            self._ref(x) for x in range(1, self.n) if len(self._down[x]) == 1
        )

    def is_slim(self) -> bool:
        """No three-element antichain among the join-irreducible elements."""
        jir = sorted(self._idx(r) for r in self.join_irreducibles())
        upmask = self._upmask
        k = len(jir)
        for a in range(k):
            x = jir[a]
            for b in range(a + 1, k):
                y = jir[b]
                if upmask[x] >> y & 1 or upmask[y] >> x & 1:
                    continue
                for c in range(b + 1, k):
                    z = jir[c]
                    if not (
                        upmask[x] >> z & 1
                        or upmask[z] >> x & 1
                        or upmask[y] >> z & 1
                        or upmask[z] >> y & 1
                    ):
                        return False
        return True

    # -- cells ---------------------------------------------------------------

    def cells(self) -> tuple[Cell, ...]:
        """All internal faces of the drawing, each as two boundary chains."""
        if self._cells is None:
            self._cells = self._trace_cells()
        return self._cells

    def _trace_cells(self) -> tuple[Cell, ...]:
        n = self.n
        if n == 1:
            return ()
        # Counterclockwise rotation at a node: lower neighbours left to
        # right, then upper neighbours right to left.
        prev_in_rot: dict[tuple[int, int], int] = {}
        for v in range(n):
            rot = list(self._down[v]) + list(reversed(self._up[v]))
            m = len(rot)
            for t, u in enumerate(rot):
                prev_in_rot[(v, u)] = rot[(t - 1) % m]

        darts = []
        for x in range(n):
            for y in self._up[x]:
                darts.append((x, y))
                darts.append((y, x))
        seen: set[tuple[int, int]] = set()
        faces = []
        for start in darts:
            if start in seen:
                continue
            face = []
            d = start
            while True:
                face.append(d)
                seen.add(d)
                u, v = d
                d = (v, prev_in_rot[(v, u)])
                if d == start:
                    break
            faces.append(face)

        outer_dart = (0, self._up[0][0])
        cells = []
        for face in faces:
            if any(d == outer_dart for d in face):
                continue
            cycle = [d[0] for d in face]
            if len(set(cycle)) != len(cycle):
                raise DiagramError("internal face boundary is not a simple cycle")
            levels = [self._ref(x).level for x in cycle]
            b = levels.index(min(levels))
            cycle = cycle[b:] + cycle[:b]
            levels = levels[b:] + levels[:b]
            t = levels.index(max(levels))
            right = cycle[: t + 1]
            left = [cycle[0]] + cycle[t + 1 :][::-1] + [cycle[t]]
            if [self._ref(x).level for x in right] != list(range(levels[0], levels[t] + 1)):
                raise DiagramError("internal face boundary is not two monotone chains")
            if [self._ref(x).level for x in left] != list(range(levels[0], levels[t] + 1)):
                raise DiagramError("internal face boundary is not two monotone chains")
            cells.append(
                Cell(
                    bottom=self._ref(cycle[0]),
                    top=self._ref(cycle[t]),
                    left=tuple(self._ref(x) for x in left),
                    right=tuple(self._ref(x) for x in right),
                )
            )
        cells.sort(key=lambda c: (self._idx(c.bottom), self._idx(c.right[1])))
        return tuple(cells)

    def is_four_cell(self) -> bool:
        """Every internal face has exactly four elements."""
        return all(len(c) == 4 for c in self.cells())

    def gk_condition(self) -> bool:
        """Four-cell, and same-bottom cells always share their top."""
        if not self.is_four_cell():
            return False
        top_of: dict[NodeRef, NodeRef] = {}
        for c in self.cells():
            t = top_of.setdefault(c.bottom, c.top)
            if t != c.top:
                return False
        return True

    # -- boundaries and corners ----------------------------------------------

    def boundaries(self) -> tuple[tuple[NodeRef, ...], tuple[NodeRef, ...]]:
        """Left and right boundary chains, bottom to top, verified."""
        left = tuple(NodeRef(k, 1) for k in range(len(self.level_sizes)))
        right = tuple(NodeRef(k, self.level_sizes[k]) for k in range(len(self.level_sizes)))
        for k in range(self.length):
            lups = self._up[self._idx(left[k])]
            if self._ref(lups[0]) != left[k + 1]:
                raise BoundaryNotChain(
                    f"leftmost upward edge of {left[k]} misses the left boundary"
                )
            rups = self._up[self._idx(right[k])]
            if self._ref(rups[-1]) != right[k + 1]:
                raise BoundaryNotChain(
                    f"rightmost upward edge of {right[k]} misses the right boundary"
                )
        return left, right

    def _corner(self, side: str) -> NodeRef:
        if self.n == 1:
            return NodeRef(0, 1)
        for k in range(self.length):  # the top level never qualifies for n >= 2
            ref = NodeRef(k, 1 if side == "left" else self.level_sizes[k])
            x = self._idx(ref)
            if len(self._up[x]) == 1 and (k == 0 or len(self._down[x]) == 1):
                return ref
        raise DiagramError(f"no doubly irreducible element on the {side} boundary")

    def corner_left(self) -> NodeRef:
        """Lowest doubly irreducible element of the left boundary."""
        return self._corner("left")

    def corner_right(self) -> NodeRef:
        return self._corner("right")

    def left_rank(self) -> int:
        return self.corner_left().level

    def right_rank(self) -> int:
        return self.corner_right().level

    # -- transforms ------------------------------------------------------------

    def mirror(self) -> "Diagram":
        """Left-right reflection; an involution on canonical codes."""
        sizes = self.level_sizes
        gaps = []
        for g, pairs in enumerate(self.gap_edges):
            s, t = sizes[g], sizes[g + 1]
            gaps.append([(s - i + 1, t - j + 1) for i, j in pairs])
        return Diagram(sizes, gaps)

    # -- identity ---------------------------------------------------------------

    def code(self) -> str:
        return render_code(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Diagram)
            and self.level_sizes == other.level_sizes
            and self.gap_edges == other.gap_edges
        )

    def __hash__(self) -> int:
        return hash((self.level_sizes, self.gap_edges))

    def __repr__(self) -> str:
        return f"Diagram({self.code()!r})"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build(level_sizes: Sequence[int], gap_edges: GapEdges) -> Diagram:
    """Validate an encoding and return the Diagram it describes."""
    return Diagram(level_sizes, gap_edges)


def chain(k: int) -> Diagram:
    """The k-element chain."""
    if k < 1:
        raise DiagramError("chain needs at least one element")
    return Diagram([1] * k, [[(1, 1)] for _ in range(k - 1)])


def render_code(d: Diagram) -> str:
    """Canonical one-line text encoding; equal codes mean similar diagrams."""
    levels = ",".join(str(s) for s in d.level_sizes)
    gaps = ";".join(
        f"{g}:" + ",".join(f"{i}-{j}" for i, j in pairs)
        for g, pairs in enumerate(d.gap_edges)
    )
    return f"{CODE_PREFIX} n={d.n} L={levels} E={gaps}"


class _Scanner:
    def __init__(self, text: str, line: int = 1):
        self.text = text
        self.pos = 0
        self.line = line

    def fail(self, message: str):
        raise ParseError(message, self.line, self.pos + 1)

    def expect(self, token: str):
        if not self.text.startswith(token, self.pos):
            self.fail(f"expected {token!r}")
        self.pos += len(token)

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("expected an integer")
        return int(self.text[start : self.pos])

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def done(self) -> bool:
        return self.pos >= len(self.text)


def parse_code(text: str, line: int = 1) -> Diagram:
    """Parse one canonical-code line back into a validated Diagram."""
    sc = _Scanner(text.rstrip("\n"), line)
    sc.expect(CODE_PREFIX)
    sc.expect(" n=")
    n = sc.integer()
    sc.expect(" L=")
    sizes = [sc.integer()]
    while sc.peek() == ",":
        sc.pos += 1
        sizes.append(sc.integer())
    sc.expect(" E=")
    gaps: list[list[tuple[int, int]]] = []
    if not sc.done():
        while True:
            g = sc.integer()
            if g != len(gaps):
                sc.fail(f"gap index {g} out of order (expected {len(gaps)})")
            sc.expect(":")
            pairs = []
            while True:
                i = sc.integer()
                sc.expect("-")
                j = sc.integer()
                pairs.append((i, j))
                if sc.peek() == ",":
                    sc.pos += 1
                    continue
                break
            gaps.append(pairs)
            if sc.peek() == ";":
                sc.pos += 1
                continue
            break
    if not sc.done():
        sc.fail("trailing characters after edge list")
    if n != sum(sizes):
        sc.fail(f"declared size {n} does not match level sizes {sizes}")
    if len(gaps) != len(sizes) - 1:
        sc.fail(f"expected {len(sizes) - 1} gap groups, got {len(gaps)}")
    d = Diagram(sizes, gaps)
    return d
