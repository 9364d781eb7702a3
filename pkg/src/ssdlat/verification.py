"""Machine checks of the structural lemmas on enumerated data.

Each check streams enumerated diagrams (exhaustively up to a small size,
then by a deterministic stride sample) and verifies one structural claim:
the rank dichotomy, join-irreducibility below the corner, the four-cell
characterisation of semimodularity, the coatom description of the blocked
set, the trunk decomposition of blocked diagrams, the partition counts
behind the two-child recursion, and mirror symmetry.  A mutation suite
corrupts valid diagrams one edge or node at a time and demands that some
predicate notices, so a silently weakened check cannot stay green.

All checks return a ``CheckReport``; they never raise on a failed property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .counting import count_exact
from .diagram import Diagram, DiagramError, NodeRef, build
from .generation import (
    brute_force_lattices,
    enumerate_diagrams,
    insert_blocked,
    remove_corner,
)

__all__ = [
    "CheckReport",
    "sampled_diagrams",
    "check_dichotomy",
    "check_corner_ideal",
    "check_gk",
    "check_w_set",
    "check_trunk",
    "check_partitions",
    "check_mirror",
    "check_mutants",
    "ALL_CHECKS",
    "run_checks",
]

EXHAUSTIVE_TO = 10
SAMPLE_PER_SIZE = 10_000


@dataclass
class CheckReport:
    """Outcome of one machine check over a range of sizes."""

    name: str
    n_max: int
    passed: bool
    counterexample: Optional[str] = None
    checked: int = 0
    notes: list[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" witness={self.counterexample}" if self.counterexample else ""
        return f"CHECK {self.name} n<={self.n_max} {verdict}{extra}"


def sampled_diagrams(
    n_max: int,
    exhaustive_to: int = EXHAUSTIVE_TO,
    sample_per_size: int = SAMPLE_PER_SIZE,
) -> list[tuple[int, Diagram]]:
    """Deterministic stream of diagrams for the checks.

    Everything up to ``exhaustive_to`` is included; larger sizes are thinned
    by a fixed stride over the depth-first order, at most ``sample_per_size``
    per size.
    """
    totals = {r.n: r.N for r in count_exact(n_max)}
    strides = {
        s: max(1, -(-totals[s] // sample_per_size)) if s > exhaustive_to else 1
        for s in range(1, n_max + 1)
    }
    seen = [0] * (n_max + 1)
    out: list[tuple[int, Diagram]] = []

    def visitor(d: Diagram, size: int) -> None:
        k = seen[size]
        seen[size] += 1
        if k % strides[size] == 0:
            out.append((size, d))

    enumerate_diagrams(n_max, visitor=visitor)
    return out


def _report(name, n_max, counterexample, checked, notes=None):
    return CheckReport(
        name=name,
        n_max=n_max,
        passed=counterexample is None,
        counterexample=counterexample,
        checked=checked,
        notes=notes or [],
    )


def check_dichotomy(n_max: int) -> CheckReport:
    """Ranks are both zero (with both corners at the bottom) or both positive."""
    cex = None
    checked = 0
    for size, d in sampled_diagrams(n_max):
        checked += 1
        lr, rr = d.left_rank(), d.right_rank()
        ok = (lr == 0) == (rr == 0)
        if ok and lr == 0 and size >= 1:
            ok = d.corner_left() == d.corner_right() == NodeRef(0, 1)
        if not ok and cex is None:
            cex = f"{d.code()} ranks=({lr},{rr})"
    return _report("dichotomy", n_max, cex, checked)


def check_corner_ideal(n_max: int) -> CheckReport:
    """Left-boundary elements at or below the corner are join-irreducible,
    and for insertion-blocked diagrams the corner's ideal is a boundary chain."""
    cex = None
    checked = 0
    for size, d in sampled_diagrams(n_max):
        checked += 1
        c = d.corner_left()
        left = set(d.boundaries()[0])
        ideal = d.ideal(c)
        jir = d.join_irreducibles()
        for x in left & ideal:
            if x != d.bottom and x not in jir:
                cex = cex or f"{d.code()} boundary element {x} below corner is join-reducible"
        if insert_blocked(d):
            if not ideal <= left:
                cex = cex or f"{d.code()} corner ideal leaves the left boundary"
            for x in ideal:
                for y in ideal:
                    if not (d.leq(x, y) or d.leq(y, x)):
                        cex = cex or f"{d.code()} corner ideal is not a chain ({x},{y})"
    return _report("corner-ideal", n_max, cex, checked)


def check_gk(n_max: int, brute_to: int = 9) -> CheckReport:
    """Generated diagrams satisfy the four-cell condition (and have at most
    two upper covers per element); over all leveled lattice candidates the
    four-cell condition is equivalent to semimodularity."""
    cex = None
    checked = 0
    for size, d in sampled_diagrams(n_max):
        checked += 1
        if not d.gk_condition():
            cex = cex or f"{d.code()} fails the four-cell condition"
        for x in d.nodes():
            if len(d.up_covers(x)) > 2:
                cex = cex or f"{d.code()} node {x} has {len(d.up_covers(x))} upper covers"
    for n in range(1, min(brute_to, n_max) + 1):
        for d in brute_force_lattices(n):
            checked += 1
            if d.is_semimodular() != d.gk_condition():
                cex = cex or f"{d.code()} semimodular={d.is_semimodular()} four-cell={d.gk_condition()}"
    return _report("gk", n_max, cex, checked)


def _complete_sets(n_max: int):
    """Exhaustive per-size code lists plus blocked flags and hat images."""
    codes: dict[int, list[str]] = {s: [] for s in range(1, n_max + 1)}
    blocked: dict[int, set[str]] = {s: set() for s in range(1, n_max + 1)}
    hats: dict[int, set[str]] = {s: set() for s in range(0, n_max)}

    def visitor(d: Diagram, size: int) -> None:
        code = d.code()
        codes[size].append(code)
        if insert_blocked(d):
            blocked[size].add(code)
        if size >= 2 and d.left_rank() > 0:
            hats[size - 1].add(remove_corner(d).code())

    enumerate_diagrams(n_max, visitor=visitor)
    return codes, blocked, hats


def check_w_set(n_max: int) -> CheckReport:
    """The diagrams missing from the hat image are exactly the coatom-corner
    ones, and their counts match the counting module's W."""
    cex = None
    checked = 0
    codes, blocked, hats = _complete_sets(n_max)
    rows = {r.n: r for r in count_exact(n_max)}
    for n in range(2, n_max + 1):
        missing = set(codes[n - 1]) - hats[n - 1]
        checked += len(codes[n - 1])
        if missing != blocked[n - 1]:
            diff = (missing ^ blocked[n - 1]).pop()
            cex = cex or f"size {n - 1}: hat-image complement disagrees with coatom set at {diff}"
        if len(missing) != rows[n].W:
            cex = cex or f"W({n}) = {rows[n].W} but {len(missing)} diagrams lack a preimage"
    return _report("w-set", n_max, cex, checked)


def _trunk(d: Diagram) -> Diagram:
    """Remove the ideal of the left corner from an insertion-blocked diagram."""
    r = d.left_rank()
    sizes = d.level_sizes
    if r == 0:
        return build(sizes[1:], d.gap_edges[1:])
    new_sizes = [sizes[k] - 1 for k in range(1, r + 1)] + list(sizes[r + 1 :])
    gaps = []
    for g in range(1, len(sizes) - 1):
        pairs = []
        for i, j in d.gap_edges[g]:
            if g <= r and i == 1:
                continue
            if g + 1 <= r and j == 1:
                continue
            pairs.append((i - 1 if g <= r else i, j - 1 if g + 1 <= r else j))
        gaps.append(pairs)
    return build(new_sizes, gaps)


def check_trunk(n_max: int) -> CheckReport:
    """Blocked diagrams decompose: dropping the corner's ideal leaves a slim
    semimodular diagram of size n - length, and (trunk, length) determines
    the diagram.  Also: every diagram satisfies size <= (1 + length)^2."""
    cex = None
    checked = 0
    codes, blocked, _ = _complete_sets(n_max)
    seen: dict[tuple[int, str, int], str] = {}
    for size in range(1, n_max + 1):
        for code in codes[size]:
            checked += 1
            d = build_from_code(code)
            if d.n > (1 + d.length) ** 2:
                cex = cex or f"{code} violates size <= (1+length)^2"
            if code in blocked[size] and size >= 2:
                try:
                    t = _trunk(d)
                except DiagramError as e:
                    cex = cex or f"{code} trunk failed to build: {e}"
                    continue
                if t.n != d.n - d.length:
                    cex = cex or f"{code} trunk size {t.n} != {d.n} - {d.length}"
                if not (t.is_slim() and t.is_semimodular()):
                    cex = cex or f"{code} trunk {t.code()} is not slim semimodular"
                key = (size, t.code(), d.length)
                if key in seen and seen[key] != code:
                    cex = cex or f"trunk map collides: {seen[key]} and {code}"
                seen[key] = code
    return _report("trunk", n_max, cex, checked)


def build_from_code(code: str) -> Diagram:
    from .diagram import parse_code

    return parse_code(code)


def check_partitions(n_max: int) -> CheckReport:
    """Rank-zero diagrams of size n number N(n-1); rank-(1,1) diagrams
    number N(n-3); the two classes are disjoint by definition."""
    cex = None
    checked = 0
    rank0 = [0] * (n_max + 1)
    rank11 = [0] * (n_max + 1)

    def visitor(d: Diagram, size: int) -> None:
        if d.left_rank() == 0:
            rank0[size] += 1
        elif d.left_rank() == 1 and d.right_rank() == 1:
            rank11[size] += 1

    enumerate_diagrams(n_max, visitor=visitor)
    rows = {r.n: r.N for r in count_exact(n_max)}
    for n in range(2, n_max + 1):
        checked += 1
        if rank0[n] != rows[n - 1]:
            cex = cex or f"size {n}: {rank0[n]} rank-zero diagrams, expected N({n - 1}) = {rows[n - 1]}"
        if n >= 4 and rank11[n] != rows[n - 3]:
            cex = cex or f"size {n}: {rank11[n]} rank-(1,1) diagrams, expected N({n - 3}) = {rows[n - 3]}"
    return _report("partitions", n_max, cex, checked)


def check_mirror(n_max: int, exhaustive_to: int = EXHAUSTIVE_TO) -> CheckReport:
    """Mirroring is an involution, swaps the two ranks, and fixes each
    per-size code set as a whole."""
    cex = None
    checked = 0
    per_size: dict[int, set[str]] = {s: set() for s in range(1, n_max + 1)}
    for size, d in sampled_diagrams(n_max):
        checked += 1
        m = d.mirror()
        if m.mirror() != d:
            cex = cex or f"{d.code()} mirror is not an involution"
        if (m.left_rank(), m.right_rank()) != (d.right_rank(), d.left_rank()):
            cex = cex or f"{d.code()} mirror does not swap ranks"
    def visitor(d: Diagram, size: int) -> None:
        per_size[size].add(d.code())

    enumerate_diagrams(min(n_max, exhaustive_to), visitor=visitor)
    for s in range(1, min(n_max, exhaustive_to) + 1):
        mirrored = {build_from_code(c).mirror().code() for c in per_size[s]}
        if mirrored != per_size[s]:
            cex = cex or f"size {s}: code set is not mirror-closed"
    return _report("mirror", n_max, cex, checked)


def _mutants(d: Diagram) -> Iterator[tuple[str, list[int], list[list[tuple[int, int]]]]]:
    """All single-edge toggles and naive single-node drops of d's encoding."""
    sizes = list(d.level_sizes)
    gaps = [list(p) for p in d.gap_edges]
    for g in range(len(gaps)):
        present = set(gaps[g])
        for i in range(1, sizes[g] + 1):
            for j in range(1, sizes[g + 1] + 1):
                if (i, j) in present:
                    row = [p for p in gaps[g] if p != (i, j)]
                else:
                    row = gaps[g] + [(i, j)]
                yield (
                    f"toggle gap {g} edge {i}-{j}",
                    sizes,
                    gaps[:g] + [row] + gaps[g + 1 :],
                )
    for k in range(len(sizes)):
        yield (
            f"drop a node of level {k}",
            sizes[:k] + [sizes[k] - 1] + sizes[k + 1 :],
            gaps,
        )


def check_mutants(n_max: int = 8, seed: int = 0) -> CheckReport:
    """Every single-edge toggle or node drop of a valid diagram must fail
    validation or lose slimness or semimodularity.

    The mutant list is exhaustive per diagram, hence deterministic; ``seed``
    is accepted for interface stability but unused.
    """
    del seed
    cex = None
    checked = 0
    for size, d in sampled_diagrams(n_max, exhaustive_to=n_max):
        if size < 2:
            continue
        for label, sizes, gaps in _mutants(d):
            checked += 1
            try:
                m = build(sizes, gaps)
            except DiagramError:
                continue
            if m.is_slim() and m.is_semimodular():
                cex = cex or f"{d.code()} mutant ({label}) passed every predicate"
    return _report("mutants", n_max, cex, checked)


ALL_CHECKS = {
    "dichotomy": check_dichotomy,
    "corner-ideal": check_corner_ideal,
    "gk": check_gk,
    "w-set": check_w_set,
    "trunk": check_trunk,
    "partitions": check_partitions,
    "mirror": check_mirror,
    "mutants": check_mutants,
}


def run_checks(n_max: int, names: Optional[Iterable[str]] = None) -> list[CheckReport]:
    """Run the named checks (all of them by default) in stable order."""
    selected = list(ALL_CHECKS) if names is None else list(names)
    reports = []
    for name in selected:
        if name not in ALL_CHECKS:
            raise KeyError(name)
        if name == "mutants":
            reports.append(check_mutants(min(n_max, 8)))
        else:
            reports.append(ALL_CHECKS[name](n_max))
    return reports
