"""Exact and floating-point counting of slim semimodular diagrams by size.

The generation tree induces a two-parameter state machine: a diagram is
summarised by (k, l) = (height of its left corner, its length).  A bottom
extension sends any state to (0, l+1); a corner insertion, allowed exactly
when k < l-1, sends (k, l) to (k+1, l).  ``dp_step`` advances that table one
size at a time and is the reference formulation.

``count_exact`` exploits a collapse of the same table: a height-k state of
length l is a height-0 state of length l that was inserted into k times, so
the size-n count at (k, l) equals the size-(n-1-k) count at (0, l).  Per
length, the counts therefore obey the sliding-window recurrence

    row_l(n) = sum_{d=1..l} row_{l-1}(n - d),        row_0(1) = 1,

which runs in O(n_max^2) big-integer additions, and insertion-blocked
states are read off as row_{l-1}(n-l-1).  Agreement of the two formulations
with each other and with the tree walk is enforced by the test suite.

``count_float`` pushes the same rows through numpy in units of
count / 2^size, with a conservative running bound on every rounding,
truncation and band-trimming step, so ratios N(n)/2^n are available to
n = 10^5 with a rigorous error term.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .generation import ResourceLimit

__all__ = [
    "StateTable",
    "CountRow",
    "NormalizedRow",
    "initial_table",
    "dp_step",
    "state_table",
    "count_exact",
    "count_float",
    "max_size_for_length",
    "EXACT_CEILING",
]

# Exact rows hold n_max big integers of O(n) bits, so memory grows
# quadratically; 50k caps it around a gigabyte.
EXACT_CEILING = 50_000


def max_size_for_length(length: int) -> int:
    """Largest diagram size of the given length: 1 + length(length+1)/2.

    This refines the coarse bound size <= (1 + length)^2, which also holds.
    """
    return 1 + length * (length + 1) // 2


@dataclass(frozen=True)
class StateTable:
    """Counts of size-n diagrams, stratified by (corner height, length)."""

    n: int
    entries: Mapping[tuple[int, int], int]

    def total(self) -> int:
        return sum(self.entries.values())

    def blocked_total(self) -> int:
        """Mass of states with no insertion child (k >= l-1)."""
        return sum(c for (k, l), c in self.entries.items() if k >= l - 1)


def initial_table() -> StateTable:
    return StateTable(1, {(0, 0): 1})


def dp_step(table: StateTable) -> StateTable:
    """Advance the state table by one size."""
    new: dict[tuple[int, int], int] = defaultdict(int)
    for (k, l), c in table.entries.items():
        new[(0, l + 1)] += c
        if k < l - 1:
            new[(k + 1, l)] += c
    return StateTable(table.n + 1, dict(new))


def state_table(n: int) -> StateTable:
    """The state table at size n, from repeated dp_step."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = initial_table()
    while t.n < n:
        t = dp_step(t)
    return t


@dataclass(frozen=True)
class CountRow:
    """Exact totals at one size: N diagrams, W of them insertion-blocked
    one size earlier (so N(n) = 2 N(n-1) - W(n))."""

    n: int
    N: int
    W: int


def count_exact(n_max: int) -> list[CountRow]:
    """Exact N(n) and W(n) for 1 <= n <= n_max.

    W(1) is 0 by convention (there is no size-0 predecessor) and W(2) is 1:
    the one-element diagram has no insertion child.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if n_max > EXACT_CEILING:
        raise ResourceLimit(f"exact counting is capped at size {EXACT_CEILING}")
    N = [0] * (n_max + 1)
    W = [0] * (n_max + 1)
    if n_max >= 2:
        W[2] = 1

    row = [0] * (n_max + 2)
    row[1] = 1  # the one-element diagram, length 0
    j = 0
    while True:
        lo = j + 1
        hi = min(n_max, max_size_for_length(j))
        for n in range(lo, hi + 1):
            N[n] += row[n]
            t = n + j + 2  # this state is insertion-blocked k steps later
            if t <= n_max:
                W[t] += row[n]
        j += 1
        if j + 1 > n_max:
            break
        new = [0] * (n_max + 2)
        nlo = j + 1
        nhi = min(n_max, max_size_for_length(j))
        s = sum(row[max(nlo - j, 0) : nlo])
        for n in range(nlo, nhi + 1):
            new[n] = s
            s += row[n]
            if n - j >= 0:
                s -= row[n - j]
        row = new
    return [CountRow(n, N[n], W[n]) for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class NormalizedRow:
    """N(n)/2^n in double precision plus a rigorous absolute error bound."""

    n: int
    r: float
    err: float


_KERNEL_WIDTH = 60
_TRIM = 1e-30


def count_float(n_max: int) -> list[NormalizedRow]:
    """N(n)/2^n for all n <= n_max, with a worst-case error ledger.

    The per-length rows of ``count_exact`` are propagated as
    v_l(n) = row_l(n)/2^n, so one insertion step halves and one length step
    is the kernel (1/2, 1/4, ...).  Three controlled approximations are
    accounted into ``err``: the kernel is cut at width 60 (tail mass at most
    2^-60 of the previous row's maximum), band edges below 1e-30 are
    trimmed, and every float operation contributes machine epsilon times
    the current scale.  All quantities are nonnegative, so simple absolute
    bounds compose.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    eps = float(np.finfo(float).eps)
    r = np.zeros(n_max + 1)
    r[1] = 0.5
    err = 0.0
    v = np.array([0.5])
    lo = 1
    vmax_prev = 0.5
    j = 0
    while True:
        j += 1
        if j + 1 > n_max:
            break
        K = min(j, _KERNEL_WIDTH)
        kern = 0.5 ** np.arange(1, K + 1)
        conv = np.convolve(v, kern)
        new_lo = lo + 1  # conv[i] sits at size new_lo + i
        sup_lo = j + 1
        sup_hi = min(n_max, max_size_for_length(j))
        a = max(0, sup_lo - new_lo)
        b = min(len(conv), sup_hi - new_lo + 1)
        if a >= b:
            err += _TRIM * n_max
            break
        v = conv[a:b]
        lo = new_lo + a
        nz = np.nonzero(v >= _TRIM)[0]
        if len(nz) == 0:
            err += _TRIM * n_max
            break
        err += float(v[: nz[0]].sum() + v[nz[-1] + 1 :].sum())
        v = v[nz[0] : nz[-1] + 1]
        lo += int(nz[0])
        vmax = float(v.max())
        err += eps * ((K + 4) * vmax + 0.5)
        if j > _KERNEL_WIDTH:
            err += vmax_prev * 2.0 ** (-_KERNEL_WIDTH)
        vmax_prev = vmax
        r[lo : lo + len(v)] += v
    return [NormalizedRow(n, float(r[n]), err) for n in range(1, n_max + 1)]
