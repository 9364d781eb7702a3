"""Counts cache file: exact rows persisted as verifiable text.

Format: a header line ``# ssdlat-counts v1`` followed by ``n,N,W`` lines
with decimal big integers, n strictly increasing from 1 with no gaps.  On
every load the prefix (up to a configurable recheck depth) is recomputed
and compared, so a corrupt or stale cache can never silently extend.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .counting import CountRow, count_exact

__all__ = ["HEADER", "CacheMismatch", "CountsCache"]

HEADER = "# ssdlat-counts v1"
ENV_CACHE_DIR = "SSDLAT_CACHE_DIR"


class CacheMismatch(Exception):
    """A cached row disagrees with recomputation; carries the first bad n."""

    def __init__(self, n: int, detail: str):
        super().__init__(f"cache row n={n} is inconsistent: {detail}")
        self.n = n


def resolve_cache_path(path: str) -> Path:
    """Relative cache paths live under $SSDLAT_CACHE_DIR when that is set."""
    p = Path(path)
    base = os.environ.get(ENV_CACHE_DIR)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


@dataclass
class CountsCache:
    path: Path
    rows: list[CountRow]

    @classmethod
    def load(cls, path: str) -> "CountsCache":
        p = resolve_cache_path(path)
        rows: list[CountRow] = []
        if p.exists():
            lines = p.read_text().splitlines()
            if not lines or lines[0] != HEADER:
                raise CacheMismatch(0, f"missing header {HEADER!r}")
            for k, line in enumerate(lines[1:], start=1):
                if not line.strip():
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise CacheMismatch(k, f"malformed line {line!r}")
                n, N, W = (int(x) for x in parts)
                if n != len(rows) + 1:
                    raise CacheMismatch(n, f"expected row n={len(rows) + 1}")
                rows.append(CountRow(n, N, W))
        return cls(path=p, rows=rows)

    def verify(self, recheck_to: Optional[int] = None) -> None:
        """Recompute a prefix of the cached rows and compare exactly."""
        if not self.rows:
            return
        depth = len(self.rows) if recheck_to is None else min(recheck_to, len(self.rows))
        if depth < 1:
            return
        fresh = count_exact(depth)
        for got, want in zip(self.rows, fresh):
            if got != want:
                raise CacheMismatch(want.n, f"have {got}, recomputed {want}")

    def extend(self, n_max: int, recheck_to: Optional[int] = None) -> list[CountRow]:
        """Verify, then grow the cache to n_max and rewrite the file."""
        self.verify(recheck_to)
        if n_max > len(self.rows):
            fresh = count_exact(n_max)
            for got, want in zip(self.rows, fresh):
                if got != want:
                    raise CacheMismatch(want.n, f"have {got}, recomputed {want}")
            self.rows = fresh
            self.write()
        return self.rows[:n_max]

    def write(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        lines = [HEADER]
        lines.extend(f"{r.n},{r.N},{r.W}" for r in self.rows)
        self.path.write_text("\n".join(lines) + "\n")
