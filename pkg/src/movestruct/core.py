"""Interval tables for runny permutations and move queries over them.

A table holds, per interval j, its length, the rank of the predecessor of its
image among interval starts (dest_rank) and the offset of the image within
that destination interval (dest_offset). Absolute mode additionally stores the
interval starts; relative mode stores only lengths plus sampled prefix sums.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BoundsError,
    InvalidInputError,
    InvalidParameterError,
    UnsupportedModeError,
)

ABSOLUTE = "abs"
RELATIVE = "rel"

LINEAR = "linear"
EXPONENTIAL = "exp"

# Interval rank between two prefix-sum samples in relative mode.
PREFIX_SAMPLE_EVERY = 64

# Exhaustive bijectivity checking in validate() is skipped above this size.
VALIDATE_EXHAUSTIVE_MAX_N = 100_000


@dataclass(frozen=True)
class MoveCursor:
    """Position as (interval rank j, offset k within interval)."""

    j: int
    k: int


@dataclass(frozen=True)
class QueryConfig:
    search: str = LINEAR

    def __post_init__(self) -> None:
        if self.search not in (LINEAR, EXPONENTIAL):
            raise InvalidParameterError(f"unknown search kind {self.search!r}")


@dataclass(frozen=True)
class MoveResult:
    cursor: MoveCursor
    fast_forwards: int
    probes: int


class IntervalTable:
    """The move structure: immutable after construction."""

    def __init__(
        self,
        n: int,
        mode: str,
        lengths: list[int],
        dest_rank: list[int],
        dest_offset: list[int],
        starts: Optional[list[int]] = None,
        source_runs: Optional[int] = None,
        kind: str = "generic",
        cap: Optional[Fraction] = None,
        cap_len: int = 0,
        alpha: int = 0,
        extras: Optional[dict[str, list[int]]] = None,
    ):
        if mode not in (ABSOLUTE, RELATIVE):
            raise InvalidParameterError(f"unknown mode {mode!r}")
        if mode == ABSOLUTE and starts is None:
            raise InvalidInputError("absolute mode requires interval starts")
        self.n = n
        self.mode = mode
        self.lengths = lengths
        self.dest_rank = dest_rank
        self.dest_offset = dest_offset
        self.starts = starts if mode == ABSOLUTE else None
        self.max_len = max(lengths) if lengths else 0
        self.source_runs = source_runs if source_runs is not None else len(lengths)
        self.kind = kind
        self.cap = cap
        self.cap_len = cap_len
        self.alpha = alpha
        self.extras = dict(extras or {})
        if mode == RELATIVE:
            samples = []
            pos = 0
            for j, ell in enumerate(lengths):
                if j % PREFIX_SAMPLE_EVERY == 0:
                    samples.append(pos)
                pos += ell
            self._prefix_samples = samples
        else:
            self._prefix_samples = None

    # ------------------------------------------------------------------ basic

    @property
    def r_prime(self) -> int:
        return len(self.lengths)

    def __len__(self) -> int:
        return len(self.lengths)

    def materialized_starts(self) -> list[int]:
        """Interval starts as a list (reconstructed in relative mode)."""
        if self.starts is not None:
            return self.starts
        out = []
        pos = 0
        for ell in self.lengths:
            out.append(pos)
            pos += ell
        return out

    def image(self, j: int) -> int:
        """Absolute image of interval j's start."""
        q, off = self.dest_rank[j], self.dest_offset[j]
        if self.starts is not None:
            return self.starts[q] + off
        return self.position_of(MoveCursor(q, off))

    def images(self) -> list[int]:
        starts = self.materialized_starts()
        return [starts[q] + off for q, off in zip(self.dest_rank, self.dest_offset)]

    # ------------------------------------------------------------ constructors

    @classmethod
    def from_intervals(
        cls,
        n: int,
        starts: Sequence[int],
        images: Sequence[int],
        mode: str = ABSOLUTE,
        **kw,
    ) -> "IntervalTable":
        """Build from parallel (start, image) arrays with sorted starts."""
        starts = list(starts)
        r = len(starts)
        lengths = [starts[j + 1] - starts[j] for j in range(r - 1)]
        lengths.append(n - starts[-1])
        dest_rank = [0] * r
        dest_offset = [0] * r
        for j, v in enumerate(images):
            q = bisect.bisect_right(starts, v) - 1
            dest_rank[j] = q
            dest_offset[j] = v - starts[q]
        t = cls(n, ABSOLUTE, lengths, dest_rank, dest_offset, starts=starts, **kw)
        return t.to_relative() if mode == RELATIVE else t

    def to_relative(self) -> "IntervalTable":
        if self.mode == RELATIVE:
            return self
        return IntervalTable(
            self.n,
            RELATIVE,
            self.lengths,
            self.dest_rank,
            self.dest_offset,
            source_runs=self.source_runs,
            kind=self.kind,
            cap=self.cap,
            cap_len=self.cap_len,
            alpha=self.alpha,
            extras=self.extras,
        )

    def to_absolute(self) -> "IntervalTable":
        if self.mode == ABSOLUTE:
            return self
        return IntervalTable(
            self.n,
            ABSOLUTE,
            self.lengths,
            self.dest_rank,
            self.dest_offset,
            starts=self.materialized_starts(),
            source_runs=self.source_runs,
            kind=self.kind,
            cap=self.cap,
            cap_len=self.cap_len,
            alpha=self.alpha,
            extras=self.extras,
        )

    # --------------------------------------------------------------- cursors

    def _check_cursor(self, cur: MoveCursor) -> None:
        if not 0 <= cur.j < len(self.lengths) or not 0 <= cur.k < self.lengths[cur.j]:
            raise BoundsError(f"cursor {cur} invalid for table with r'={len(self)}")

    def cursor_of(self, i: int) -> MoveCursor:
        if not 0 <= i < self.n:
            raise BoundsError(f"position {i} out of range 0..{self.n - 1}")
        if self.starts is not None:
            j = bisect.bisect_right(self.starts, i) - 1
            return MoveCursor(j, i - self.starts[j])
        samples = self._prefix_samples
        s = bisect.bisect_right(samples, i) - 1
        j = s * PREFIX_SAMPLE_EVERY
        pos = samples[s]
        while pos + self.lengths[j] <= i:
            pos += self.lengths[j]
            j += 1
        return MoveCursor(j, i - pos)

    def position_of(self, cur: MoveCursor) -> int:
        self._check_cursor(cur)
        if self.starts is not None:
            return self.starts[cur.j] + cur.k
        base = cur.j // PREFIX_SAMPLE_EVERY
        pos = self._prefix_samples[base]
        for j in range(base * PREFIX_SAMPLE_EVERY, cur.j):
            pos += self.lengths[j]
        return pos + cur.k

    # ---------------------------------------------------------------- queries

    def move(self, cur: MoveCursor, config: QueryConfig = QueryConfig()) -> MoveResult:
        self._check_cursor(cur)
        if config.search == EXPONENTIAL:
            return self._move_exponential(cur)
        return self._move_linear(cur)

    def _move_linear(self, cur: MoveCursor) -> MoveResult:
        j, k = cur.j, cur.k
        q = self.dest_rank[j]
        if self.starts is not None:
            starts = self.starts
            p = starts[q] + self.dest_offset[j] + k
            r = len(starts)
            ff = 0
            while q + 1 < r and starts[q + 1] <= p:
                q += 1
                ff += 1
            probes = ff + (1 if q + 1 < r else 0)
            return MoveResult(MoveCursor(q, p - starts[q]), ff, probes)
        lengths = self.lengths
        off = self.dest_offset[j] + k
        ff = 0
        while off >= lengths[q]:
            off -= lengths[q]
            q += 1
            ff += 1
        return MoveResult(MoveCursor(q, off), ff, ff + 1)

    def _move_exponential(self, cur: MoveCursor) -> MoveResult:
        if self.starts is None:
            raise UnsupportedModeError("exponential search requires absolute mode")
        j, k = cur.j, cur.k
        starts = self.starts
        r = len(starts)
        q0 = self.dest_rank[j]
        p = starts[q0] + self.dest_offset[j] + k
        probes = 0
        # Gallop: double the step until a start beyond p (or the table end)
        # brackets the destination rank.
        lo = q0
        step = 1
        hi = q0 + step
        while hi < r:
            probes += 1
            if starts[hi] <= p:
                lo = hi
                step <<= 1
                hi = q0 + step
            else:
                break
        if hi > r:
            hi = r
        # Binary search: largest q in [lo, hi) with starts[q] <= p.
        a, b = lo, hi
        while b - a > 1:
            mid = (a + b) >> 1
            probes += 1
            if starts[mid] <= p:
                a = mid
            else:
                b = mid
        q = a
        return MoveResult(MoveCursor(q, p - starts[q]), q - q0, probes)

    def eval_abs(self, i: int) -> int:
        """Evaluate the permutation at i via predecessor binary search."""
        if self.starts is None:
            raise UnsupportedModeError("eval_abs requires absolute mode")
        if not 0 <= i < self.n:
            raise BoundsError(f"position {i} out of range 0..{self.n - 1}")
        j = bisect.bisect_right(self.starts, i) - 1
        return self.image(j) + (i - self.starts[j])

    # ------------------------------------------------------------- validation

    def validate(self) -> None:
        """Check structural invariants; raises InvalidInputError on violation."""
        r = len(self.lengths)
        if r == 0 or self.n <= 0:
            raise InvalidInputError("empty table")
        if sum(self.lengths) != self.n:
            raise InvalidInputError("interval lengths do not sum to n")
        if min(self.lengths) < 1:
            raise InvalidInputError("zero-length interval")
        starts = self.materialized_starts()
        if self.starts is not None:
            if starts[0] != 0 or any(
                starts[j] >= starts[j + 1] for j in range(r - 1)
            ):
                raise InvalidInputError("starts not strictly increasing from 0")
        for j in range(r):
            q = self.dest_rank[j]
            if not 0 <= q < r:
                raise InvalidInputError(f"dest_rank[{j}] out of range")
            if not 0 <= self.dest_offset[j] < self.lengths[q]:
                raise InvalidInputError(
                    f"dest_offset[{j}]={self.dest_offset[j]} not below "
                    f"len[{q}]={self.lengths[q]}"
                )
            v = starts[q] + self.dest_offset[j]
            exact = bisect.bisect_right(starts, v) - 1
            if exact != q:
                raise InvalidInputError(
                    f"dest_rank[{j}] is not the predecessor rank of its image"
                )
        if self.n <= VALIDATE_EXHAUSTIVE_MAX_N:
            seen = bytearray(self.n)
            for j in range(r):
                v = starts[self.dest_rank[j]] + self.dest_offset[j]
                for k in range(self.lengths[j]):
                    if seen[v + k]:
                        raise InvalidInputError("evaluated images collide")
                    seen[v + k] = 1
        for name, vals in self.extras.items():
            if len(vals) != r:
                raise InvalidInputError(f"extra column {name!r} has wrong length")


def from_permutation(
    pi: Sequence[int], mode: str = ABSOLUTE, kind: str = "generic"
) -> IntervalTable:
    """Unbalanced move structure of an explicit permutation array."""
    n = len(pi)
    if n < 1:
        raise InvalidInputError("permutation must be non-empty")
    seen = bytearray(n)
    for v in pi:
        if not 0 <= v < n or seen[v]:
            raise InvalidInputError("input is not a bijection on [0, n)")
        seen[v] = 1
    starts = [0]
    for i in range(1, n):
        if pi[i - 1] + 1 != pi[i]:
            starts.append(i)
    images = [pi[s] for s in starts]
    return IntervalTable.from_intervals(n, starts, images, mode=mode, kind=kind)


def from_runs(
    n: int, runs: Sequence[tuple[int, int]], mode: str = ABSOLUTE
) -> IntervalTable:
    """Build from r (start, image) pairs; start[0] must be 0.

    Validates that the images of the runs tile [0, n) exactly.
    """
    if not runs or runs[0][0] != 0:
        raise InvalidInputError("runs must be non-empty with first start 0")
    starts = [s for s, _ in runs]
    if any(starts[j] >= starts[j + 1] for j in range(len(starts) - 1)):
        raise InvalidInputError("run starts must be strictly increasing")
    if starts[-1] >= n:
        raise InvalidInputError("run start beyond domain")
    images = [v for _, v in runs]
    r = len(runs)
    lengths = [starts[j + 1] - starts[j] for j in range(r - 1)] + [n - starts[-1]]
    spans = sorted(zip(images, lengths))
    pos = 0
    for v, ell in spans:
        if v != pos:
            raise InvalidInputError("run images do not tile [0, n)")
        pos += ell
    if pos != n:
        raise InvalidInputError("run images do not tile [0, n)")
    return IntervalTable.from_intervals(n, starts, images, mode=mode)


def table_to_permutation(t: IntervalTable) -> list[int]:
    """Expand the table to a full array by walking each interval's image range.

    Direct expansion, deliberately independent of the move-query path.
    """
    out = [0] * t.n
    starts = t.materialized_starts()
    for j in range(len(t)):
        v = starts[t.dest_rank[j]] + t.dest_offset[j]
        s = starts[j]
        for k in range(t.lengths[j]):
            out[s + k] = v + k
    return out
