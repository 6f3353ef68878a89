"""Interval-splitting transforms: length capping and alpha-balancing.

Both consume and produce an IntervalTable and preserve the evaluated
permutation exactly; only the interval partition gets finer.
"""

from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import ABSOLUTE, RELATIVE, IntervalTable
from .errors import InvalidParameterError

CapFactor = Union[int, float, str, Fraction]


@dataclass(frozen=True)
class SplitConfig:
    """c = 0 disables capping, alpha = 0 disables balancing.

    Capping is always applied before balancing.
    """

    c: Fraction = Fraction(0)
    alpha: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c < 0:
            raise InvalidParameterError("cap factor c must be >= 0")
        if self.alpha != 0 and self.alpha < 2:
            raise InvalidParameterError("alpha must be 0 or >= 2")


def cap_length(n: int, r: int, c: CapFactor) -> int:
    """Maximum interval length L = max(1, ceil(c * n / r))."""
    c = Fraction(c)
    if c <= 0:
        raise InvalidParameterError("cap factor c must be > 0")
    num = c.numerator * n
    den = c.denominator * r
    return max(1, -(-num // den))


def _triples(t: IntervalTable) -> tuple[list[int], list[int], list[int]]:
    starts = t.materialized_starts()
    images = [starts[q] + off for q, off in zip(t.dest_rank, t.dest_offset)]
    return starts, images, list(t.lengths)


def _result(
    t: IntervalTable,
    starts: list[int],
    images: list[int],
    dest_rank: list[int],
    dest_offset: list[int],
    lengths: list[int],
    extras: dict[str, list[int]],
    cap: Optional[Fraction] = None,
    cap_len: int = 0,
    alpha: int = 0,
) -> IntervalTable:
    out = IntervalTable(
        t.n,
        ABSOLUTE,
        lengths,
        dest_rank,
        dest_offset,
        starts=starts,
        source_runs=t.source_runs,
        kind=t.kind,
        cap=cap if cap is not None else t.cap,
        cap_len=cap_len or t.cap_len,
        alpha=alpha or t.alpha,
        extras=extras,
    )
    return out.to_relative() if t.mode == RELATIVE else out


def length_cap(t: IntervalTable, c: CapFactor) -> IntervalTable:
    """Split intervals longer than L = ceil(c * n / r) into uniform pieces.

    r is the source table's run count, kept even when re-capping an already
    split table so the interval-count bound stays phrased in the original r.
    """
    c = Fraction(c)
    L = cap_length(t.n, t.source_runs, c)
    starts, images, lengths = _triples(t)
    r = len(starts)

    new_starts: list[int] = []
    new_images: list[int] = []
    new_lens: list[int] = []
    src: list[int] = []  # originating interval, for extras and dest walking
    piece_no: list[int] = []
    old_to_new = [0] * r
    for j in range(r):
        old_to_new[j] = len(new_starts)
        ell = lengths[j]
        m = 0
        while ell > 0:
            piece = L if ell > L else ell
            new_starts.append(starts[j] + m * L)
            new_images.append(images[j] + m * L)
            new_lens.append(piece)
            src.append(j)
            piece_no.append(m)
            ell -= L
            m += 1

    rp = len(new_starts)
    dest_rank = [0] * rp
    dest_offset = [0] * rp
    q = 0
    for i in range(rp):
        v = new_images[i]
        if piece_no[i] == 0:
            q = old_to_new[t.dest_rank[src[i]]]
        while q + 1 < rp and new_starts[q + 1] <= v:
            q += 1
        dest_rank[i] = q
        dest_offset[i] = v - new_starts[q]

    extras = {name: [vals[j] for j in src] for name, vals in t.extras.items()}
    return _result(
        t, new_starts, new_images, dest_rank, dest_offset, new_lens, extras,
        cap=c, cap_len=L,
    )


def _inside_count(sorted_starts: list[int], image: int, length: int) -> int:
    """Interval starts strictly inside the output interval (image, image+length)."""
    return bisect.bisect_left(sorted_starts, image + length) - bisect.bisect_right(
        sorted_starts, image
    )


def balance(t: IntervalTable, alpha: int) -> IntervalTable:
    """Split until every output interval contains < 2*alpha interval starts.

    Work-queue over violators; a violator is split at the offset of the
    alpha-th start contained in its output interval. Ordered indexes over
    starts and images are kept as sorted lists.
    """
    if alpha < 2:
        raise InvalidParameterError("alpha must be >= 2")
    starts0, images0, lengths0 = _triples(t)
    r = len(starts0)

    # Interval records indexed by a stable id; order recovered at the end.
    start_ = list(starts0)
    image_ = list(images0)
    len_ = list(lengths0)
    src_ = list(range(r))
    sorted_starts = list(starts0)  # already sorted
    # Output intervals partition the domain: (image, id) sorted by image.
    by_image = sorted(zip(images0, range(r)))
    img_keys = [v for v, _ in by_image]
    img_ids = [i for _, i in by_image]

    cnt = [_inside_count(sorted_starts, image_[i], len_[i]) for i in range(r)]
    limit = 2 * alpha
    queue = deque(i for i in range(r) if cnt[i] >= limit)
    queued = set(queue)

    def enqueue(i: int) -> None:
        if cnt[i] >= limit and i not in queued:
            queue.append(i)
            queued.add(i)

    while queue:
        i = queue.popleft()
        queued.discard(i)
        if cnt[i] < limit:
            continue
        v, ell = image_[i], len_[i]
        idx = bisect.bisect_right(sorted_starts, v) + alpha - 1
        s_split = sorted_starts[idx]
        d = s_split - v  # 0 < d < ell since s_split is strictly inside
        new_id = len(start_)
        p_new = start_[i] + d
        start_.append(p_new)
        image_.append(s_split)
        len_.append(ell - d)
        src_.append(src_[i])
        len_[i] = d
        cnt[i] = _inside_count(sorted_starts, v, d)
        cnt.append(_inside_count(sorted_starts, s_split, ell - d))
        pos = bisect.bisect_left(img_keys, s_split)
        img_keys.insert(pos, s_split)
        img_ids.insert(pos, new_id)
        # The new domain start lands inside exactly one output interval.
        bisect.insort(sorted_starts, p_new)
        owner_pos = bisect.bisect_right(img_keys, p_new) - 1
        owner = img_ids[owner_pos]
        if p_new > img_keys[owner_pos]:
            cnt[owner] += 1
            enqueue(owner)
        enqueue(i)
        enqueue(new_id)

    order = sorted(range(len(start_)), key=start_.__getitem__)
    new_starts = [start_[i] for i in order]
    new_images = [image_[i] for i in order]
    new_lens = [len_[i] for i in order]
    rp = len(order)
    dest_rank = [0] * rp
    dest_offset = [0] * rp
    for j in range(rp):
        q = bisect.bisect_right(new_starts, new_images[j]) - 1
        dest_rank[j] = q
        dest_offset[j] = new_images[j] - new_starts[q]
    extras = {
        name: [vals[src_[i]] for i in order] for name, vals in t.extras.items()
    }
    return _result(
        t, new_starts, new_images, dest_rank, dest_offset, new_lens, extras,
        alpha=alpha,
    )


def apply_splits(t: IntervalTable, cfg: SplitConfig) -> IntervalTable:
    if cfg.c > 0:
        t = length_cap(t, cfg.c)
    if cfg.alpha:
        t = balance(t, cfg.alpha)
    return t
