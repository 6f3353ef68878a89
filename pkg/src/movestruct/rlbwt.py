"""Run-length encoded BWT: ingestion, desk-scale construction, and the
specialized interval-table builders for LF/FL (O(r)) and phi/phi-inverse
(O(n) via an LF traversal, with a sort-based cross-check).

The sentinel is byte 0x00 and compares smallest; symbol order is byte order.
"""

from __future__ import annotations

import bisect
import struct
from dataclasses import dataclass, field
from typing import BinaryIO, Optional, Sequence

from .core import ABSOLUTE, IntervalTable
from .errors import FormatError, InvalidInputError

SENTINEL = 0

RLBWT_MAGIC = b"RLBW"
RLBWT_VERSION = 1


@dataclass
class Rlbwt:
    runs: list[tuple[int, int]]  # (symbol, length)
    n: int
    r: int
    sigma: int
    char_counts: list[int]  # 256 entries

    @classmethod
    def from_runs(cls, runs: Sequence[tuple[int, int]]) -> "Rlbwt":
        runs = [(int(c), int(l)) for c, l in runs]
        if not runs:
            raise InvalidInputError("RLBWT must have at least one run")
        counts = [0] * 256
        n = 0
        for i, (c, l) in enumerate(runs):
            if not 0 <= c < 256 or l < 1:
                raise InvalidInputError(f"bad run {i}: symbol {c}, length {l}")
            if i and runs[i - 1][0] == c:
                raise InvalidInputError(f"adjacent runs {i - 1},{i} share a symbol")
            counts[c] += l
            n += l
        if counts[SENTINEL] != 1:
            raise InvalidInputError("exactly one sentinel byte required")
        return cls(
            runs=runs,
            n=n,
            r=len(runs),
            sigma=sum(1 for c in counts if c),
            char_counts=counts,
        )

    @classmethod
    def from_bwt(cls, bwt: bytes) -> "Rlbwt":
        if not bwt:
            raise InvalidInputError("empty BWT")
        runs = []
        prev, length = bwt[0], 0
        for b in bwt:
            if b == prev:
                length += 1
            else:
                runs.append((prev, length))
                prev, length = b, 1
        runs.append((prev, length))
        return cls.from_runs(runs)

    def expand(self) -> bytes:
        return b"".join(bytes([c]) * l for c, l in self.runs)

    def c_array(self) -> list[int]:
        """Prefix sums: c_array[c] = number of symbols smaller than c."""
        out = [0] * 257
        for c in range(256):
            out[c + 1] = out[c] + self.char_counts[c]
        return out[:256]

    def run_starts(self) -> list[int]:
        out = []
        pos = 0
        for _, l in self.runs:
            out.append(pos)
            pos += l
        return out


@dataclass
class DocBounds:
    starts: list[int]  # document start positions in the text, sorted
    d: int = field(init=False)

    def __post_init__(self) -> None:
        s = self.starts
        if not s:
            raise InvalidInputError("document bounds must be non-empty")
        if s[0] != 0 or any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
            raise InvalidInputError("bounds must start at 0 and strictly increase")
        self.d = len(s)

    def doc_of(self, position: int) -> int:
        return bisect.bisect_right(self.starts, position) - 1


@dataclass
class SaSamples:
    """SA values at BWT run heads/tails, optionally annotated with doc ids."""

    head_sa: list[int]
    tail_sa: list[int]
    head_doc: Optional[list[int]] = None
    tail_doc: Optional[list[int]] = None


# --------------------------------------------------------------------- build


def _suffix_array(s: bytes) -> list[int]:
    """Prefix-doubling suffix sort; exact for any byte string."""
    n = len(s)
    sa = sorted(range(n), key=s.__getitem__)
    rank = [0] * n
    prev_key = s[sa[0]]
    rk = 0
    for i in sa:
        if s[i] != prev_key:
            rk += 1
            prev_key = s[i]
        rank[i] = rk
    k = 1
    tmp = [0] * n
    while rk < n - 1:
        def key(i: int) -> tuple[int, int]:
            return (rank[i], rank[i + k] if i + k < n else -1)

        sa.sort(key=key)
        tmp[sa[0]] = 0
        for t in range(1, n):
            tmp[sa[t]] = tmp[sa[t - 1]] + (key(sa[t]) != key(sa[t - 1]))
        rank, tmp = tmp, rank
        rk = rank[sa[-1]]
        k <<= 1
    return sa


def build_bwt(text: bytes) -> tuple[Rlbwt, list[int]]:
    """Append the sentinel, suffix-sort, and run-length encode the BWT."""
    if not text:
        raise InvalidInputError("empty text")
    if SENTINEL in text:
        raise InvalidInputError("text must not contain the 0x00 sentinel byte")
    s = bytes(text) + bytes([SENTINEL])
    sa = _suffix_array(s)
    bwt = bytes(s[i - 1] for i in sa)  # i == 0 wraps to the sentinel
    return Rlbwt.from_bwt(bwt), sa


# ------------------------------------------------------------------- LF / FL


def _runs_by_symbol(rl: Rlbwt) -> list[list[int]]:
    buckets: list[list[int]] = [[] for _ in range(256)]
    for j, (c, _) in enumerate(rl.runs):
        buckets[c].append(j)
    return buckets


def build_lf(rl: Rlbwt) -> IntervalTable:
    """LF interval table with the run symbol attached as extra column "sym".

    dest_rank comes from a single merge of the symbol-bucketed images against
    the run starts; no comparison sort.
    """
    r = rl.r
    starts = rl.run_starts()
    C = rl.c_array()
    occ = [0] * 256
    images = [0] * r
    for j, (c, l) in enumerate(rl.runs):
        images[j] = C[c] + occ[c]
        occ[c] += l
    dest_rank = [0] * r
    dest_offset = [0] * r
    p = 0
    for bucket in _runs_by_symbol(rl):
        for j in bucket:
            v = images[j]
            while p + 1 < r and starts[p + 1] <= v:
                p += 1
            dest_rank[j] = p
            dest_offset[j] = v - starts[p]
    lengths = [l for _, l in rl.runs]
    return IntervalTable(
        rl.n,
        ABSOLUTE,
        lengths,
        dest_rank,
        dest_offset,
        starts=starts,
        kind="lf",
        extras={"sym": [c for c, _ in rl.runs]},
    )


def build_fl(rl: Rlbwt) -> IntervalTable:
    """FL (inverse LF) interval table; symmetric single-merge construction."""
    r = rl.r
    b = rl.run_starts()
    C = rl.c_array()
    occ = [0] * 256
    fl_starts = [0] * r
    fl_lens = [0] * r
    fl_sym = [0] * r
    pos_of_run = [0] * r
    # Emit FL intervals in symbol-bucket order: their starts are ascending.
    pos = 0
    for c, bucket in enumerate(_runs_by_symbol(rl)):
        for j in bucket:
            fl_starts[pos] = C[c] + occ[c]
            occ[c] += rl.runs[j][1]
            fl_lens[pos] = rl.runs[j][1]
            fl_sym[pos] = c
            pos_of_run[j] = pos
            pos += 1
    dest_rank = [0] * r
    dest_offset = [0] * r
    p = 0
    for j in range(r):  # images b[j] are ascending in j
        v = b[j]
        while p + 1 < r and fl_starts[p + 1] <= v:
            p += 1
        dest_rank[pos_of_run[j]] = p
        dest_offset[pos_of_run[j]] = v - fl_starts[p]
    return IntervalTable(
        rl.n,
        ABSOLUTE,
        fl_lens,
        dest_rank,
        dest_offset,
        starts=fl_starts,
        kind="fl",
        extras={"sym": fl_sym},
    )


# ----------------------------------------------------------------- phi family


def _lf_traversal_rows(rl: Rlbwt, lf: IntervalTable):
    """Yield (row, sa_value, run, is_head, is_tail) over one full LF cycle.

    Starts at BWT row 0 (the sentinel rotation), whose SA value is n - 1;
    each LF step decreases the SA value by one.
    """
    lengths = lf.lengths
    dest_rank = lf.dest_rank
    dest_offset = lf.dest_offset
    starts = lf.starts
    j, k = 0, 0
    v = rl.n - 1
    for _ in range(rl.n):
        yield starts[j] + k, v, j, k == 0, k == lengths[j] - 1
        q = dest_rank[j]
        p = starts[q] + dest_offset[j] + k
        while q + 1 < rl.r and starts[q + 1] <= p:
            q += 1
        j, k = q, p - starts[q]
        v -= 1


def collect_sa_samples(rl: Rlbwt, lf: Optional[IntervalTable] = None) -> SaSamples:
    """SA values at every run head and tail, via one LF traversal."""
    lf = lf or build_lf(rl)
    head = [0] * rl.r
    tail = [0] * rl.r
    for _row, v, run, is_head, is_tail in _lf_traversal_rows(rl, lf):
        if is_head:
            head[run] = v
        if is_tail:
            tail[run] = v
    return SaSamples(head_sa=head, tail_sa=tail)


def build_phi_via_lf(
    rl: Rlbwt, inverse: bool = False
) -> tuple[IntervalTable, SaSamples]:
    """Move structure for phi (or phi-inverse) in O(n) time and O(r) space.

    One LF traversal visits SA values in descending order, so interval starts
    are discovered already sorted and predecessor ranks of images are assigned
    on the fly: an image recorded at value v has as predecessor the next start
    discovered at value <= v.
    """
    lf = build_lf(rl)
    r = rl.r
    head = [0] * r
    tail = [0] * r
    # Per run: discovery index of its interval start, image value, image's
    # predecessor discovery index.
    disc_of_run = [-1] * r
    image_of_run = [-1] * r
    pred_disc_of_run = [-1] * r
    discovered = 0
    pending: list[int] = []

    for _row, v, run, is_head, is_tail in _lf_traversal_rows(rl, lf):
        if is_head:
            head[run] = v
        if is_tail:
            tail[run] = v
        # Queue the image first: if this value is also a start, it is its
        # own predecessor and must be flushed by this very discovery.
        if inverse:
            # phi_inv interval of run j starts at tail_sa[j] and maps to
            # head_sa[j + 1]; the image is seen when visiting a head row.
            if is_head:
                owner = (run - 1) % r
                image_of_run[owner] = v
                pending.append(owner)
        else:
            # phi interval of run j starts at head_sa[j] and maps to
            # tail_sa[j - 1]; the image is seen when visiting a tail row.
            if is_tail:
                owner = (run + 1) % r
                image_of_run[owner] = v
                pending.append(owner)
        starts_here = is_tail if inverse else is_head
        if starts_here:
            disc_of_run[run] = discovered
            for owner in pending:
                pred_disc_of_run[owner] = discovered
            pending.clear()
            discovered += 1

    if pending:
        raise InvalidInputError("traversal did not close; malformed RLBWT")
    # Discovery order is descending in value: rank = r - 1 - discovery index.
    starts = [0] * r
    lengths = [0] * r
    dest_rank = [0] * r
    dest_offset = [0] * r
    base = tail if inverse else head
    for run in range(r):
        rank = r - 1 - disc_of_run[run]
        starts[rank] = base[run]
    for j in range(r - 1):
        lengths[j] = starts[j + 1] - starts[j]
    lengths[r - 1] = rl.n - starts[r - 1]
    for run in range(r):
        rank = r - 1 - disc_of_run[run]
        q = r - 1 - pred_disc_of_run[run]
        dest_rank[rank] = q
        dest_offset[rank] = image_of_run[run] - starts[q]
    table = IntervalTable(
        rl.n,
        ABSOLUTE,
        lengths,
        dest_rank,
        dest_offset,
        starts=starts,
        kind="phi_inv" if inverse else "phi",
    )
    return table, SaSamples(head_sa=head, tail_sa=tail)


def build_phi_sorted(rl: Rlbwt, inverse: bool = False) -> IntervalTable:
    """Same contract as build_phi_via_lf, deriving dest_rank by sorting the
    images; provided as an independent cross-check of the traversal builder."""
    samples = collect_sa_samples(rl)
    r = rl.r
    if inverse:
        pairs = [(samples.tail_sa[j], samples.head_sa[(j + 1) % r]) for j in range(r)]
    else:
        pairs = [(samples.head_sa[j], samples.tail_sa[(j - 1) % r]) for j in range(r)]
    pairs.sort()
    starts = [s for s, _ in pairs]
    images = [v for _, v in pairs]
    lengths = [starts[j + 1] - starts[j] for j in range(r - 1)] + [rl.n - starts[-1]]
    order = sorted(range(r), key=images.__getitem__)
    dest_rank = [0] * r
    dest_offset = [0] * r
    p = 0
    for j in order:
        v = images[j]
        while p + 1 < r and starts[p + 1] <= v:
            p += 1
        dest_rank[j] = p
        dest_offset[j] = v - starts[p]
    return IntervalTable(
        rl.n,
        ABSOLUTE,
        lengths,
        dest_rank,
        dest_offset,
        starts=starts,
        kind="phi_inv" if inverse else "phi",
    )


def sample_docs(samples: SaSamples, bounds: DocBounds) -> SaSamples:
    """Annotate each SA sample with its document id (predecessor rank)."""
    return SaSamples(
        head_sa=samples.head_sa,
        tail_sa=samples.tail_sa,
        head_doc=[bounds.doc_of(v) for v in samples.head_sa],
        tail_doc=[bounds.doc_of(v) for v in samples.tail_sa],
    )


def attach_docs(table: IntervalTable, bounds: DocBounds) -> IntervalTable:
    """Attach per-interval document data to a phi/phi-inverse table.

    Stores the doc id at the interval's start value and the distance to the
    next document boundary, so offsets within the interval resolve without a
    global predecessor search.
    """
    starts = table.materialized_starts()
    doc0 = []
    dist = []
    for s in starts:
        d = bounds.doc_of(s)
        doc0.append(d)
        nxt = bounds.starts[d + 1] if d + 1 < bounds.d else table.n
        dist.append(nxt - s)
    out = IntervalTable(
        table.n,
        table.mode,
        table.lengths,
        table.dest_rank,
        table.dest_offset,
        starts=table.starts,
        source_runs=table.source_runs,
        kind=table.kind,
        cap=table.cap,
        cap_len=table.cap_len,
        alpha=table.alpha,
        extras={**table.extras, "doc": doc0, "docdist": dist},
    )
    return out


# ------------------------------------------------------------------ file I/O


def save_rlbwt(rl: Rlbwt, fp: BinaryIO) -> None:
    fp.write(RLBWT_MAGIC)
    fp.write(bytes([RLBWT_VERSION]))
    fp.write(struct.pack("<QQ", rl.n, rl.r))
    for c, l in rl.runs:
        fp.write(struct.pack("<BQ", c, l))


def load_rlbwt(fp: BinaryIO) -> Rlbwt:
    if fp.read(4) != RLBWT_MAGIC:
        raise FormatError("not an RLBWT file")
    version = fp.read(1)
    if version != bytes([RLBWT_VERSION]):
        raise FormatError(f"unsupported RLBWT version {version!r}")
    n, r = struct.unpack("<QQ", fp.read(16))
    runs = []
    for _ in range(r):
        c, l = struct.unpack("<BQ", fp.read(9))
        runs.append((c, l))
    rl = Rlbwt.from_runs(runs)
    if rl.n != n:
        raise FormatError("run lengths do not sum to the declared n")
    return rl


def rlbwt_to_text(rl: Rlbwt) -> str:
    """Debug text form: one "symbol_hex length" pair per line."""
    return "".join(f"{c:02x} {l}\n" for c, l in rl.runs)


def rlbwt_from_text(text: str) -> Rlbwt:
    runs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            sym_hex, length = line.split()
            runs.append((int(sym_hex, 16), int(length)))
        except ValueError as e:
            raise FormatError(f"bad RLBWT text line {lineno}: {line!r}") from e
    return Rlbwt.from_runs(runs)
