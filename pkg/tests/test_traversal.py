"""Streaming traversals: BWT inversion, SA/DA enumeration, counted driver."""

import random

import pytest

import movestruct as ms
from movestruct import (
    BoundsError,
    ByteSink,
    DocBounds,
    InvalidInputError,
    MissingColumnError,
    MoveCursor,
    QueryConfig,
    TraversalStats,
    UnsupportedModeError,
    ValueSink,
    build_bwt,
    build_lf,
    build_phi_via_lf,
    attach_docs,
    enumerate_da,
    enumerate_sa,
    invert_bwt,
    length_cap,
    recover_text,
    traverse_counted,
)
from movestruct.oracle import naive_sa
from support import random_text


def test_invert_abaaba():
    rl, _ = build_bwt(b"abaaba")
    lf = build_lf(rl)
    assert recover_text(lf) == b"abaaba\x00"


def test_invert_emission_order():
    rl, _ = build_bwt(b"abaaba")
    lf = build_lf(rl)
    sink = ByteSink()
    stats = invert_bwt(lf, sink)
    assert stats.steps == rl.n
    stats.check_consistency()
    # Emitted in reverse text order with the sentinel last.
    assert sink.data() == b"abaaba\x00"[::-1][1:] + b"\x00"


def test_invert_unary():
    rl, _ = build_bwt(b"aaaaa")
    assert recover_text(build_lf(rl)) == b"aaaaa\x00"


def test_invert_requires_symbol_column():
    rl, _ = build_bwt(b"abaaba")
    lf = build_lf(rl)
    lf.extras.pop("sym")
    with pytest.raises(MissingColumnError):
        invert_bwt(lf, ByteSink())


def test_invert_random_sweep_with_caps():
    rng = random.Random(17)
    for _ in range(30):
        text = random_text(rng, 2, 2000)
        rl, _ = build_bwt(text)
        lf = build_lf(rl)
        for c in (1, 2, 8):
            capped = length_cap(lf, c)
            assert recover_text(capped) == text + b"\x00"
            assert recover_text(capped.to_relative()) == text + b"\x00"


def test_enumerate_sa_abaaba():
    rl, _ = build_bwt(b"abaaba")
    phi_inv, _ = build_phi_via_lf(rl, inverse=True)
    sink = ValueSink()
    stats = enumerate_sa(phi_inv, rl.n - 1, sink)
    assert sink.data() == [6, 5, 2, 3, 0, 4, 1]
    assert stats.steps == rl.n
    stats.check_consistency()


def test_enumerate_sa_is_permutation():
    rng = random.Random(23)
    for _ in range(20):
        text = random_text(rng, 2, 1500)
        rl, sa = build_bwt(text)
        phi_inv, _ = build_phi_via_lf(rl, inverse=True)
        sink = ValueSink()
        enumerate_sa(phi_inv, rl.n - 1, sink)
        out = sink.data()
        assert out == sa == naive_sa(text + b"\x00")
        assert sorted(out) == list(range(rl.n))


def test_phi_traversal_emits_reverse_stream():
    rl, sa = build_bwt(b"abaaba")
    phi, _ = build_phi_via_lf(rl)
    sink = ValueSink()
    enumerate_sa(phi, sa[-1], sink)
    assert sink.data() == sa[::-1]


def test_enumerate_sa_bounds():
    rl, _ = build_bwt(b"abaaba")
    phi_inv, _ = build_phi_via_lf(rl, inverse=True)
    with pytest.raises(BoundsError):
        enumerate_sa(phi_inv, rl.n, ValueSink())


def test_enumerate_da_abaaba():
    rl, _ = build_bwt(b"abaaba")
    phi_inv, _ = build_phi_via_lf(rl, inverse=True)
    bounds = DocBounds([0, 3])
    table = attach_docs(phi_inv, bounds)
    sink = ValueSink()
    enumerate_da(table, rl.n - 1, sink, bounds=bounds)
    assert sink.data() == [1, 1, 0, 1, 0, 1, 0]


def test_enumerate_da_single_document():
    rl, _ = build_bwt(b"abaaba")
    phi_inv, _ = build_phi_via_lf(rl, inverse=True)
    table = attach_docs(phi_inv, DocBounds([0]))
    sink = ValueSink()
    enumerate_da(table, rl.n - 1, sink)
    assert sink.data() == [0] * rl.n


def test_enumerate_da_requires_doc_columns():
    rl, _ = build_bwt(b"abaaba")
    phi_inv, _ = build_phi_via_lf(rl, inverse=True)
    with pytest.raises(MissingColumnError):
        enumerate_da(phi_inv, rl.n - 1, ValueSink())


def test_enumerate_da_random_multi_doc():
    rng = random.Random(31)
    for _ in range(50):
        docs = [random_text(rng, 2, 120) for _ in range(rng.randint(1, 6))]
        text = b"".join(docs)
        starts, pos = [], 0
        for d in docs:
            starts.append(pos)
            pos += len(d)
        bounds = DocBounds(starts)
        rl, sa = build_bwt(text)
        phi_inv, _ = build_phi_via_lf(rl, inverse=True)
        table = attach_docs(phi_inv, bounds)
        sink = ValueSink()
        enumerate_da(table, rl.n - 1, sink, bounds=bounds)
        assert sink.data() == [bounds.doc_of(v) for v in sa]


def test_traverse_counted_cycle_closure():
    rl, _ = build_bwt(b"abaaba")
    lf = build_lf(rl)
    end, stats = traverse_counted(lf, MoveCursor(0, 0), rl.n)
    assert end == MoveCursor(0, 0)
    assert stats.steps == rl.n
    stats.check_consistency()


def test_traverse_counted_relative_and_exponential():
    rl, _ = build_bwt(b"abaaba")
    lf = build_lf(rl)
    rel = lf.to_relative()
    _, s_abs = traverse_counted(lf, MoveCursor(0, 0), rl.n)
    _, s_rel = traverse_counted(rel, MoveCursor(0, 0), rl.n)
    assert s_abs.total_fast_forwards == s_rel.total_fast_forwards
    exp = QueryConfig(search=ms.EXPONENTIAL)
    end, s_exp = traverse_counted(lf, MoveCursor(0, 0), rl.n, exp)
    assert end == MoveCursor(0, 0)
    with pytest.raises(UnsupportedModeError):
        traverse_counted(rel, MoveCursor(0, 0), 1, exp)


def test_traverse_counted_bad_start():
    rl, _ = build_bwt(b"abaaba")
    lf = build_lf(rl)
    with pytest.raises(BoundsError):
        traverse_counted(lf, MoveCursor(99, 0), 1)


def test_stats_consistency_check():
    s = TraversalStats()
    s.record(2)
    s.record(0)
    assert s.histogram == {2: 1, 0: 1}
    s.check_consistency()
    s.steps = 5
    with pytest.raises(InvalidInputError):
        s.check_consistency()


def test_file_backed_sinks(tmp_path):
    rl, sa = build_bwt(b"abaaba")
    lf = build_lf(rl)
    path = tmp_path / "text.bin"
    with open(path, "wb") as fp:
        invert_bwt(lf, ByteSink(fp))
    data = path.read_bytes()[::-1]
    assert data[1:] + data[:1] == b"abaaba\x00"

    phi_inv, _ = build_phi_via_lf(rl, inverse=True)
    vpath = tmp_path / "sa.bin"
    with open(vpath, "wb") as fp:
        enumerate_sa(phi_inv, rl.n - 1, ValueSink(fp))
    raw = vpath.read_bytes()
    vals = [int.from_bytes(raw[i : i + 8], "little") for i in range(0, len(raw), 8)]
    assert vals == sa

    with pytest.raises(InvalidInputError):
        with open(vpath, "wb") as fp:
            sink = ValueSink(fp)
            sink.data()
