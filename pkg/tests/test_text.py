import pytest
from hypothesis import given, strategies as st

from asymstream.text import (
    END,
    PAD_DISTINCT_OFFLINE,
    PAD_DISTINCT_ONLINE,
    PAD_SAME,
    MemoryMeter,
    ModelViolationError,
    OfflineText,
    OnlineStream,
    SinglePassError,
    SubstringRef,
    as_symbols,
    iter_file_symbols,
    pad_pair,
    read_window,
)
from asymstream.exact import lcs_full

from oracles import lcs_rec, rand_string
from asymstream.harness import SplitMix64


def test_char_at_counts_queries():
    t = OfflineText("aba")
    assert t.char_at(2) == ord("b")
    assert t.query_count == 1
    assert OfflineText("a").char_at(1) == ord("a")


@pytest.mark.parametrize("i", [0, 3, -1])
def test_char_at_out_of_range(i):
    with pytest.raises(IndexError):
        OfflineText("ab").char_at(i)


def test_stream_delivers_in_order_then_end():
    s = OnlineStream(as_symbols("ab"))
    assert s.next() == ord("a")
    assert s.next() == ord("b")
    assert s.next() is END
    assert s.next() is END
    assert OnlineStream([]).next() is END


def test_rewind_after_delivery_is_rejected():
    s = OnlineStream([1, 2, 3])
    s.rewind(1)  # nothing consumed yet
    s.next()
    with pytest.raises(SinglePassError):
        s.rewind(1)
    with pytest.raises(ModelViolationError):
        s.rewind()


def test_stream_length_mismatch_detected():
    short = OnlineStream(iter([1, 2]), 3)
    short.read(2)
    with pytest.raises(ModelViolationError):
        short.next()
    long_ = OnlineStream(iter([1, 2, 3]), 2)
    long_.read(2)
    with pytest.raises(ModelViolationError):
        long_.finish()


def test_finish_requires_full_consumption():
    s = OnlineStream([1, 2])
    s.next()
    with pytest.raises(ModelViolationError):
        s.finish()


def test_record_log_and_window_meter():
    meter = MemoryMeter()
    s = OnlineStream([5, 6, 7, 8], record=True)
    assert read_window(s, 3, meter) == [5, 6, 7]
    assert meter.current["stream_buffer"] == 3
    with pytest.raises(ModelViolationError):
        read_window(s, 3, meter)
    assert s.log == [1, 2, 3, 4]
    assert meter.current["stream_buffer"] == 3


def test_meter_peaks_and_streaming_peak():
    m = MemoryMeter()
    m.alloc("stream_buffer", 4)
    m.alloc("frontier_state", 3)
    m.free("stream_buffer", 4)
    m.alloc("frontier_state", 2)
    with m.hold("scratch_offline", 9):
        pass
    assert m.peak == {"stream_buffer": 4, "frontier_state": 5, "scratch_offline": 9}
    assert m.streaming_peak == 7
    with pytest.raises(ValueError):
        m.free("stream_buffer", 1)


def test_substring_ref_bounds():
    assert len(SubstringRef.closed(2, 4)) == 3
    assert len(SubstringRef(3, 3)) == 0
    SubstringRef(1, 5).check(4)
    with pytest.raises(IndexError):
        SubstringRef(2, 7).check(5)
    with pytest.raises(IndexError):
        SubstringRef(0, 1).check(5)


def test_reserved_codes_rejected():
    with pytest.raises(ValueError):
        as_symbols([PAD_SAME])
    with pytest.raises(ValueError):
        as_symbols([-1])


def test_pad_ed_mode():
    off, on, n = pad_pair(OfflineText("abcde"), as_symbols("abcdf"), "ed", 3)
    assert n == 5 and off.n == 6 and on.length == 6
    assert off.char_at(6) == PAD_SAME
    assert list(on)[-1] == PAD_SAME


def test_pad_already_divisible():
    off, on, _ = pad_pair(OfflineText("abcd"), as_symbols("abcd"), "ed", 2)
    assert off.n == 4 and list(on) == as_symbols("abcd")


def test_pad_lcs_mode_sentinels():
    off, on, _ = pad_pair(OfflineText("abcde"), as_symbols("edcba"), "lcs", 3)
    assert off.char_at(6) == PAD_DISTINCT_OFFLINE
    assert list(on)[-1] == PAD_DISTINCT_ONLINE


def test_pad_unequal_lengths():
    with pytest.raises(ModelViolationError):
        pad_pair(OfflineText("abc"), as_symbols("ab"), "ed", 2)


def test_pad_lcs_preserves_lcs_random():
    rng = SplitMix64(11)
    for _ in range(50):
        n = 1 + rng.below(32)
        a, b = rand_string(rng, n, 3), rand_string(rng, n, 3)
        off, on, _ = pad_pair(OfflineText(a), b, "lcs", 1 + rng.below(7))
        assert lcs_full(off._symbols, list(on)) == lcs_rec(a, b)


@given(st.lists(st.integers(0, 2), max_size=20), st.lists(st.integers(0, 2), max_size=20),
       st.integers(1, 6))
def test_pad_ed_preserves_ed(a, b, block):
    from asymstream.exact import ed_full
    b = (b + a)[:len(a)]
    off, on, _ = pad_pair(OfflineText(a), b, "ed", block)
    assert off.n % block == 0
    assert ed_full(off._symbols, list(on)) == ed_full(a, b)


def test_file_symbols(tmp_path):
    p = tmp_path / "x.txt"
    p.write_bytes(b" 12\t7\n300  4 ")
    assert list(iter_file_symbols(p, "int", chunk=3)) == [12, 7, 300, 4]
    assert list(iter_file_symbols(p, "bytes"))[:3] == [32, 49, 50]
    p.write_bytes(b"1 x2")
    with pytest.raises(ValueError):
        list(iter_file_symbols(p, "int"))
