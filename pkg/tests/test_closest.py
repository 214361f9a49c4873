import math
from fractions import Fraction

import pytest

from asymstream.closest import (
    RecursionConfig,
    _search_enumerate,
    ceil_log_ratio,
    ceil_pow,
    check_tractable,
    closest_ratio_bound,
    closest_substring_stream,
    ed_const_bound,
    ed_const_estimate,
    enumerate_mappings,
    mapping_cost,
    mapping_count,
    mapping_min_dp,
    window_lengths,
)
from asymstream.exact import ClosestMatch, closest_substring_exact, ed_full
from asymstream.harness import SplitMix64
from asymstream.text import ConfigError, MemoryMeter, OfflineText, OnlineStream, TractabilityError, as_symbols

from oracles import closest_brute, rand_string


def test_ceil_pow_exact():
    assert ceil_pow(16, Fraction(1, 2)) == 4
    assert ceil_pow(17, Fraction(1, 2)) == 5
    assert ceil_pow(27, Fraction(1, 3)) == 3
    assert ceil_pow(28, Fraction(1, 3)) == 4
    assert ceil_pow(10, 1) == 10
    for n in range(1, 300):
        assert ceil_pow(n, Fraction(1, 2)) == math.isqrt(n - 1) + 1


def test_bounds():
    assert ed_const_bound(0.5) == 15
    assert ed_const_bound(1) == 7
    assert closest_ratio_bound(16, 16, 0.5) == 7
    assert closest_ratio_bound(4, 16, 0.5) == 3
    assert closest_ratio_bound(1, 16, 0.5) == 1
    assert ceil_log_ratio(5, 16, Fraction(1, 2)) == 2


def test_config_rejects_bad_delta():
    for delta in (0, -0.5, 1.5):
        with pytest.raises(ConfigError):
            RecursionConfig.for_length(16, delta)


def test_window_lengths_balanced():
    assert window_lengths(10, 4) == [3, 3, 2, 2]
    assert window_lengths(16, 4) == [4, 4, 4, 4]
    assert sum(window_lengths(17, 5)) == 17


def test_mapping_counts():
    assert list(enumerate_mappings(1, 1)) == [(1, 1), (1, 2), (2, 2)]
    assert sum(1 for _ in enumerate_mappings(2, 2)) == 10 == mapping_count(2, 2)
    assert sum(1 for _ in enumerate_mappings(4, 16)) == 20349 == mapping_count(4, 16)


def test_enumeration_lexicographic_and_nondecreasing():
    tuples = list(enumerate_mappings(2, 3))
    assert tuples == sorted(tuples)
    assert all(a <= b <= c for a, b, c in tuples)


def _random_summaries(rng, text_n, xi):
    out = []
    for _ in range(xi):
        l = 1 + rng.below(text_n)
        r = l + rng.below(min(4, text_n - l + 1))
        out.append(ClosestMatch(l, r, rng.below(4)))
    return out


def _brute_min(summaries, text):
    best = None
    for mp in enumerate_mappings(len(summaries), text.n):
        if mp[-1] == mp[0]:
            continue
        c = mapping_cost(mp, summaries, text)
        if best is None or c < best:
            best = c
    return best


def test_search_modes_agree_with_plain_enumeration():
    rng = SplitMix64(21)
    for _ in range(60):
        n = 1 + rng.below(10)
        text = OfflineText(rand_string(rng, n, 3))
        summaries = _random_summaries(rng, n, 1 + rng.below(3))
        want = _brute_min(summaries, text)
        assert _search_enumerate(summaries, text, MemoryMeter()).d == want
        assert mapping_min_dp(summaries, text).d == want


def test_single_window_definition():
    text = OfflineText("abcab")
    s = ClosestMatch(2, 3, 1)
    want = min(1 + ed_full(text._symbols[p0 - 1:p1 - 1], text._symbols[1:3])
               for p0 in range(1, 7) for p1 in range(p0 + 1, 7))
    assert mapping_min_dp([s], text).d == want


def test_tiling_summaries_cost_zero():
    text = OfflineText("abcdefgh")
    tiles = [ClosestMatch(1, 3, 0), ClosestMatch(4, 5, 0), ClosestMatch(6, 8, 0)]
    best = _search_enumerate(tiles, text, MemoryMeter())
    assert best == ClosestMatch(1, 8, 0)
    assert mapping_cost((1, 4, 6, 9), tiles, text) == 0


def _run_closest(text, online, delta, search="enumerate", observer=None, meter=None):
    t = OfflineText(text)
    cfg = RecursionConfig.for_length(t.n, delta)
    stream = OnlineStream(online, record=True)
    match = closest_substring_stream(t, stream, len(online), cfg, meter, search=search,
                                     observer=observer)
    stream.finish()
    assert stream.log == list(range(1, len(online) + 1))
    return match


def test_verbatim_segment_gives_zero():
    text = as_symbols("qwertyuiopasdfgh")
    match = _run_closest(text, text[3:11], 0.5)
    assert match.d == 0
    assert text[match.l - 1:match.r] == text[3:11]


def test_base_case_is_exact():
    rng = SplitMix64(8)
    for _ in range(20):
        text = rand_string(rng, 16, 3)
        online = rand_string(rng, 4, 3)
        assert _run_closest(text, online, 0.5) == closest_substring_exact(OfflineText(text), online)


@pytest.mark.parametrize("delta", [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)])
def test_recursive_sandwich_every_node(delta):
    rng = SplitMix64(int(delta * 100))
    for _ in range(15):
        n = 16
        text = rand_string(rng, n, 3)
        online = rand_string(rng, n, 3)
        checked = []

        def observe(start, m, match):
            seg = online[start - 1:start - 1 + m]
            assert ed_full(text[match.l - 1:match.r], seg) <= match.d
            assert match.d <= closest_ratio_bound(m, n, delta) * closest_brute(text, seg)[2]
            checked.append(m)

        _run_closest(text, online, delta, observer=observe)
        assert checked[-1] == n


def test_enumerate_frontier_memory_small():
    # enumerate mode keeps O(xi) summaries per level plus O(xi) search state
    for n in (16, 64):
        rng = SplitMix64(n)
        text = rand_string(rng, n, 4)
        meter = MemoryMeter()
        delta = Fraction(1, 2) if n == 16 else Fraction(1, 1)
        _run_closest(text, text[:n], delta, meter=meter)
        cfg = RecursionConfig.for_length(n, delta)
        xi = cfg.base_threshold
        depth = math.ceil(1 / delta) + 1
        assert meter.peak["stream_buffer"] <= cfg.base_threshold
        assert meter.peak["frontier_state"] <= 8 * xi * depth * max(1, math.log2(n))


def test_ed_const_examples():
    text = as_symbols("abcdefghijklmnop")
    est, match = ed_const_estimate(OfflineText(text), OnlineStream(text), 0.5)
    assert est == 0 and (match.l, match.r) == (1, 16)
    est, _ = ed_const_estimate(OfflineText("aaaa"), OnlineStream(as_symbols("aaab")), 0.5)
    assert 1 <= est <= 15


def test_ed_const_random_sandwich_both_modes():
    rng = SplitMix64(99)
    for _ in range(60):
        a = rand_string(rng, 16, 4)
        b = rand_string(rng, 16, 4) if rng.below(2) else a[:12] + rand_string(rng, 4, 4)
        opt = ed_full(a, b)
        e1, _ = ed_const_estimate(OfflineText(a), OnlineStream(b), 0.5, search="enumerate")
        e2, _ = ed_const_estimate(OfflineText(a), OnlineStream(b), 0.5, search="dp")
        assert e1 == e2
        assert opt <= e1 <= 15 * opt


def test_tractability_guard(monkeypatch):
    cfg = RecursionConfig.for_length(64, 0.5)
    with pytest.raises(TractabilityError):
        check_tractable(cfg, 64, "enumerate")
    check_tractable(cfg, 64, "dp")
    check_tractable(cfg, 64, "enumerate", force=True)
    monkeypatch.setenv("ASD_MAX_ENUM", "1e12")
    check_tractable(cfg, 64, "enumerate")
    monkeypatch.setenv("ASD_MAX_ENUM", "10")
    with pytest.raises(TractabilityError):
        check_tractable(RecursionConfig.for_length(16, 0.5), 16, "enumerate")
