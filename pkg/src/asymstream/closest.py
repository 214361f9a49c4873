"""Recursive approximate closest substring and the constant-factor ED estimate.

The online string is split into ``xi = ceil(n**delta)`` windows.  Each
window is solved recursively and only its summary ``(l_i, r_i, d_i)`` is
kept.  The summaries are then combined by searching over every mapping
``p_0 <= p_1 <= ... <= p_xi`` of the windows onto offline pieces, where
window ``i`` is charged ``d_i + ed(s̄[p_{i-1}, p_i), s̄[l_i, r_i])``.
The triangle inequality makes that charge a sound over-estimate of the
window's true distance to its piece.
"""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .exact import ClosestMatch, closest_substring_exact, ed_bounded_space
from .text import (
    INF,
    ConfigError,
    MemoryMeter,
    ModelViolationError,
    OfflineText,
    OnlineStream,
    SubstringRef,
    TractabilityError,
    ensure_meter,
    read_window,
)

DEFAULT_MAX_ENUM = 10**8
SEARCH_MODES = ("enumerate", "dp")

WindowSummary = ClosestMatch


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def ceil_pow(n: int, delta) -> int:
    """Exact ``ceil(n ** delta)`` for rational ``delta``."""
    delta = as_fraction(delta)
    p, q = delta.numerator, delta.denominator
    target = n ** p
    t = max(1, math.ceil(n ** float(delta)))
    while t > 1 and (t - 1) ** q >= target:
        t -= 1
    while t ** q < target:
        t += 1
    return t


def ceil_log_ratio(m: int, n: int, delta) -> int:
    """Exact ``ceil(log_n(m) / delta)``: smallest ``t`` with ``m <= n**(t*delta)``."""
    if m <= 1:
        return 0
    if n < 2:
        raise ValueError("logarithm base must be at least 2")
    delta = as_fraction(delta)
    p, q = delta.numerator, delta.denominator
    mq = m ** q
    t = 0
    while n ** (t * p) < mq:
        t += 1
    return t


def closest_ratio_bound(m: int, n: int, delta) -> int:
    """Proven closest-substring ratio ``2**(ceil(gamma/delta)+1) - 1`` for ``m = n**gamma``."""
    return 2 ** (ceil_log_ratio(m, n, delta) + 1) - 1


def ed_const_bound(delta) -> int:
    """Proven edit-distance ratio ``2**(ceil(1/delta)+2) - 1``."""
    inv = 1 / as_fraction(delta)
    return 2 ** (math.ceil(inv) + 2) - 1


@dataclass(frozen=True)
class RecursionConfig:
    delta: Fraction
    n: int
    base_threshold: int

    @classmethod
    def for_length(cls, n: int, delta) -> "RecursionConfig":
        delta = as_fraction(delta)
        if not 0 < delta <= 1:
            raise ConfigError(f"delta must lie in (0, 1], got {delta}")
        if n < 1:
            raise ValueError("offline text must be non-empty")
        return cls(delta, n, ceil_pow(n, delta))

    def xi(self, m: int) -> int:
        return min(self.base_threshold, m)


def window_lengths(m: int, xi: int) -> list[int]:
    """Split ``m`` into ``xi`` consecutive lengths differing by at most one."""
    q, rem = divmod(m, xi)
    return [q + 1] * rem + [q] * (xi - rem)


def mapping_count(xi: int, n: int) -> int:
    """Number of non-decreasing ``(xi+1)``-tuples over ``[1, n+1]``."""
    return math.comb(n + xi + 1, xi + 1)


def max_enumeration() -> int:
    raw = os.environ.get("ASD_MAX_ENUM")
    return int(float(raw)) if raw else DEFAULT_MAX_ENUM


def enumerate_mappings(xi: int, n: int) -> Iterator[tuple[int, ...]]:
    """Yield every non-decreasing ``(xi+1)``-tuple over ``[1, n+1]`` in lexicographic order."""
    top = n + 1
    p = [1] * (xi + 1)
    while True:
        yield tuple(p)
        i = xi
        while i >= 0 and p[i] == top:
            i -= 1
        if i < 0:
            return
        v = p[i] + 1
        for j in range(i, xi + 1):
            p[j] = v


def mapping_cost(mapping: Sequence[int], summaries: Sequence[WindowSummary],
                 text: OfflineText, meter: MemoryMeter | None = None) -> int:
    """Combined charge of one mapping tuple."""
    total = 0
    for i, s in enumerate(summaries):
        piece = SubstringRef(mapping[i], mapping[i + 1])
        total += s.d + ed_bounded_space(text, piece, s.ref, meter)
    return total


def _advance_column(col: list, c: int, text: OfflineText, y_start: int) -> list:
    """Extend the offline piece by symbol ``c`` against ``y = s̄[y_start, ...]``."""
    y_len = len(col) - 1
    new = [0] * (y_len + 1)
    new[0] = col[0] + 1
    for j in range(1, y_len + 1):
        sub = col[j - 1] + (c != text.char_at(y_start + j - 1))
        best = col[j] + 1
        if sub < best:
            best = sub
        ins = new[j - 1] + 1
        new[j] = ins if ins < best else best
    return new


def _search_enumerate(summaries: Sequence[WindowSummary], text: OfflineText,
                      meter: MemoryMeter) -> ClosestMatch:
    """Best mapping by exhaustive lexicographic enumeration.

    Depth-first over ``p_0, p_1, ...``; the cost of window ``i`` for all
    ``p_i`` is maintained incrementally with one DP column per level, and
    subtrees that cannot strictly beat the incumbent are skipped.  The
    first minimiser in lexicographic order is returned, exactly as a plain
    loop over :func:`enumerate_mappings` would.
    """
    xi = len(summaries)
    n = text.n
    ys = [(s.l, s.r - s.l + 1) for s in summaries]
    ds = [s.d for s in summaries]
    suffix_d = [0] * (xi + 1)
    suffix_len = [0] * (xi + 1)
    for i in range(xi - 1, -1, -1):
        suffix_d[i] = suffix_d[i + 1] + ds[i]
        suffix_len[i] = suffix_len[i + 1] + ys[i][1]

    p = [0] * (xi + 1)
    partial = [0] * (xi + 1)
    best = [INF, 0, 0]
    state_units = 2 * (xi + 1) + 3 + 2 * xi
    meter.alloc("frontier_state", state_units)

    def level(i: int) -> None:
        start = p[i - 1]
        y_start, y_len = ys[i - 1]
        di = ds[i - 1]
        base = partial[i - 1] + di
        meter.alloc("scratch_offline", y_len + 1)
        try:
            col = list(range(y_len + 1))
            x = start
            while True:
                total = base + col[y_len]
                if i == xi:
                    if x > p[0] and total < best[0]:
                        best[0], best[1], best[2] = total, p[0], x - 1
                else:
                    slack = suffix_len[i] - (n + 1 - x)
                    bound = total + suffix_d[i] + (slack if slack > 0 else 0)
                    if bound < best[0]:
                        p[i] = x
                        partial[i] = total
                        level(i + 1)
                if base + min(col) + suffix_d[i] >= best[0] or x > n:
                    break
                col = _advance_column(col, text.char_at(x), text, y_start)
                x += 1
        finally:
            meter.free("scratch_offline", y_len + 1)

    try:
        for p0 in range(1, n + 1):
            if suffix_d[0] >= best[0]:
                break
            p[0] = p0
            partial[0] = 0
            level(1)
    finally:
        meter.free("frontier_state", state_units)
    return ClosestMatch(best[1], best[2], best[0])


def mapping_min_dp(summaries: Sequence[WindowSummary], text: OfflineText,
                   meter: MemoryMeter | None = None) -> ClosestMatch:
    """Same minimum as the enumeration, by an ``O(n * xi)``-state DP.

    ``F[x]`` holds the cheapest ``(cost, p_0)`` over partial mappings whose
    last piece ends just before ``x`` and which contain at least one
    non-empty piece.  The all-empty prefix is tracked by a single cost and
    may only be left through a non-empty piece.
    """
    meter = ensure_meter(meter)
    if not summaries:
        raise ValueError("need at least one window summary")
    n = text.n
    state_units = 4 * (n + 2)
    meter.alloc("frontier_state", state_units)
    try:
        f = [(INF, 0)] * (n + 2)
        empty_cost = 0
        for s in summaries:
            y_start, y_len = s.l, s.r - s.l + 1
            new_f = [(INF, 0)] * (n + 2)
            with meter.hold("scratch_offline", 2 * (y_len + 1)):
                col = [(INF, 0)] * (y_len + 1)
                for x in range(1, n + 2):
                    if x > 1:
                        c = text.char_at(x - 1)
                        new = [None] * (y_len + 1)
                        new[0] = (col[0][0] + 1, col[0][1])
                        for j in range(1, y_len + 1):
                            dc, ds_ = col[j - 1]
                            diag = (dc + (c != text.char_at(y_start + j - 1)), ds_)
                            lc, ls = col[j]
                            up = new[j - 1]
                            new[j] = min(diag, (lc + 1, ls), (up[0] + 1, up[1]))
                        col = new
                    fc, fs = f[x]
                    if fc != INF:
                        col = [min(cell, (fc + j, fs)) for j, cell in enumerate(col)]
                    cost, st = col[y_len]
                    new_f[x] = (cost + s.d, st)
                    # Leaving the all-empty prefix: the piece must be non-empty.
                    col = [min(cell, (empty_cost + j, x)) for j, cell in enumerate(col)]
            f = new_f
            empty_cost += s.d + y_len
        best = None
        for x in range(2, n + 2):
            cost, st = f[x]
            if best is None or cost < best.d:
                best = ClosestMatch(st, x - 1, cost)
        return best
    finally:
        meter.free("frontier_state", state_units)


def _search(summaries, text, meter, search: str) -> ClosestMatch:
    if search == "enumerate":
        return _search_enumerate(summaries, text, meter)
    if search == "dp":
        return mapping_min_dp(summaries, text, meter)
    raise ConfigError(f"unknown mapping search {search!r}")


def check_tractable(cfg: RecursionConfig, m: int, search: str, force: bool = False) -> None:
    """Refuse enumeration instances above the tuple-count guard."""
    if search != "enumerate" or force or m <= cfg.base_threshold:
        return
    count = mapping_count(cfg.xi(m), cfg.n)
    limit = max_enumeration()
    if count > limit:
        raise TractabilityError(
            f"mapping enumeration needs {count} tuples (limit {limit}); "
            "use the dp mapping search, --force, or raise ASD_MAX_ENUM")


def closest_substring_stream(text: OfflineText, stream: OnlineStream, m: int,
                             cfg: RecursionConfig, meter: MemoryMeter | None = None, *,
                             search: str = "enumerate",
                             observer: Callable[[int, int, ClosestMatch], None] | None = None,
                             ) -> ClosestMatch:
    """Approximate closest substring for the next ``m`` online symbols.

    ``observer(start, length, match)`` is called at every recursion node
    with the 1-based online start of its segment.
    """
    meter = ensure_meter(meter)
    if m < 1:
        raise ValueError("segment length must be positive")
    seg_start = stream.cursor
    if m <= cfg.base_threshold:
        window = read_window(stream, m, meter)
        try:
            match = closest_substring_exact(text, window, meter)
        finally:
            meter.free("stream_buffer", m)
    else:
        xi = cfg.xi(m)
        summaries: list[WindowSummary] = []
        try:
            for length in window_lengths(m, xi):
                sub = closest_substring_stream(text, stream, length, cfg, meter,
                                               search=search, observer=observer)
                meter.alloc("frontier_state", 3)
                summaries.append(sub)
            match = _search(summaries, text, meter, search)
        finally:
            meter.free("frontier_state", 3 * len(summaries))
    if observer is not None:
        observer(seg_start, m, match)
    return match


def ed_const_estimate(text: OfflineText, stream: OnlineStream, delta,
                      meter: MemoryMeter | None = None, *, search: str = "enumerate",
                      force: bool = False, observer=None) -> tuple[int, ClosestMatch]:
    """Constant-factor edit distance estimate ``d + ed(s̄[l, r], s̄)``.

    ``ed(s̄, s) <= estimate <= (2**(ceil(1/delta)+2) - 1) * ed(s̄, s)``.
    """
    meter = ensure_meter(meter)
    n = text.n
    if stream.length != n:
        raise ModelViolationError(f"online length {stream.length} differs from offline length {n}")
    if n == 0:
        stream.finish()
        return 0, ClosestMatch(1, 0, 0)
    cfg = RecursionConfig.for_length(n, delta)
    check_tractable(cfg, n, search, force)
    match = closest_substring_stream(text, stream, n, cfg, meter, search=search, observer=observer)
    stream.finish()
    estimate = match.d + ed_bounded_space(text, match.ref, SubstringRef(1, n + 1), meter)
    return estimate, match
