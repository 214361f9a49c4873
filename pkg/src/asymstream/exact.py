"""Exact edit distance / LCS computations.

These serve two roles: subroutines that run on a buffered window or on
offline substrings, and reference oracles for the approximation algorithms.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .text import INF, MemoryMeter, OfflineText, SubstringRef, ensure_meter


@dataclass(frozen=True)
class ClosestMatch:
    """Closed offline interval ``[l, r]`` and its (approximate) distance ``d``."""

    l: int
    r: int
    d: int

    @property
    def ref(self) -> SubstringRef:
        return SubstringRef.closed(self.l, self.r)


def ed_full(a: Sequence, b: Sequence) -> int:
    """Edit distance by the full quadratic table."""
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][0] = i
    for j in range(m + 1):
        table[0][j] = j
    for i in range(1, n + 1):
        ai = a[i - 1]
        row, prev = table[i], table[i - 1]
        for j in range(1, m + 1):
            row[j] = min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + (ai != b[j - 1]))
    return table[n][m]


def lcs_full(a: Sequence, b: Sequence) -> int:
    """Length of a longest common subsequence by the full table."""
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        ai = a[i - 1]
        row, prev = table[i], table[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = max(prev[j], row[j - 1])
    return table[n][m]


def _reader(text: OfflineText, ref: SubstringRef):
    base = ref.l - 1
    return lambda j: text.char_at(base + j)


def ed_bounded_space(text: OfflineText, a: SubstringRef, b: SubstringRef | Sequence,
                     meter: MemoryMeter | None = None) -> int:
    """Edit distance between an offline substring and a substring or buffer.

    Two DP rows are kept along the shorter operand, so scratch memory is
    ``2 * (min(|a|, |b|) + 1)`` units.  Offline characters are re-queried
    rather than copied.
    """
    meter = ensure_meter(meter)
    a.check(text.n)
    get_a = _reader(text, a)
    len_a = len(a)
    if isinstance(b, SubstringRef):
        b.check(text.n)
        get_b = _reader(text, b)
        len_b = len(b)
    else:
        buf = b
        get_b = lambda j: buf[j - 1]  # noqa: E731
        len_b = len(b)
    # Rows run along the shorter operand.
    if len_a < len_b:
        get_a, get_b, len_a, len_b = get_b, get_a, len_b, len_a
    short, long_ = len_b, len_a
    if short == 0:
        return long_
    scratch = 2 * (short + 1)
    with meter.hold("scratch_offline", scratch):
        prev = list(range(short + 1))
        cur = [0] * (short + 1)
        for i in range(1, long_ + 1):
            ci = get_a(i)
            cur[0] = i
            for j in range(1, short + 1):
                sub = prev[j - 1] + (ci != get_b(j))
                dele = prev[j] + 1
                ins = cur[j - 1] + 1
                cur[j] = sub if sub <= dele and sub <= ins else (dele if dele <= ins else ins)
            prev, cur = cur, prev
        return prev[short]


def closest_substring_exact(text: OfflineText, window: Sequence,
                            meter: MemoryMeter | None = None) -> ClosestMatch:
    """Non-empty offline substring with minimum edit distance to ``window``.

    One left-to-right scan of the offline string with a column over the
    window.  Every offline position may start an alignment for free; each
    cell carries ``(cost, start)`` and takes the lexicographic minimum, so
    among optimal alignments the smallest start wins.  Over end positions
    the smallest ``r`` wins.
    """
    meter = ensure_meter(meter)
    n, w = text.n, len(window)
    if w == 0 or n == 0:
        raise ValueError("closest substring needs a non-empty window and text")
    with meter.hold("scratch_offline", 2 * (w + 1)):
        # Column for end position x = 1 (empty prefix): only start 1.
        col = [(j, 1) for j in range(w + 1)]
        best = None
        for x in range(2, n + 2):
            c = text.char_at(x - 1)
            new = [None] * (w + 1)
            cost, start = col[0]
            new[0] = (cost + 1, start)
            for j in range(1, w + 1):
                dc, ds = col[j - 1]
                diag = (dc + (c != window[j - 1]), ds)
                uc, us = new[j - 1]
                up = (uc + 1, us)
                lc, ls = col[j]
                left = (lc + 1, ls)
                new[j] = min(diag, up, left)
            cost, start = new[w]
            if best is None or cost < best.d:
                best = ClosestMatch(start, x - 1, cost)
            # Start a fresh alignment at x (after recording: substrings are non-empty).
            if x <= n:
                col = [min(cell, (j, x)) for j, cell in enumerate(new)]
    return best


def closest_substring_brute(text: OfflineText | Sequence, online: Sequence) -> ClosestMatch:
    """Exhaustive closest substring over all ``1 <= i <= j <= n`` (tests only)."""
    symbols = text._symbols if isinstance(text, OfflineText) else tuple(text)
    online = list(online)
    best = None
    n = len(symbols)
    for j in range(1, n + 1):
        for i in range(1, j + 1):
            d = ed_full(symbols[i - 1:j], online)
            if best is None or d < best.d:
                best = ClosestMatch(i, j, d)
    return best


def lcsp_scan(text: OfflineText, p: int, window: Sequence, k: int,
              meter: MemoryMeter | None = None):
    """Smallest ``q`` with ``lcs(s̄[p, q], window) >= k``, or ``INF``.

    ``k == 0`` yields ``p - 1``.  One LCS row over the window is maintained
    while scanning the offline string from ``p``.
    """
    meter = ensure_meter(meter)
    n, w = text.n, len(window)
    if not 1 <= p <= n + 1:
        raise IndexError(f"start position {p} out of range [1, {n + 1}]")
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return p - 1
    if k > w:
        return INF
    with meter.hold("scratch_offline", w + 1):
        row = [0] * (w + 1)
        for q in range(p, n + 1):
            c = text.char_at(q)
            diag = 0
            for j in range(1, w + 1):
                keep = row[j]
                if c == window[j - 1]:
                    val = diag + 1
                else:
                    val = keep if keep >= row[j - 1] else row[j - 1]
                row[j] = val
                diag = keep
            if row[w] >= k:
                return q
    return INF
