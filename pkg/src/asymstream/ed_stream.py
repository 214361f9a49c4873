"""Single-pass (1 + eps)-approximate edit distance via candidate intervals.

For a distance guess ``d`` every window of the online string may only map
to an offline interval ending on a ``kappa``-spaced grid inside a band of
``+-2d`` around the window's own end.  A sparse frontier ``end -> cost``
keeps the best window-compatible cost for each candidate end.  A ladder of
geometric guesses runs in parallel off one pass of the stream.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .closest import as_fraction
from .text import (
    INF,
    ConfigError,
    MemoryMeter,
    ModelViolationError,
    OfflineText,
    OnlineStream,
    ceil_sqrt,
    ensure_meter,
    pad_pair,
    read_window,
)

_BIG = 1 << 40


def kappa_for(d: int, epsilon, n: int) -> int:
    """Grid pitch ``max(1, floor(d * eps / sqrt(n)))``, computed exactly."""
    y = (d * as_fraction(epsilon)) ** 2 / n
    return max(1, math.isqrt(y.numerator // y.denominator))


def guess_ladder(epsilon, n: int) -> list[int]:
    """Distinct guesses ``min(floor((1+eps)**j), n)`` for ``j = 0, 1, ...``."""
    if n < 1:
        return []
    base = 1 + as_fraction(epsilon)
    x = Fraction(1)
    ladder = [1]
    while ladder[-1] < n:
        x *= base
        g = min(x.numerator // x.denominator, n)
        if g != ladder[-1]:
            ladder.append(g)
    return ladder


@dataclass(frozen=True)
class WindowBand:
    """Window ``i`` of size ``w`` and its admissible end band for guess ``d``."""

    i: int
    w: int
    d: int
    n: int

    @property
    def alpha(self) -> int:
        return (self.i - 1) * self.w + 1

    @property
    def beta(self) -> int:
        return self.i * self.w

    @property
    def raw(self) -> tuple[int, int]:
        return self.beta + 1 - 2 * self.d, self.beta + 1 + 2 * self.d

    @property
    def band(self) -> tuple[int, int]:
        lo, hi = self.raw
        return max(lo, 1), min(hi, self.n + 1)


def candidate_endpoints(band: WindowBand, kappa: int) -> list[int]:
    """Candidate interval ends: ``1`` if it lies in the band, plus multiples of ``kappa``."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    lo, hi = band.band
    if lo > hi:
        return []
    first = -(-lo // kappa) * kappa
    ends = list(range(first, hi + 1, kappa))
    if lo == 1 and (not ends or ends[0] != 1):
        ends.insert(0, 1)
    return ends


@dataclass
class GuessInstance:
    d: int
    kappa: int
    frontier: dict[int, int] = field(default_factory=lambda: {1: 0})


def advance_frontier(g: GuessInstance, window: Sequence[int], band: WindowBand,
                     text: OfflineText, meter: MemoryMeter | None = None) -> GuessInstance:
    """Map one more window onto every candidate interval.

    ``T[r] = min_{l in D, l <= r} D[l] + ed(s̄[l, r), window)``.  All ``l``
    share one scan: the DP column over the window is seeded with ``D[l]``
    when the scan reaches ``l`` and read out at each candidate ``r``.
    """
    meter = ensure_meter(meter)
    D = g.frontier
    T: dict[int, int] = {}
    if D:
        starts = sorted(D)
        ends = [r for r in candidate_endpoints(band, g.kappa) if r >= starts[0]]
    else:
        starts, ends = [], []
    if ends:
        w = len(window)
        with meter.hold("scratch_offline", 2 * (w + 1)):
            win = np.asarray(window, dtype=np.int64)
            ramp = np.arange(w + 1, dtype=np.int64)
            col = np.full(w + 1, _BIG, dtype=np.int64)
            nxt = np.empty(w + 1, dtype=np.int64)
            si = ei = 0
            for x in range(starts[0], ends[-1] + 1):
                if x > starts[0]:
                    c = text.char_at(x - 1)
                    nxt[0] = col[0] + 1
                    np.minimum(col[1:] + 1, col[:-1] + (win != c), out=nxt[1:])
                    nxt -= ramp
                    np.minimum.accumulate(nxt, out=col)
                    col += ramp
                if si < len(starts) and starts[si] == x:
                    np.minimum(col, D[x] + ramp, out=col)
                    si += 1
                if ends[ei] == x:
                    cost = int(col[w])
                    if cost < _BIG // 2:
                        T[x] = cost
                        meter.alloc("frontier_state", 2)
                    ei += 1
    meter.free("frontier_state", 2 * len(D))
    return GuessInstance(g.d, g.kappa, T)


def finalize(g: GuessInstance, n: int):
    """``min_r D[r] + (n - r + 1)``: the unmapped offline suffix is deleted."""
    if not g.frontier:
        return INF
    return min(cost + (n - r + 1) for r, cost in g.frontier.items())


@dataclass
class EdEpsResult:
    estimate: int
    d: int
    values: dict[int, object]


def ed_eps_estimate(text: OfflineText, stream: OnlineStream, epsilon,
                    meter: MemoryMeter | None = None, *,
                    observer: Callable[[int, list[GuessInstance]], None] | None = None,
                    ) -> EdEpsResult:
    """(1 + 5 eps)-approximate edit distance of ed-mode padded inputs.

    Every guess on the ladder keeps its own frontier; each window is
    buffered once and handed to all of them before the next one is read.
    The result is the smallest final value over the ladder and the
    smallest guess attaining it.
    """
    meter = ensure_meter(meter)
    epsilon = as_fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    n = text.n
    if stream.length != n:
        raise ModelViolationError(f"online length {stream.length} differs from offline length {n}")
    if n == 0:
        stream.finish()
        return EdEpsResult(0, 0, {})
    w = ceil_sqrt(n)
    if n % w:
        raise ModelViolationError(f"length {n} is not a multiple of the window size {w}; pad first")
    instances = [GuessInstance(d, kappa_for(d, epsilon, n)) for d in guess_ladder(epsilon, n)]
    # Per instance: d, kappa and the initial entry D[1] = 0.
    fixed = 2 * len(instances)
    meter.alloc("frontier_state", fixed + 2 * len(instances))
    try:
        for i in range(1, n // w + 1):
            buf = read_window(stream, w, meter)
            try:
                instances = [advance_frontier(g, buf, WindowBand(i, w, g.d, n), text, meter)
                             for g in instances]
            finally:
                meter.free("stream_buffer", w)
            if observer is not None:
                observer(i, instances)
        stream.finish()
        values = {g.d: finalize(g, n) for g in instances}
    finally:
        meter.free("frontier_state", fixed + sum(2 * len(g.frontier) for g in instances))
    best_d = min(values, key=lambda d: (values[d], d))
    return EdEpsResult(values[best_d], best_d, values)


def ed_eps(offline, online, epsilon, meter: MemoryMeter | None = None) -> EdEpsResult:
    """Pad a raw pair and run :func:`ed_eps_estimate`."""
    text = offline if isinstance(offline, OfflineText) else OfflineText(offline)
    padded, stream, _ = pad_pair(text, online, "ed", ceil_sqrt(max(text.n, 1)))
    return ed_eps_estimate(padded, stream, epsilon, meter)
