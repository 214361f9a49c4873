"""Single-pass (1 - eps)-approximate LCS over a geometric grid of targets.

The online string is read in windows of ``w`` symbols.  After window ``i``
the frontier ``D[k]`` holds an offline position reachable by a common
subsequence of length at least ``floor((1+eps*)**k)`` with the online
prefix read so far.  Each window extends the frontier by splitting a
target into a part matched before the window and a part matched inside it.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import lcsp_scan
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
from .closest import as_fraction

_NEG = -(1 << 40)


def pow_floor(eps_star, k: int, cap: int | None = None) -> int:
    """``floor((1 + eps_star) ** k)`` in exact rational arithmetic.

    With ``cap`` given, the result is clamped to ``cap``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    base = 1 + as_fraction(eps_star)
    x = Fraction(1)
    for _ in range(k):
        x *= base
        if cap is not None and x >= cap:
            return cap
    return x.numerator // x.denominator


def target_grid(eps_star, n: int) -> list[int]:
    """Targets ``floor((1+eps*)**k)`` for ``k = 0 .. floor(log_{1+eps*} n)``."""
    eps_star = as_fraction(eps_star)
    if eps_star <= 0:
        raise ConfigError("eps_star must be positive")
    base = 1 + eps_star
    x = Fraction(1)
    targets = [1]
    while True:
        x *= base
        if x > n:
            return targets
        targets.append(x.numerator // x.denominator)


@dataclass
class LcsFrontier:
    eps_star: Fraction
    targets: list[int]
    D: list = field(default_factory=list)

    @classmethod
    def empty(cls, eps_star, n: int) -> "LcsFrontier":
        targets = target_grid(eps_star, n)
        return cls(as_fraction(eps_star), targets, [INF] * len(targets))

    @property
    def K(self) -> int:
        return len(self.targets) - 1

    def value(self) -> int:
        """Largest target whose frontier position is finite, else 0."""
        for k in range(self.K, -1, -1):
            if self.D[k] != INF:
                return self.targets[k]
        return 0


def update_frontier(frontier: LcsFrontier, window: Sequence[int], text: OfflineText,
                    meter: MemoryMeter | None = None) -> LcsFrontier:
    """Fold one buffered window into the frontier.

    For every target ``t_k`` the new position is the minimum, over a split
    ``t_k = t_{k1} + k2``, of the first offline position reachable by
    matching ``k2`` window symbols after ``D[k1]`` (or ``t_k`` symbols from
    the start).  All starts are scanned together: each start ``D[k1] + 1``
    enters one LCS column with credit ``t_{k1}``, and the column's last
    entry gives the longest total reachable at each offline position.
    """
    meter = ensure_meter(meter)
    n, w = text.n, len(window)
    targets, D = frontier.targets, frontier.D
    size = len(targets)
    T = [INF] * size
    meter.alloc("frontier_state", size)
    with meter.hold("scratch_offline", w + 1):
        win = np.asarray(window, dtype=np.int64)
        col = np.full(w + 1, _NEG, dtype=np.int64)
        g = np.empty(w + 1, dtype=np.int64)
        ptr = 0
        pending = 0
        top = targets[-1]
        for q in range(1, n + 1):
            credit = 0 if q == 1 else _NEG
            while ptr < size and D[ptr] != INF and D[ptr] + 1 <= q:
                if targets[ptr] > credit:
                    credit = targets[ptr]
                ptr += 1
            if credit > _NEG:
                np.maximum(col, credit, out=col)
            if col[0] == _NEG:
                continue
            c = text.char_at(q)
            g[0] = col[0]
            np.maximum(col[1:], col[:-1] + (win == c), out=g[1:])
            np.maximum.accumulate(g, out=col)
            reach = int(col[w])
            while pending < size and targets[pending] <= reach:
                T[pending] = q
                pending += 1
            if reach >= top:
                break
    # Splits that put nothing inside the window keep the old position.
    for k in range(size):
        if D[k] != INF and D[k] < T[k]:
            T[k] = D[k]
    meter.free("frontier_state", size)
    return LcsFrontier(frontier.eps_star, targets, T)


def update_frontier_naive(frontier: LcsFrontier, window: Sequence[int], text: OfflineText,
                          meter: MemoryMeter | None = None) -> LcsFrontier:
    """Reference update: one ``lcsp_scan`` per ``(k, k1)`` pair."""
    targets, D = frontier.targets, frontier.D
    T = []
    for k, tk in enumerate(targets):
        best = lcsp_scan(text, 1, window, tk, meter)
        for k1, tk1 in enumerate(targets):
            if D[k1] == INF or tk1 > tk:
                continue
            q = lcsp_scan(text, D[k1] + 1, window, tk - tk1, meter)
            if q < best:
                best = q
        T.append(best)
    return LcsFrontier(frontier.eps_star, targets, T)


def run_lcs_stream(text: OfflineText, stream: OnlineStream, eps_star, window: int,
                   meter: MemoryMeter | None = None, *,
                   observer: Callable[[int, LcsFrontier], None] | None = None,
                   naive: bool = False) -> LcsFrontier:
    """Process the whole stream in windows of ``window`` symbols."""
    meter = ensure_meter(meter)
    n = text.n
    if stream.length != n:
        raise ModelViolationError(f"online length {stream.length} differs from offline length {n}")
    if window < 1 or n % window:
        raise ModelViolationError(f"length {n} is not a multiple of the window size {window}; pad first")
    frontier = LcsFrontier.empty(eps_star, max(n, 1))
    size = len(frontier.targets)
    update = update_frontier_naive if naive else update_frontier
    meter.alloc("frontier_state", size + 2)
    try:
        for i in range(1, n // window + 1):
            buf = read_window(stream, window, meter)
            try:
                frontier = update(frontier, buf, text, meter)
            finally:
                meter.free("stream_buffer", window)
            if observer is not None:
                observer(i, frontier)
        stream.finish()
    finally:
        meter.free("frontier_state", size + 2)
    return frontier


def lcs_eps_estimate(text: OfflineText, stream: OnlineStream, epsilon,
                     meter: MemoryMeter | None = None, *, observer=None) -> int:
    """(1 - epsilon)-approximate LCS of lcs-mode padded inputs.

    Uses windows of ``w = ceil(sqrt(N))`` symbols and ``eps* = epsilon / w``.
    """
    epsilon = as_fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    n = text.n
    if n == 0:
        stream.finish()
        return 0
    w = ceil_sqrt(n)
    frontier = run_lcs_stream(text, stream, epsilon / w, w, meter, observer=observer)
    return frontier.value()


def lcs_eps(offline, online, epsilon, meter: MemoryMeter | None = None) -> int:
    """Pad a raw pair and run :func:`lcs_eps_estimate`."""
    text = offline if isinstance(offline, OfflineText) else OfflineText(offline)
    padded, stream, _ = pad_pair(text, online, "lcs", ceil_sqrt(max(text.n, 1)))
    return lcs_eps_estimate(padded, stream, epsilon, meter)
