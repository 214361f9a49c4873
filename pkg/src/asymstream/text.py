"""Asymmetric streaming data model.

The offline string supports counted random access, the online string is
delivered once, in order.  All public positions are 1-based; half-open
intervals ``[l, r)`` are the canonical internal form.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sized
from contextlib import contextmanager
from dataclasses import dataclass
from itertools import chain, repeat

CODE_BITS = 32
MAX_CODE = (1 << CODE_BITS) - 1

# The top three codes are reserved for padding sentinels.
PAD_SAME = MAX_CODE
PAD_DISTINCT_OFFLINE = MAX_CODE - 1
PAD_DISTINCT_ONLINE = MAX_CODE - 2
FIRST_RESERVED = PAD_DISTINCT_ONLINE

INF = math.inf


class AsdError(Exception):
    """Base class for library errors."""


class ModelViolationError(AsdError):
    """The input breaks the asymmetric streaming model (e.g. unequal lengths)."""


class SinglePassError(ModelViolationError):
    """An online position was requested a second time."""


class TractabilityError(ModelViolationError):
    """An instance exceeds a runtime guard."""


class ConfigError(AsdError, ValueError):
    """A parameter is outside its admissible range."""


class _End:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "END"

    def __bool__(self) -> bool:
        return False


END = _End()


def as_symbols(data) -> list[int]:
    """Convert ``str``/``bytes``/int sequences to a list of symbol codes."""
    if isinstance(data, str):
        codes = [ord(ch) for ch in data]
    elif isinstance(data, (bytes, bytearray, memoryview)):
        codes = list(bytes(data))
    else:
        codes = [int(c) for c in data]
    for c in codes:
        check_user_code(c)
    return codes


def check_user_code(code: int) -> int:
    if code < 0 or code >= FIRST_RESERVED:
        raise ValueError(f"symbol code {code} outside the user alphabet [0, {FIRST_RESERVED})")
    return code


@dataclass(frozen=True)
class SubstringRef:
    """Half-open interval ``[l, r_exclusive)`` of the offline string."""

    l: int
    r_exclusive: int

    @classmethod
    def closed(cls, l: int, r: int) -> "SubstringRef":
        return cls(l, r + 1)

    def __len__(self) -> int:
        return self.r_exclusive - self.l

    def check(self, n: int) -> "SubstringRef":
        if not 1 <= self.l <= self.r_exclusive <= n + 1:
            raise IndexError(f"invalid substring [{self.l}, {self.r_exclusive}) for n={n}")
        return self


class MemoryMeter:
    """Logical memory accounting in units of one stored symbol or integer.

    Three categories are tracked: ``stream_buffer`` (buffered online
    symbols), ``frontier_state`` (algorithm state carried between windows or
    recursion levels) and ``scratch_offline`` (temporary DP rows).
    """

    CATEGORIES = ("stream_buffer", "frontier_state", "scratch_offline")

    def __init__(self) -> None:
        self.current = dict.fromkeys(self.CATEGORIES, 0)
        self.peak = dict.fromkeys(self.CATEGORIES, 0)
        self._combined_peak = 0

    def alloc(self, category: str, units: int) -> None:
        if units < 0:
            raise ValueError("units must be non-negative")
        self.current[category] += units
        if self.current[category] > self.peak[category]:
            self.peak[category] = self.current[category]
        combined = self.current["stream_buffer"] + self.current["frontier_state"]
        if combined > self._combined_peak:
            self._combined_peak = combined

    def free(self, category: str, units: int) -> None:
        if units > self.current[category]:
            raise ValueError(f"freeing {units} units from {category} holding {self.current[category]}")
        self.current[category] -= units

    @contextmanager
    def hold(self, category: str, units: int):
        self.alloc(category, units)
        try:
            yield
        finally:
            self.free(category, units)

    @property
    def streaming_peak(self) -> int:
        """Peak of ``stream_buffer + frontier_state`` held simultaneously."""
        return self._combined_peak

    def snapshot(self) -> dict[str, int]:
        return dict(self.peak)


def ensure_meter(meter: MemoryMeter | None) -> MemoryMeter:
    return meter if meter is not None else MemoryMeter()


class OfflineText:
    """Random-access offline string whose reads are counted."""

    __slots__ = ("_symbols", "n", "query_count")

    def __init__(self, symbols) -> None:
        self._symbols = tuple(as_symbols(symbols))
        self.n = len(self._symbols)
        self.query_count = 0

    @classmethod
    def _trusted(cls, symbols: tuple[int, ...]) -> "OfflineText":
        text = cls.__new__(cls)
        text._symbols = symbols
        text.n = len(symbols)
        text.query_count = 0
        return text

    def char_at(self, i: int) -> int:
        """Return ``s̄[i]`` (1-based) and count the query."""
        if not 1 <= i <= self.n:
            raise IndexError(f"offline index {i} out of range [1, {self.n}]")
        self.query_count += 1
        return self._symbols[i - 1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"OfflineText(n={self.n}, queries={self.query_count})"


class OnlineStream:
    """Strictly single-pass, in-order symbol source.

    ``length`` is the declared length.  If the underlying source yields a
    different number of symbols the mismatch is reported as a
    :class:`ModelViolationError` when it is detected.
    """

    def __init__(self, source: Iterable[int], length: int | None = None, *, record: bool = False) -> None:
        if length is None:
            if not isinstance(source, Sized):
                raise ValueError("length is required for unsized sources")
            length = len(source)  # type: ignore[arg-type]
        self.length = length
        self.cursor = 1
        self.delivered = 0
        self._source: Iterator[int] = iter(source)
        self._finished = False
        self.log: list[int] | None = [] if record else None

    def next(self):
        """Return the symbol at the cursor and advance, or ``END``."""
        if self.cursor > self.length:
            if not self._finished:
                self._finished = True
                extra = next(self._source, END)
                if extra is not END:
                    raise ModelViolationError(
                        f"online stream longer than its declared length {self.length}")
            return END
        sym = next(self._source, END)
        if sym is END:
            raise ModelViolationError(
                f"online stream ended after {self.cursor - 1} of {self.length} symbols")
        if self.log is not None:
            self.log.append(self.cursor)
        self.cursor += 1
        self.delivered += 1
        return sym

    def read(self, k: int) -> list[int]:
        """Deliver up to ``k`` further symbols."""
        out = []
        for _ in range(k):
            sym = self.next()
            if sym is END:
                break
            out.append(sym)
        return out

    def rewind(self, position: int = 1) -> None:
        """Move the cursor back; any move over consumed positions is rejected."""
        if position < self.cursor:
            raise SinglePassError(
                f"position {position} was already delivered (cursor at {self.cursor})")

    def finish(self) -> None:
        """Assert the whole stream was consumed and nothing trails it."""
        if self.cursor <= self.length:
            raise ModelViolationError(
                f"stream consumed {self.cursor - 1} of {self.length} symbols")
        self.next()

    def __iter__(self) -> Iterator[int]:
        while True:
            sym = self.next()
            if sym is END:
                return
            yield sym


def read_window(stream: OnlineStream, w: int, meter: MemoryMeter) -> list[int]:
    """Buffer the next ``w`` online symbols, metering them as stream buffer."""
    meter.alloc("stream_buffer", w)
    window = stream.read(w)
    if len(window) != w:
        meter.free("stream_buffer", w)
        raise ModelViolationError(f"expected a window of {w} symbols, got {len(window)}")
    return window


def padded_length(n: int, block: int) -> int:
    return block * (-(-n // block))


def pad_pair(offline: OfflineText, online, mode: str, block: int,
             online_length: int | None = None, *, record: bool = False):
    """Pad both strings with sentinels up to a multiple of ``block``.

    ``ed`` mode appends ``PAD_SAME`` to both sides, which preserves edit
    distance; ``lcs`` mode appends distinct sentinels on each side, which
    preserves LCS length.  ``online`` may be a sequence, any iterable (with
    ``online_length`` or implicitly the offline length), or an unconsumed
    :class:`OnlineStream`.

    Returns ``(padded_offline, padded_stream, original_n)``.
    """
    if mode not in ("ed", "lcs"):
        raise ValueError(f"unknown padding mode {mode!r}")
    if block < 1:
        raise ValueError("block must be >= 1")
    n = offline.n
    if isinstance(online, OnlineStream):
        if online.cursor != 1:
            raise SinglePassError("cannot pad a partially consumed stream")
        m = online.length
        source: Iterable[int] = online
    elif isinstance(online, Sized):
        m = len(online)
        source = online
    else:
        m = n if online_length is None else online_length
        source = online
    if m != n:
        raise ModelViolationError(f"online length {m} differs from offline length {n}")
    big_n = padded_length(n, block)
    extra = big_n - n
    if mode == "ed":
        off_pad, on_pad = PAD_SAME, PAD_SAME
    else:
        off_pad, on_pad = PAD_DISTINCT_OFFLINE, PAD_DISTINCT_ONLINE
    padded_offline = OfflineText._trusted(offline._symbols + (off_pad,) * extra)
    padded_online = OnlineStream(chain(source, repeat(on_pad, extra)), big_n, record=record)
    return padded_offline, padded_online, n


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


ALPHABETS = ("bytes", "int")


def iter_file_symbols(path, alphabet: str = "bytes", chunk: int = 1 << 16) -> Iterator[int]:
    """Yield the symbols of a file lazily, reading it once front to back.

    ``bytes``: one symbol per byte.  ``int``: ASCII whitespace-separated
    unsigned decimal integers.
    """
    if alphabet not in ALPHABETS:
        raise ValueError(f"unknown alphabet mode {alphabet!r}")
    with open(path, "rb") as fh:
        if alphabet == "bytes":
            while block := fh.read(chunk):
                yield from block
            return
        tail = b""
        while block := fh.read(chunk):
            parts = (tail + block).split()
            # A token touching the chunk end may continue in the next chunk.
            tail = parts.pop() if parts and not block[-1:].isspace() else b""
            for tok in parts:
                yield _parse_code(tok)
        if tail:
            yield _parse_code(tail)


def _parse_code(tok: bytes) -> int:
    if not tok.isdigit():
        raise ValueError(f"not an unsigned decimal integer: {tok[:32]!r}")
    return check_user_code(int(tok))


def read_file_symbols(path, alphabet: str = "bytes") -> list[int]:
    return list(iter_file_symbols(path, alphabet))
