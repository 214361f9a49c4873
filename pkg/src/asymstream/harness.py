"""Seeded instance generation, metered runs and JSON-lines reports.

Instances are drawn from SplitMix64 so they can be regenerated bit for bit
in any language: ``below(bound)`` takes 64-bit outputs, rejects values
``>= (2**64 // bound) * bound`` and returns the remainder modulo ``bound``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .closest import (
    RecursionConfig,
    as_fraction,
    check_tractable,
    closest_ratio_bound,
    closest_substring_stream,
    ed_const_bound,
    ed_const_estimate,
)
from .ed_stream import ed_eps_estimate
from .exact import closest_substring_exact, ed_full, lcs_full
from .lcs_stream import lcs_eps_estimate
from .text import AsdError, MemoryMeter, OfflineText, OnlineStream, ceil_sqrt, pad_pair

PRNG_NAME = "splitmix64"
ORACLE_THRESHOLD = 256
ALGORITHMS = ("exact-ed", "exact-lcs", "closest", "ed-const", "lcs-eps", "ed-eps")
_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014) 64-bit generator."""

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = ((1 << 64) // bound) * bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    alphabet_size: int = 4
    edits: int = 0
    seed: int = 0


def generate_instance(spec: InstanceSpec) -> tuple[list[int], list[int]]:
    """Random offline string and an edited copy of the same length.

    Substitutions cost one unit of the edit budget; an insertion followed by
    trimming the tail, or a deletion followed by padding the tail, costs two.
    Hence ``ed(offline, online) <= spec.edits``.
    """
    if spec.alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    if not 0 <= spec.edits <= spec.n:
        raise ValueError("edits must lie in [0, n]")
    rng = SplitMix64(spec.seed)
    n, sigma = spec.n, spec.alphabet_size
    offline = [rng.below(sigma) for _ in range(n)]
    online = list(offline)
    budget = spec.edits
    while budget > 0:
        op = rng.below(3) if budget >= 2 else 0
        if op == 0:
            online[rng.below(n)] = rng.below(sigma)
        elif op == 1:
            online.insert(rng.below(n + 1), rng.below(sigma))
            online.pop()
        else:
            online.pop(rng.below(n))
            online.append(rng.below(sigma))
        budget -= 1 if op == 0 else 2
    return offline, online


@dataclass
class RunReport:
    algo: str
    n: int
    n_padded: int
    delta: float | None
    epsilon: float | None
    estimate: int | None
    oracle: int | None
    ratio: float | None
    bound: float | None
    mem_stream: int
    mem_frontier: int
    mem_scratch: int
    offline_queries: int
    wall_ms: float
    seed: int | None
    prng: str = PRNG_NAME
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(out.pop("extra"))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def satisfied(self) -> bool | None:
        """Whether the run meets its proven sandwich; ``None`` without an oracle."""
        if self.oracle is None or self.estimate is None:
            return None
        est, opt = self.estimate, self.oracle
        if self.algo.startswith("exact"):
            return est == opt
        if self.algo == "lcs-eps":
            return self.bound * opt <= est <= opt
        return opt <= est <= self.bound * opt


def proven_bound(algo: str, n: int, param) -> float:
    if algo.startswith("exact"):
        return 1
    if algo == "closest":
        return closest_ratio_bound(n, n, param) if n >= 2 else 1
    if algo == "ed-const":
        return ed_const_bound(param)
    if algo == "lcs-eps":
        return float(1 - as_fraction(param))
    if algo == "ed-eps":
        return float(1 + 5 * as_fraction(param))
    raise ValueError(f"unknown algorithm {algo!r}")


def compute_oracle(algo: str, offline, online) -> int:
    if algo in ("exact-lcs", "lcs-eps"):
        return lcs_full(offline, online)
    if algo == "closest":
        return closest_substring_exact(OfflineText(offline), list(online)).d
    return ed_full(offline, online)


def run_algorithm(algo: str, offline, online, param=None, *, search: str = "enumerate",
                  force: bool = False, oracle=None, seed: int | None = None,
                  online_length: int | None = None, record: bool = False) -> RunReport:
    """Run one algorithm with metering and return its report.

    ``online`` is consumed as a stream (any iterable).  ``oracle`` may be a
    precomputed exact value to place in the report.
    """
    text = offline if isinstance(offline, OfflineText) else OfflineText(offline)
    n = text.n
    meter = MemoryMeter()
    delta = epsilon = None
    extra: dict = {}
    t0 = time.perf_counter()
    label = algo
    if algo in ("exact-ed", "exact-lcs"):
        symbols = text._symbols
        stream = OnlineStream(online, n if online_length is None else online_length, record=record)
        other = list(stream)
        estimate = (ed_full if algo == "exact-ed" else lcs_full)(symbols, other)
        n_padded, used_text = n, text
    elif algo in ("closest", "ed-const"):
        delta = as_fraction(param)
        padded, stream, _ = pad_pair(text, online, "ed", 1, online_length, record=record)
        used_text, n_padded = padded, padded.n
        if algo == "closest":
            cfg = RecursionConfig.for_length(n, delta)
            check_tractable(cfg, n, search, force)
            match = closest_substring_stream(padded, stream, n, cfg, meter, search=search)
            stream.finish()
            estimate = match.d
        else:
            estimate, match = ed_const_estimate(padded, stream, delta, meter,
                                                search=search, force=force)
        extra = {"l": match.l, "r": match.r}
        if search == "dp":
            label = algo + "+dp"
    elif algo in ("lcs-eps", "ed-eps"):
        epsilon = as_fraction(param)
        mode = "lcs" if algo == "lcs-eps" else "ed"
        padded, stream, _ = pad_pair(text, online, mode, ceil_sqrt(max(n, 1)), online_length,
                                     record=record)
        used_text, n_padded = padded, padded.n
        if algo == "lcs-eps":
            estimate = lcs_eps_estimate(padded, stream, epsilon, meter)
        else:
            result = ed_eps_estimate(padded, stream, epsilon, meter)
            estimate = result.estimate
            extra = {"d": result.d}
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    wall_ms = (time.perf_counter() - t0) * 1000.0
    if record:
        extra["delivered"] = stream.log
    bound = proven_bound(algo, n, delta if delta is not None else epsilon)
    ratio = None
    if oracle is not None and oracle > 0:
        ratio = estimate / oracle
    peaks = meter.snapshot()
    return RunReport(
        algo=label, n=n, n_padded=n_padded,
        delta=None if delta is None else float(delta),
        epsilon=None if epsilon is None else float(epsilon),
        estimate=estimate, oracle=oracle, ratio=ratio, bound=bound,
        mem_stream=peaks["stream_buffer"], mem_frontier=peaks["frontier_state"],
        mem_scratch=peaks["scratch_offline"], offline_queries=used_text.query_count,
        wall_ms=round(wall_ms, 3), seed=seed, extra=extra,
    )


@dataclass(frozen=True)
class _Task:
    algo: str
    n: int
    param: object
    spec: InstanceSpec
    search: str
    force: bool
    oracle_threshold: int


def _run_task(task: _Task) -> RunReport:
    offline, online = generate_instance(task.spec)
    oracle = None
    if task.n <= task.oracle_threshold:
        oracle = compute_oracle(task.algo, offline, online)
    try:
        return run_algorithm(task.algo, offline, iter(online), task.param, search=task.search,
                             force=task.force, oracle=oracle, seed=task.spec.seed,
                             online_length=len(online))
    except AsdError as exc:
        param = as_fraction(task.param) if task.param is not None else None
        is_delta = task.algo in ("closest", "ed-const")
        return RunReport(
            algo=task.algo, n=task.n, n_padded=task.n,
            delta=float(param) if is_delta and param is not None else None,
            epsilon=float(param) if not is_delta and param is not None else None,
            estimate=None, oracle=oracle, ratio=None, bound=None,
            mem_stream=0, mem_frontier=0, mem_scratch=0, offline_queries=0, wall_ms=0.0,
            seed=task.spec.seed, extra={"error": f"{type(exc).__name__}: {exc}"},
        )


def _edits_for(edits, trial: int, n: int) -> int:
    if isinstance(edits, (list, tuple)):
        value = edits[trial % len(edits)]
    elif isinstance(edits, float) and edits < 1:
        value = int(edits * n)
    else:
        value = int(edits)
    return min(value, n)


def run_suite(algo: str, params, sizes, trials: int, seed: int = 0, *, alphabet: int = 4,
              edits=0, search: str = "enumerate", force: bool = False,
              oracle_threshold: int = ORACLE_THRESHOLD, jobs: int = 1) -> list[RunReport]:
    """Run ``algo`` over every ``(size, param, trial)`` combination.

    Instance seeds are drawn in that key order from one SplitMix64 stream,
    so reports are reproducible and ordered regardless of ``jobs``.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if not isinstance(params, (list, tuple)):
        params = [params]
    master = SplitMix64(seed)
    tasks = []
    for n in sizes:
        for param in params:
            for trial in range(trials):
                spec = InstanceSpec(n, alphabet, _edits_for(edits, trial, n), master.next_u64())
                tasks.append(_Task(algo, n, param, spec, search, force, oracle_threshold))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


def memory_by_size(reports) -> dict[int, int]:
    """Largest ``mem_stream + mem_frontier`` per original size."""
    out: dict[int, int] = {}
    for r in reports:
        if r.estimate is None:
            continue
        out[r.n] = max(out.get(r.n, 0), r.mem_stream + r.mem_frontier)
    return out


def growth_factors(values_by_size: dict[int, int]) -> list[float]:
    sizes = sorted(values_by_size)
    return [values_by_size[b] / values_by_size[a] for a, b in zip(sizes, sizes[1:])]

