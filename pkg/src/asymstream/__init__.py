"""Edit distance and LCS estimation in the asymmetric streaming model."""

from .closest import (
    RecursionConfig,
    closest_substring_stream,
    ed_const_bound,
    ed_const_estimate,
    enumerate_mappings,
    mapping_min_dp,
)
from .ed_stream import EdEpsResult, ed_eps, ed_eps_estimate
from .exact import (
    ClosestMatch,
    closest_substring_brute,
    closest_substring_exact,
    ed_bounded_space,
    ed_full,
    lcs_full,
    lcsp_scan,
)
from .harness import InstanceSpec, RunReport, SplitMix64, generate_instance, run_algorithm, run_suite
from .lcs_stream import lcs_eps, lcs_eps_estimate
from .text import (
    AsdError,
    ConfigError,
    MemoryMeter,
    ModelViolationError,
    OfflineText,
    OnlineStream,
    SinglePassError,
    SubstringRef,
    TractabilityError,
    pad_pair,
)

__all__ = [
    "AsdError", "ClosestMatch", "ConfigError", "EdEpsResult", "InstanceSpec", "MemoryMeter",
    "ModelViolationError", "OfflineText", "OnlineStream", "RecursionConfig", "RunReport",
    "SinglePassError", "SplitMix64", "SubstringRef", "TractabilityError",
    "closest_substring_brute", "closest_substring_exact", "closest_substring_stream",
    "ed_bounded_space", "ed_const_bound", "ed_const_estimate", "ed_eps", "ed_eps_estimate",
    "ed_full", "enumerate_mappings", "generate_instance", "lcs_eps", "lcs_eps_estimate",
    "lcs_full", "lcsp_scan", "mapping_min_dp", "pad_pair", "run_algorithm", "run_suite",
]
