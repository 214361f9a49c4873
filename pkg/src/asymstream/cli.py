"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 model violation
(unequal lengths, single-pass breach, tractability guard).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness
from .closest import as_fraction
from .text import (
    ALPHABETS,
    AsdError,
    ConfigError,
    ModelViolationError,
    OfflineText,
    iter_file_symbols,
    read_file_symbols,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _delta(raw: str):
    value = as_fraction(raw)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"delta must lie in (0, 1], got {raw}")
    return value


def _epsilon(raw: str):
    value = as_fraction(raw)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 1), got {raw}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="asymstream", description="Asymmetric streaming string distances.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pair(name: str, help_: str):
        p = sub.add_parser(name, help=help_)
        p.add_argument("offline", help="offline (random access) file")
        p.add_argument("online", help="online (streamed) file")
        p.add_argument("--alphabet", choices=ALPHABETS, default="bytes")
        p.add_argument("--with-oracle", action="store_true",
                       help="re-read the online file and add the exact value (outside the streaming model)")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        return p

    p = pair("exact", "exact edit distance or LCS")
    p.add_argument("--metric", choices=("ed", "lcs"), required=True)
    for name, help_ in (("closest", "closest substring of the offline text"),
                        ("ed-const", "constant-factor edit distance")):
        p = pair(name, help_)
        p.add_argument("--delta", type=_delta, required=True)
        p.add_argument("--mapping-search", choices=("enumerate", "dp"), default="enumerate")
        p.add_argument("--fast", action="store_true", help="same as --mapping-search dp")
        p.add_argument("--force", action="store_true", help="skip the enumeration size guard")
    p = pair("lcs-eps", "(1 - eps)-approximate LCS")
    p.add_argument("--epsilon", type=_epsilon, required=True)
    p = pair("ed-eps", "(1 + 5 eps)-approximate edit distance")
    p.add_argument("--epsilon", type=_epsilon, required=True)

    p = sub.add_parser("bench", help="run harness suites from a JSON config")
    p.add_argument("config", help="JSON object, or a list of them, with run_suite arguments")
    p.add_argument("-o", "--output")
    return parser


def _online_length(path: str, alphabet: str, fallback: int) -> int:
    # Byte files know their length without being read; integer files are
    # checked against the offline length when the stream runs out.
    if alphabet == "bytes":
        return os.path.getsize(path)
    return fallback


def _run_pair(args) -> dict:
    offline = OfflineText(read_file_symbols(args.offline, args.alphabet))
    length = _online_length(args.online, args.alphabet, offline.n)
    if length != offline.n:
        raise ModelViolationError(f"online length {length} differs from offline length {offline.n}")
    if args.command == "exact":
        algo, param = f"exact-{args.metric}", None
    else:
        algo = args.command
        param = args.epsilon if algo in ("lcs-eps", "ed-eps") else args.delta
    search = "enumerate"
    if algo in ("closest", "ed-const"):
        search = "dp" if args.fast else args.mapping_search
    source = iter_file_symbols(args.online, args.alphabet)
    report = harness.run_algorithm(algo, offline, source, param, search=search,
                                   force=getattr(args, "force", False), online_length=length)
    if args.with_oracle:
        online = read_file_symbols(args.online, args.alphabet)
        report.oracle = harness.compute_oracle(algo, offline._symbols, online)
        if report.oracle > 0:
            report.ratio = report.estimate / report.oracle
        report.extra["oracle_source"] = "second read of the online file"
    return report.to_dict()


_SUITE_KEYS = {"algo", "params", "sizes", "trials", "seed", "alphabet", "edits", "search",
               "force", "oracle_threshold", "jobs"}


def _run_bench(path: str) -> list[dict]:
    with open(path) as fh:
        config = json.load(fh)
    suites = config if isinstance(config, list) else [config]
    out = []
    for suite in suites:
        if not isinstance(suite, dict):
            raise ConfigError("bench config entries must be JSON objects")
        unknown = set(suite) - _SUITE_KEYS
        if unknown:
            raise ConfigError(f"unknown bench keys: {sorted(unknown)}")
        missing = {"algo", "sizes", "trials"} - set(suite)
        if missing:
            raise ConfigError(f"missing bench keys: {sorted(missing)}")
        kwargs = dict(suite)
        algo = kwargs.pop("algo")
        params = kwargs.pop("params", None)
        sizes = kwargs.pop("sizes")
        trials = kwargs.pop("trials")
        try:
            reports = harness.run_suite(algo, params, sizes, trials, **kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        out.extend(r.to_dict() for r in reports)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "bench":
            lines = [json.dumps(r) for r in _run_bench(args.config)]
        else:
            lines = [json.dumps(_run_pair(args))]
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return 1
    except ModelViolationError as exc:
        print(f"model violation: {exc}", file=sys.stderr)
        return 2
    except (AsdError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
