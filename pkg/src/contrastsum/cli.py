"""Command line interface.

Subcommands:
    pairs     enumerate canonical agent pairs
    search    adaptive scenario search for every (pair, scenario)
    baseline  uniform-sampling N-first episodes for every (pair, scenario)
    bench     seeded policy benchmark; fails if lo < med < hi is violated
    replay    bit-exact replay verification of trajectory files
    render    turn a trajectory file into viewable frames

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 runtime fault.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import bench_agents, ordering_violation
from .config import load_config
from .core import enumerate_pairs
from .errors import ConfigurationError, InvalidInputError, VerificationError
from .orchestrate import run_all_pairs

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFICATION = 2
EXIT_RUNTIME = 3


def _add_config_args(p):
    p.add_argument("--config", required=True, help="path to the JSON run config")
    p.add_argument("--seed", type=int, default=None, help="override the run seed")
    p.add_argument("--out", default=None, help="override the output directory")
    p.add_argument("--scenario", default=None, help="restrict to one named scenario")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contrastsum")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pairs", help="enumerate canonical agent pairs")
    p.add_argument("--agents", required=True, help="comma separated agent ids")

    for name in ("search", "baseline"):
        p = sub.add_parser(name, help=f"run {name} for every (pair, scenario)")
        _add_config_args(p)

    p = sub.add_parser("bench", help="benchmark the shipped policies")
    _add_config_args(p)
    p.add_argument("--episodes", type=int, default=100)

    p = sub.add_parser("replay", help="verify trajectory files replay bit-exactly")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("render", help="render a trajectory file to frames")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.add_argument("--side-by-side", action="store_true")

    return parser


def _cmd_pairs(args) -> int:
    pairs = enumerate_pairs([a for a in args.agents.split(",") if a])
    for pair in pairs:
        print(f"{pair.first} {pair.second}")
    print(f"{len(pairs)} pairs")
    return EXIT_OK


def _cmd_run(args, mode: str) -> int:
    cfg = load_config(args.config, seed=args.seed, out=args.out, scenario=args.scenario)
    if len(cfg.agents) < 2:
        raise ConfigurationError("search modes need at least two agents")
    manifest = run_all_pairs(cfg, mode=mode)
    print(json.dumps(manifest, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = load_config(args.config, seed=args.seed, out=args.out, scenario=args.scenario)
    report = bench_agents(
        cfg.agents,
        cfg.scenarios,
        episodes=args.episodes,
        horizon=cfg.search.horizon,
        base_seed=cfg.search.seed,
    )
    print(json.dumps(report, indent=2, sort_keys=True))
    violation = ordering_violation(report)
    if violation:
        print(f"ORDERING VIOLATION: {violation}", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_replay(args) -> int:
    from .trajfile import replay

    all_passed = True
    for f in args.files:
        report = replay(f)
        print(report.summary_line())
        all_passed = all_passed and report.passed
    return EXIT_OK if all_passed else EXIT_VERIFICATION


def _cmd_render(args) -> int:
    from .render import render

    index = render(args.file, args.out, side_by_side=args.side_by_side)
    print(f"wrote {len(index['frames'])} frames to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "pairs":
            return _cmd_pairs(args)
        if args.command in ("search", "baseline"):
            return _cmd_run(args, mode="adaptive" if args.command == "search" else "baseline")
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "replay":
            return _cmd_replay(args)
        if args.command == "render":
            return _cmd_render(args)
        raise ConfigurationError(f"unknown command {args.command!r}")
    except (ConfigurationError, InvalidInputError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime fault: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
