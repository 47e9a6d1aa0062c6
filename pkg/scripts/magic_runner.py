"""Command line entry point for magic biunitary checks and Catalan-moment runs."""

import argparse
import os
import sys
import time
from datetime import datetime

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from logic.config_loader import COMMANDS, CONSTRUCTIONS, FORMATS, build_run_config, load_config
from logic.reporter import ArtifactWriter
from runners.commands import EXIT_USAGE, run
from utils import VERSION, format_run
from utils.logger import debug_log


class UsageParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default="config/config.yaml", help="path to the config YAML file to use")
    parser.add_argument(
        "--debug",
        nargs="?",
        const="high",
        choices=["low", "medium", "high"],
        help="set debug level",
    )
    parser.add_argument("--s", type=int, help="Clifford rank s (n = 2^s)")
    parser.add_argument("--n", type=int, help="size of the permutation construction")
    parser.add_argument("--construction", choices=CONSTRUCTIONS, help="construction to verify")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--k-max", dest="k_max", type=int, help="highest moment degree")
    parser.add_argument("--seed", type=int, help="64-bit sampling seed")
    parser.add_argument("--tolerance", type=float, help="verification tolerance")
    parser.add_argument("--bins", type=int, help="histogram bin count")
    parser.add_argument("--glue", type=int, help="append an identity block of this size")
    parser.add_argument("--workers", help="worker threads for Monte Carlo blocks, or 'auto'")
    parser.add_argument("--output", help="artifact path; stdout when omitted")
    parser.add_argument("--format", choices=FORMATS, help="artifact format")
    parser.add_argument(
        "--progress",
        action="store_const",
        const=True,
        help="show progress bars on stderr",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(prog="magic_runner", description="Magic biunitary and Catalan-moment runs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)
    helps = {
        "verify": "build a construction and check magic biunitarity",
        "character": "character of one sampled Clifford construction",
        "moments": "φ-moments of the character against Catalan numbers",
        "spectrum": "histogram of the character spectrum",
        "fusion": "SO(3) fusion-ring Poincaré coefficients",
        "report": "full Catalan-moment hypothesis report",
    }
    for command in COMMANDS:
        _add_run_flags(sub.add_parser(command, help=helps[command]))
    return parser


def main(argv=None) -> int:
    """Parse *argv*, run one command and return its exit status."""
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config)
    except (FileNotFoundError, KeyError) as exc:
        print(f"magic_runner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.debug:
        config["debug"] = args.debug

    overrides = {
        "s": args.s,
        "n": args.n,
        "construction": args.construction,
        "samples": args.samples,
        "k_max": args.k_max,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "bins": args.bins,
        "glue": args.glue,
        "workers": args.workers,
        "output": args.output,
        "format": args.format,
        "progress": args.progress,
    }
    try:
        rc = build_run_config(args.command, overrides, config)
    except ValueError as exc:
        print(f"magic_runner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    label = format_run(rc.command, rc.as_dict())
    run_start = time.perf_counter()
    debug_log(f"Run {label} started at {datetime.now().isoformat()}", config, level="low")
    try:
        code, artifacts = run(rc, config)
    except ValueError as exc:
        debug_log(f"Run {label} rejected: {exc}", config, level="low")
        print(f"magic_runner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - runtime failure
        debug_log(f"Run {label} failed: {exc}", config, level="low")
        raise

    with ArtifactWriter(rc.output, config) as writer:
        for kind, item in artifacts:
            if kind == "csv":
                writer.write_csv(item)
            else:
                writer.write_json(item)

    debug_log(
        f"Run {label} finished with status {code}, elapsed {time.perf_counter() - run_start:.2f}s",
        config,
        level="low",
    )
    return code


if __name__ == "__main__":
    sys.exit(main())
