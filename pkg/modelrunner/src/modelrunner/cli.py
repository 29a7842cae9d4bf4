"""Command line for running engines over an utterance manifest."""

from __future__ import annotations

import argparse
import sys

from .engines import EngineError
from .runner import ConfigError, load_engine_config, run_engines


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="modelrunner",
        description="Produce hypotheses/alignment/acoustics record files "
                    "from audio using configured engines.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run all configured engines")
    p.add_argument("--config", required=True, help="engine-config JSON file")
    p.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    try:
        config = load_engine_config(args.config)
        result = run_engines(config, args.out)
    except (ConfigError, EngineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for stage in sorted(result.records):
        print(f"{result.records[stage]} {stage} record(s)")
    print(f"{len(result.skips)} skip(s) -> {result.paths['skips']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
