#!/usr/bin/env python3
"""End-to-end experiment driver on a synthetic dataset.

Generates a dataset (or reuses --data), computes features, trains the
reliability classifier, runs leave-one-corpus-out cross-validation and the
false-positive-cost sweep, applies the model, and compares the lexical
statistics of the selected transcripts against the manual references.

    python3 scripts/run_pipeline.py --out runs/demo
    python3 scripts/run_pipeline.py --out runs/demo --fp-cost 2.0 \
        --config fixtures/synth_config.json
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

from asrsel.cli import main as asrsel_main  # noqa: E402


def run(argv: list[str]) -> None:
    print("+ asrsel " + " ".join(argv), file=sys.stderr)
    rc = asrsel_main(argv)
    if rc != 0:
        sys.exit(f"step failed with exit code {rc}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--config", default=str(ROOT / "fixtures" / "synth_config.json"),
                        help="synthetic dataset config (ignored with --data)")
    parser.add_argument("--data", help="use an existing record-file directory")
    parser.add_argument("--fp-cost", type=float, default=1.5)
    parser.add_argument("--grid", default="1.0,1.5,2.0,2.2,2.5")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.data:
        data = args.data
    else:
        data = str(out / "data")
        run(["synth", "--config", args.config, "--out", data])

    run(["validate", "--data", data])
    run(["featurize", "--data", data, "--out", str(out / "features.jsonl")])
    run(["train", "--data", data, "--features", str(out / "features.jsonl"),
         "--out", str(out / "model.json"),
         "--fp-cost", str(args.fp_cost), "--seed", str(args.seed)])
    run(["cv", "--data", data, "--fp-cost", str(args.fp_cost),
         "--seed", str(args.seed),
         "--out-json", str(out / "cv_report.json"),
         "--out-text", str(out / "cv_report.txt")])
    run(["sweep", "--data", data, "--grid", args.grid, "--seed", str(args.seed),
         "--out-json", str(out / "sweep_report.json"),
         "--out-text", str(out / "sweep_report.txt")])
    run(["select", "--data", data, "--model", str(out / "model.json"),
         "--features", str(out / "features.jsonl"),
         "--out", str(out / "selection.jsonl")])
    run(["lexstats", "--data", data, "--selection", str(out / "selection.jsonl"),
         "--min-auto-count", "5", "--out-dir", str(out / "lexstats_selected")])
    run(["lexstats", "--data", data, "--min-auto-count", "5",
         "--out-dir", str(out / "lexstats_all")])
    print(f"\nartifacts under {out}/", file=sys.stderr)


if __name__ == "__main__":
    main()
