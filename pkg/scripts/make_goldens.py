#!/usr/bin/env python3
"""Regenerate the committed fixture dataset and every golden output.

Run from the repository root after an intentional change to the pipeline:

    python3 scripts/make_goldens.py

The end-to-end tests compare fresh runs byte-for-byte against these files,
so commit the changes this script makes together with the code change that
motivated them.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

from asrsel.cli import main as asrsel_main  # noqa: E402

CONFIG = ROOT / "fixtures" / "synth_config.json"
DATA = ROOT / "fixtures" / "data"
GOLDEN = ROOT / "fixtures" / "golden"

FP_COST = 1.5
SEED = 0


def run(argv: list[str]) -> None:
    print("+ asrsel " + " ".join(argv))
    rc = asrsel_main(argv)
    if rc != 0:
        sys.exit(f"command failed with exit code {rc}")


def main() -> None:
    os.environ["SOURCE_DATE_EPOCH"] = "0"
    GOLDEN.mkdir(parents=True, exist_ok=True)

    run(["synth", "--config", str(CONFIG), "--out", str(DATA)])
    run(["featurize", "--data", str(DATA),
         "--out", str(GOLDEN / "features.jsonl")])
    run(["train", "--data", str(DATA),
         "--features", str(GOLDEN / "features.jsonl"),
         "--out", str(GOLDEN / "model.json"),
         "--fp-cost", str(FP_COST), "--seed", str(SEED)])
    run(["cv", "--data", str(DATA), "--fp-cost", str(FP_COST),
         "--seed", str(SEED),
         "--out-json", str(GOLDEN / "cv_report.json"),
         "--out-text", str(GOLDEN / "cv_report.txt")])
    run(["select", "--data", str(DATA),
         "--model", str(GOLDEN / "model.json"),
         "--features", str(GOLDEN / "features.jsonl"),
         "--out", str(GOLDEN / "selection.jsonl")])
    run(["lexstats", "--data", str(DATA),
         "--selection", str(GOLDEN / "selection.jsonl"),
         "--min-auto-count", "5",
         "--out-dir", str(GOLDEN / "lexstats")])
    print("goldens written under", GOLDEN)


if __name__ == "__main__":
    main()
