#!/usr/bin/env python3
"""Regenerate the committed sample: audio, manifest, canned engine outputs.

The WAV is synthesized deterministically (fixed-phase sines, 16 kHz mono
16-bit), so the file is byte-stable across platforms.
"""

from __future__ import annotations

import json
import math
import struct
import wave
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
SAMPLE = ROOT / "sample"

RATE = 16000
DURATION_S = 12.0


def synth_wav(path: Path) -> None:
    n = int(RATE * DURATION_S)
    frames = bytearray()
    for i in range(n):
        t = i / RATE
        # a little melody with a slow envelope; nothing listens to it, the
        # engines are stubs, but clips must be real audio slices
        env = 0.4 + 0.3 * math.sin(2 * math.pi * 0.25 * t)
        value = env * (0.5 * math.sin(2 * math.pi * 220.0 * t)
                       + 0.3 * math.sin(2 * math.pi * 452.5 * t))
        frames += struct.pack("<h", int(value * 20000))
    path.parent.mkdir(parents=True, exist_ok=True)
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(RATE)
        wav.writeframes(bytes(frames))


UTTERANCES = [
    {"id": "demo-u1", "corpus": "demo", "recording": "rec01",
     "start_s": 0.5, "end_s": 2.1, "speaker": "CHI",
     "reference": "It's the cupcake!"},
    {"id": "demo-u2", "corpus": "demo", "recording": "rec01",
     "start_s": 3.0, "end_s": 5.2, "speaker": "FEM",
     "reference": "gonna go home now"},
    {"id": "demo-u3", "corpus": "demo", "recording": "rec01",
     "start_s": 6.0, "end_s": 6.8, "speaker": "CHI",
     "reference": "yup"},
]

CANNED_STRONG = {
    "demo-u1": {"words": [
        {"text": "It's", "logprob": -0.12, "start_s": 0.52, "end_s": 0.9},
        {"text": "the", "logprob": -0.45, "start_s": 0.9, "end_s": 1.2},
        {"text": "cupcake", "logprob": -0.2, "start_s": 1.2, "end_s": 2.05},
    ]},
    "demo-u2": {"words": [
        {"text": "gonna", "logprob": -0.8, "start_s": 3.1, "end_s": 3.6},
        {"text": "go", "logprob": -0.3, "start_s": 3.6, "end_s": 4.0},
        {"text": "home", "logprob": -0.25, "start_s": 4.0, "end_s": 4.6},
        {"text": "now", "logprob": -0.5, "start_s": 4.6, "end_s": 5.1},
    ]},
    "demo-u3": {"words": [
        {"text": "yep", "logprob": -1.4, "start_s": 6.1, "end_s": 6.7},
    ]},
}

CANNED_WEAK = {
    "demo-u1": {"words": [
        {"text": "it's", "logprob": -0.6},
        {"text": "a", "logprob": -1.1},
        {"text": "cupcake", "logprob": -0.7},
    ]},
    "demo-u2": {"words": [
        {"text": "go", "logprob": -1.2},
        {"text": "home", "logprob": -0.9},
    ]},
    "demo-u3": {"words": [
        {"text": "yup", "logprob": -2.0},
    ]},
}

CANNED_ALIGNMENT = {
    "demo-u1": {"logprobs": [-0.05, -0.2, -0.11]},
    "demo-u2": {"logprobs": [-0.6, -0.2, -0.18, -0.35]},
    "demo-u3": {"logprobs": [-0.9]},
}

CANNED_ACOUSTICS = {
    "demo-u1": {"snr_db": 11.3, "c50_db": 18.9},
    "demo-u2": {"snr_db": 6.8, "c50_db": 14.2},
    "demo-u3": {"snr_db": 2.1, "c50_db": 9.4},
}

CONFIG = {
    "schema": "engine-config", "version": 1,
    "audio_root": "audio",
    "manifest": "utterances.jsonl",
    "engines": {
        "strong_asr": {"kind": "stub-asr", "params": {"canned": "canned_strong.json"}},
        "weak_asr": {"kind": "stub-asr", "params": {"canned": "canned_weak.json"}},
        "aligner": {"kind": "stub-aligner",
                    "params": {"canned": "canned_alignment.json"}},
        "acoustics": {"kind": "stub-acoustics",
                      "params": {"canned": "canned_acoustics.json"}},
    },
}

# both recognizer slots fed from the same canned outputs: downstream
# divergence must be zero everywhere
CONFIG_IDENTICAL = {
    **CONFIG,
    "engines": {
        **CONFIG["engines"],
        "weak_asr": {"kind": "stub-asr", "params": {"canned": "canned_strong.json"}},
    },
}


def main() -> None:
    SAMPLE.mkdir(parents=True, exist_ok=True)
    synth_wav(SAMPLE / "audio" / "rec01.wav")
    lines = [json.dumps({"schema": "utterances", "version": 1},
                        separators=(",", ":"))]
    lines += [json.dumps(u, ensure_ascii=False, separators=(",", ":"))
              for u in UTTERANCES]
    (SAMPLE / "utterances.jsonl").write_text("\n".join(lines) + "\n")
    for name, doc in (("canned_strong.json", CANNED_STRONG),
                      ("canned_weak.json", CANNED_WEAK),
                      ("canned_alignment.json", CANNED_ALIGNMENT),
                      ("canned_acoustics.json", CANNED_ACOUSTICS),
                      ("config.json", CONFIG),
                      ("config_identical.json", CONFIG_IDENTICAL)):
        (SAMPLE / name).write_text(json.dumps(doc, indent=2) + "\n")
    print("sample written under", SAMPLE)


if __name__ == "__main__":
    main()
