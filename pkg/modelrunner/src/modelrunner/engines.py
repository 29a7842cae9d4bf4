"""Engine adapter protocol and the shipped offline stub engines.

An engine wrapper turns an audio clip into scored words (recognizers), a
scored alignment of given words (aligners), or signal-quality numbers
(acoustics estimators). Heavyweight neural engines plug in by implementing
the same small surface; the stubs echo canned outputs keyed by utterance id
so the whole runner is testable without any model downloads.

Per-word log-probabilities are whatever the engine reports; each wrapper
states its aggregation convention in ``logprob_convention`` and the runner
records it in the output file header.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .audio import AudioClip


class EngineError(Exception):
    pass


@dataclass(frozen=True)
class ScoredWord:
    text: str
    logprob: float
    start_s: float | None = None
    end_s: float | None = None


class AsrEngine(Protocol):
    logprob_convention: str

    def transcribe(self, clip: AudioClip, utterance_id: str) -> list[ScoredWord]:
        ...


class AlignerEngine(Protocol):
    logprob_convention: str

    def align(self, clip: AudioClip, words: list[str],
              utterance_id: str) -> list[ScoredWord]:
        ...


class AcousticsEngine(Protocol):
    def analyze(self, clip: AudioClip, utterance_id: str) -> tuple[float, float]:
        ...


def _load_canned(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise EngineError(f"cannot load canned outputs from {path}: {exc}") from exc


class StubAsrEngine:
    """Echoes canned word sequences; fails for utterances it has no line for."""

    logprob_convention = "canned per-word scores"

    def __init__(self, canned: str | Path):
        self.canned = _load_canned(canned)

    def transcribe(self, clip: AudioClip, utterance_id: str) -> list[ScoredWord]:
        entry = self.canned.get(utterance_id)
        if entry is None:
            raise EngineError(f"no canned transcript for {utterance_id}")
        return [ScoredWord(text=w["text"], logprob=float(w["logprob"]),
                           start_s=w.get("start_s"), end_s=w.get("end_s"))
                for w in entry["words"]]


class StubAlignerEngine:
    """Scores the words it is given with canned per-position log-probs."""

    logprob_convention = "canned per-word scores"

    def __init__(self, canned: str | Path):
        self.canned = _load_canned(canned)

    def align(self, clip: AudioClip, words: list[str],
              utterance_id: str) -> list[ScoredWord]:
        entry = self.canned.get(utterance_id)
        if entry is None:
            raise EngineError(f"no canned alignment for {utterance_id}")
        scores = [float(s) for s in entry["logprobs"]]
        if len(scores) < len(words):
            # shorter canned score lists are padded with their last value so
            # the alignment always covers the hypothesis it was fed
            scores += [scores[-1] if scores else -1.0] * (len(words) - len(scores))
        return [ScoredWord(text=w, logprob=lp) for w, lp in zip(words, scores)]


class StubAcousticsEngine:
    """Echoes canned (snr_db, c50_db) pairs."""

    def __init__(self, canned: str | Path):
        self.canned = _load_canned(canned)

    def analyze(self, clip: AudioClip, utterance_id: str) -> tuple[float, float]:
        entry = self.canned.get(utterance_id)
        if entry is None:
            raise EngineError(f"no canned acoustics for {utterance_id}")
        return float(entry["snr_db"]), float(entry["c50_db"])


class EnergyAcousticsEngine:
    """Crude signal-derived fallback: per-clip RMS-based pseudo-SNR.

    Useful when no acoustics model is configured; numbers are only
    comparable within one recording setup.
    """

    def __init__(self, noise_floor_db: float = -60.0):
        self.noise_floor_db = noise_floor_db

    def analyze(self, clip: AudioClip, utterance_id: str) -> tuple[float, float]:
        import array
        import math
        if clip.sample_width != 2:
            raise EngineError("energy acoustics supports 16-bit audio only")
        samples = array.array("h")
        samples.frombytes(clip.frames)
        if not samples:
            raise EngineError("empty clip")
        rms = math.sqrt(sum(s * s for s in samples) / len(samples))
        level_db = 20.0 * math.log10(max(rms, 1.0) / 32768.0)
        snr = level_db - self.noise_floor_db
        return round(snr, 4), round(max(0.0, snr * 0.6), 4)


_ASR_KINDS = {"stub-asr": StubAsrEngine}
_ALIGNER_KINDS = {"stub-aligner": StubAlignerEngine}
_ACOUSTICS_KINDS = {"stub-acoustics": StubAcousticsEngine,
                    "energy-acoustics": EnergyAcousticsEngine}


def make_engine(slot: str, kind: str, params: dict):
    registry = {"strong_asr": _ASR_KINDS, "weak_asr": _ASR_KINDS,
                "aligner": _ALIGNER_KINDS, "acoustics": _ACOUSTICS_KINDS}[slot]
    if kind not in registry:
        raise EngineError(f"unknown {slot} engine kind {kind!r}; "
                          f"available: {sorted(registry)}")
    return registry[kind](**params)
