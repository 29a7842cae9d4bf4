"""Sample-accurate clip extraction from WAV recordings."""

from __future__ import annotations

import wave
from dataclasses import dataclass
from pathlib import Path


class AudioError(Exception):
    pass


@dataclass(frozen=True)
class AudioClip:
    frames: bytes
    sample_rate: int
    sample_width: int
    channels: int

    @property
    def n_samples(self) -> int:
        return len(self.frames) // (self.sample_width * self.channels)

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate


def clip_audio(recording_path: str | Path, start_s: float, end_s: float) -> AudioClip:
    """Slice [start_s, end_s) out of a WAV file at its native rate.

    Boundaries are rounded to the nearest sample. Zero-length or
    out-of-range requests are errors (the caller records them in the
    skip log).
    """
    path = Path(recording_path)
    if not path.exists():
        raise AudioError(f"missing audio: {path}")
    try:
        with wave.open(str(path), "rb") as wav:
            rate = wav.getframerate()
            total = wav.getnframes()
            start = round(start_s * rate)
            end = round(end_s * rate)
            if start < 0 or end > total:
                raise AudioError(
                    f"clip [{start_s:g}, {end_s:g}] s outside recording "
                    f"({total / rate:g} s): {path.name}")
            if end <= start:
                raise AudioError(f"zero-length clip [{start_s:g}, {end_s:g}] s "
                                 f"requested from {path.name}")
            wav.setpos(start)
            frames = wav.readframes(end - start)
            return AudioClip(frames=frames, sample_rate=rate,
                             sample_width=wav.getsampwidth(),
                             channels=wav.getnchannels())
    except wave.Error as exc:
        raise AudioError(f"unreadable audio {path.name}: {exc}") from exc
