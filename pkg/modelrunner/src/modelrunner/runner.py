"""Drive the configured engines over an utterance manifest.

Reads the utterance manifest (the pipeline's line-delimited schema), clips
each utterance out of its recording, invokes the four engine slots, and
writes hypotheses/alignment/acoustics record files plus a skip log. Engine
failures and missing audio never produce malformed records: the utterance
is skipped for the affected stage with a reason, and the run continues.

For every stage, record count + skip-log count = manifest utterance count.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .audio import AudioError, clip_audio
from .engines import EngineError, ScoredWord, make_engine

SCHEMA_VERSION = 1
STAGES = ("strong_asr", "weak_asr", "aligner", "acoustics")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class EngineConfig:
    audio_root: Path
    manifest: Path
    engines: dict[str, tuple[str, dict]]   # slot -> (kind, params)

    def validate(self) -> None:
        for slot in ("strong_asr", "weak_asr"):
            if slot not in self.engines:
                raise ConfigError(f"both ASR engines must be configured; "
                                  f"missing {slot!r}")


def load_engine_config(path: str | Path) -> EngineConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if doc.get("schema") != "engine-config":
        raise ConfigError(f"{path}: not an engine-config document")
    if doc.get("version", 1) > SCHEMA_VERSION:
        raise ConfigError(f"{path}: config version too new")
    base = path.parent
    engines: dict[str, tuple[str, dict]] = {}
    for slot, entry in doc.get("engines", {}).items():
        if slot not in STAGES:
            raise ConfigError(f"{path}: unknown engine slot {slot!r}")
        params = dict(entry.get("params", {}))
        # canned-output paths are relative to the config file
        for key, value in params.items():
            if key == "canned":
                params[key] = str((base / value).resolve())
        engines[slot] = (entry["kind"], params)
    config = EngineConfig(
        audio_root=(base / doc["audio_root"]).resolve(),
        manifest=(base / doc["manifest"]).resolve(),
        engines=engines,
    )
    config.validate()
    return config


@dataclass
class RunResult:
    records: dict[str, int] = field(default_factory=dict)
    skips: list[dict] = field(default_factory=list)
    paths: dict[str, Path] = field(default_factory=dict)


def _read_manifest(path: Path) -> list[dict]:
    utterances: list[dict] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            obj = json.loads(line)
            if lineno == 1 and obj.get("schema"):
                if obj["schema"] != "utterances":
                    raise ConfigError(f"{path}: expected an utterances manifest, "
                                      f"got {obj['schema']!r}")
                continue
            utterances.append(obj)
    return sorted(utterances, key=lambda u: u["id"])


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _atomic_write(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _word_rows(words: list[ScoredWord], with_times: bool) -> list[dict]:
    rows = []
    for w in words:
        row: dict = {"text": w.text, "logprob": w.logprob}
        if with_times and w.start_s is not None:
            row["start_s"] = w.start_s
        if with_times and w.end_s is not None:
            row["end_s"] = w.end_s
        rows.append(row)
    return rows


def run_engines(config: EngineConfig, out_dir: str | Path) -> RunResult:
    """Produce record files for every utterance the engines can handle."""
    config.validate()
    out = Path(out_dir)
    engines = {slot: make_engine(slot, kind, params)
               for slot, (kind, params) in config.engines.items()}
    utterances = _read_manifest(config.manifest)

    result = RunResult()
    hyp_rows: list[dict] = []
    align_rows: list[dict] = []
    ac_rows: list[dict] = []

    def skip(uid: str, stage: str, reason: str) -> None:
        result.skips.append({"utterance_id": uid, "stage": stage,
                             "reason": reason})

    for utt in utterances:
        uid = utt["id"]
        recording = config.audio_root / f"{utt['recording']}.wav"
        try:
            clip = clip_audio(recording, float(utt["start_s"]), float(utt["end_s"]))
        except AudioError as exc:
            for stage in STAGES:
                if stage in engines:
                    skip(uid, stage, str(exc))
            continue
        strong_words: list[ScoredWord] | None = None
        for slot, engine_name in (("strong_asr", "strong"), ("weak_asr", "weak")):
            try:
                words = engines[slot].transcribe(clip, uid)
            except EngineError as exc:
                skip(uid, slot, str(exc))
                if slot == "strong_asr":
                    strong_words = None
                continue
            if slot == "strong_asr":
                strong_words = words
            hyp_rows.append({"utterance_id": uid, "engine": engine_name,
                             "words": _word_rows(words, with_times=True)})
            result.records[slot] = result.records.get(slot, 0) + 1
        if "aligner" in engines:
            if strong_words is None:
                skip(uid, "aligner", "no strong hypothesis to align")
            else:
                try:
                    aligned = engines["aligner"].align(
                        clip, [w.text for w in strong_words], uid)
                    align_rows.append({"utterance_id": uid,
                                       "words": _word_rows(aligned,
                                                           with_times=False)})
                    result.records["aligner"] = result.records.get("aligner", 0) + 1
                except EngineError as exc:
                    skip(uid, "aligner", str(exc))
        if "acoustics" in engines:
            try:
                snr, c50 = engines["acoustics"].analyze(clip, uid)
                ac_rows.append({"utterance_id": uid, "snr_db": snr,
                                "c50_db": c50})
                result.records["acoustics"] = result.records.get("acoustics", 0) + 1
            except EngineError as exc:
                skip(uid, "acoustics", str(exc))

    conventions = {name: getattr(engine, "logprob_convention", "engine native")
                   for name, engine in (("strong", engines.get("strong_asr")),
                                        ("weak", engines.get("weak_asr")))
                   if engine is not None}
    hyp_header = _dumps({"schema": "hypotheses", "version": SCHEMA_VERSION,
                         "logprob_conventions": conventions})
    result.paths["hypotheses"] = out / "hypotheses.jsonl"
    _atomic_write(result.paths["hypotheses"],
                  [hyp_header] + [_dumps(r) for r in hyp_rows])

    if "aligner" in engines:
        result.paths["alignment"] = out / "alignment.jsonl"
        _atomic_write(result.paths["alignment"],
                      [_dumps({"schema": "alignment", "version": SCHEMA_VERSION})]
                      + [_dumps(r) for r in align_rows])
    if "acoustics" in engines:
        result.paths["acoustics"] = out / "acoustics.jsonl"
        _atomic_write(result.paths["acoustics"],
                      [_dumps({"schema": "acoustics", "version": SCHEMA_VERSION})]
                      + [_dumps(r) for r in ac_rows])

    result.paths["skips"] = out / "skipped.jsonl"
    _atomic_write(result.paths["skips"], [_dumps(s) for s in result.skips])
    return result
