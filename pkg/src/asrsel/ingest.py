"""Parse, validate and join the record streams into an in-memory dataset.

The joined :class:`Dataset` is immutable after construction and keyed by
utterance id; hypothesis/alignment/acoustics records that reference unknown
or duration-filtered utterances are dropped with counted warnings rather
than errors, since upstream engines routinely emit records for utterances a
later filter removes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import SchemaError
from .records import RecordFile, read_record_file, write_record_file

MIN_DURATION_MS_DEFAULT = 300


@dataclass(frozen=True)
class WordScore:
    text: str
    logprob: float
    start_s: float | None = None
    end_s: float | None = None


@dataclass(frozen=True)
class UtteranceRecord:
    id: str
    corpus: str
    recording: str
    start_s: float
    end_s: float
    speaker: str | None = None
    reference: str | None = None

    @property
    def duration_ms(self) -> int:
        # Integer milliseconds make the duration filter exact.
        return round(1000.0 * (self.end_s - self.start_s))


@dataclass(frozen=True)
class HypothesisRecord:
    utterance_id: str
    engine: str
    words: tuple[WordScore, ...]

    @property
    def text(self) -> str:
        return " ".join(w.text for w in self.words)


@dataclass(frozen=True)
class AlignmentRecord:
    utterance_id: str
    words: tuple[WordScore, ...]


@dataclass(frozen=True)
class AcousticsRecord:
    utterance_id: str
    snr_db: float
    c50_db: float


@dataclass(frozen=True)
class UtteranceBundle:
    """One utterance joined with everything the engines produced for it."""

    utterance: UtteranceRecord
    weak: HypothesisRecord | None = None
    strong: HypothesisRecord | None = None
    alignment: AlignmentRecord | None = None
    acoustics: AcousticsRecord | None = None

    def hypothesis(self, engine: str) -> HypothesisRecord | None:
        return self.weak if engine == "weak" else self.strong


@dataclass(frozen=True)
class Dataset:
    utterances: dict[str, UtteranceBundle]
    corpora: tuple[str, ...]
    warnings: tuple[str, ...] = ()
    dropped_short: int = 0

    def __len__(self) -> int:
        return len(self.utterances)

    def bundles(self) -> list[UtteranceBundle]:
        """Bundles in deterministic (utterance id) order."""
        return [self.utterances[uid] for uid in sorted(self.utterances)]


def _word_scores(entries: list[dict]) -> tuple[WordScore, ...]:
    return tuple(
        WordScore(text=e["text"], logprob=float(e["logprob"]),
                  start_s=float(e["start_s"]) if e.get("start_s") is not None else None,
                  end_s=float(e["end_s"]) if e.get("end_s") is not None else None)
        for e in entries
    )


def parse_manifest(paths: Iterable[str | Path],
                   min_duration_ms: int = MIN_DURATION_MS_DEFAULT) -> Dataset:
    """Read record files (any mix of schemas) and join them into a Dataset.

    Only utterances whose duration is at least ``min_duration_ms`` are
    retained; very short clips are unreliable for recognition. The bound is
    inclusive, so an utterance of exactly ``min_duration_ms`` survives.
    Parsing is order-independent: files may list records in any order and
    the utterance file need not come first.
    """
    files: list[RecordFile] = [read_record_file(p) for p in sorted(str(p) for p in paths)]

    utterances: dict[str, UtteranceRecord] = {}
    for rf in files:
        if rf.schema != "utterances":
            continue
        for i, row in enumerate(rf.rows):
            rec = UtteranceRecord(
                id=row["id"], corpus=row["corpus"], recording=row["recording"],
                start_s=float(row["start_s"]), end_s=float(row["end_s"]),
                speaker=row.get("speaker"), reference=row.get("reference"),
            )
            if rec.id in utterances:
                raise SchemaError(str(rf.path), i + 2, "id",
                                  f"duplicate utterance id {rec.id!r}")
            utterances[rec.id] = rec

    retained = {uid: u for uid, u in utterances.items()
                if u.duration_ms >= min_duration_ms}
    dropped_short = len(utterances) - len(retained)

    warnings: list[str] = []
    orphan_counts: dict[str, int] = {}

    def _note_orphan(kind: str, uid: str) -> bool:
        if uid in retained:
            return False
        orphan_counts[kind] = orphan_counts.get(kind, 0) + 1
        return True

    hypotheses: dict[tuple[str, str], HypothesisRecord] = {}
    alignments: dict[str, AlignmentRecord] = {}
    acoustics: dict[str, AcousticsRecord] = {}
    for rf in files:
        if rf.schema == "hypotheses":
            for i, row in enumerate(rf.rows):
                uid, engine = row["utterance_id"], row["engine"]
                if _note_orphan("hypotheses", uid):
                    continue
                key = (uid, engine)
                if key in hypotheses:
                    raise SchemaError(str(rf.path), i + 2, "utterance_id",
                                      f"duplicate hypothesis for utterance {uid!r} "
                                      f"engine {engine!r}")
                hypotheses[key] = HypothesisRecord(
                    utterance_id=uid, engine=engine, words=_word_scores(row["words"]))
        elif rf.schema == "alignment":
            for i, row in enumerate(rf.rows):
                uid = row["utterance_id"]
                if _note_orphan("alignment", uid):
                    continue
                if uid in alignments:
                    raise SchemaError(str(rf.path), i + 2, "utterance_id",
                                      f"duplicate alignment for utterance {uid!r}")
                alignments[uid] = AlignmentRecord(
                    utterance_id=uid, words=_word_scores(row["words"]))
        elif rf.schema == "acoustics":
            for i, row in enumerate(rf.rows):
                uid = row["utterance_id"]
                if _note_orphan("acoustics", uid):
                    continue
                if uid in acoustics:
                    raise SchemaError(str(rf.path), i + 2, "utterance_id",
                                      f"duplicate acoustics for utterance {uid!r}")
                acoustics[uid] = AcousticsRecord(
                    utterance_id=uid, snr_db=float(row["snr_db"]),
                    c50_db=float(row["c50_db"]))

    for kind in sorted(orphan_counts):
        warnings.append(f"{orphan_counts[kind]} {kind} record(s) reference unknown "
                        f"or filtered utterances; discarded")

    bundles = {
        uid: UtteranceBundle(
            utterance=u,
            weak=hypotheses.get((uid, "weak")),
            strong=hypotheses.get((uid, "strong")),
            alignment=alignments.get(uid),
            acoustics=acoustics.get(uid),
        )
        for uid, u in retained.items()
    }
    corpora = tuple(sorted({u.corpus for u in retained.values()}))
    return Dataset(utterances=bundles, corpora=corpora,
                   warnings=tuple(warnings), dropped_short=dropped_short)


@dataclass(frozen=True)
class DatasetStats:
    per_corpus_utterances: dict[str, int] = field(default_factory=dict)
    per_corpus_minutes: dict[str, float] = field(default_factory=dict)
    total_utterances: int = 0
    total_minutes: float = 0.0
    recordings: int = 0


def dataset_stats(ds: Dataset) -> DatasetStats:
    """Per-corpus utterance counts, total duration in minutes, recording count.

    Durations are reported in minutes rounded to one decimal.
    """
    per_count: dict[str, int] = {}
    per_ms: dict[str, int] = {}
    recordings: set[tuple[str, str]] = set()
    total_ms = 0
    for bundle in ds.bundles():
        u = bundle.utterance
        per_count[u.corpus] = per_count.get(u.corpus, 0) + 1
        per_ms[u.corpus] = per_ms.get(u.corpus, 0) + u.duration_ms
        recordings.add((u.corpus, u.recording))
        total_ms += u.duration_ms
    return DatasetStats(
        per_corpus_utterances=dict(sorted(per_count.items())),
        per_corpus_minutes={c: round(ms / 60000.0, 1) for c, ms in sorted(per_ms.items())},
        total_utterances=len(ds),
        total_minutes=round(total_ms / 60000.0, 1),
        recordings=len(recordings),
    )


def utterance_row(u: UtteranceRecord) -> dict:
    row: dict = {"id": u.id, "corpus": u.corpus, "recording": u.recording,
                 "start_s": u.start_s, "end_s": u.end_s}
    if u.speaker is not None:
        row["speaker"] = u.speaker
    if u.reference is not None:
        row["reference"] = u.reference
    return row


def _word_rows(words: tuple[WordScore, ...], with_times: bool) -> list[dict]:
    rows = []
    for w in words:
        row: dict = {"text": w.text, "logprob": w.logprob}
        if with_times and w.start_s is not None:
            row["start_s"] = w.start_s
        if with_times and w.end_s is not None:
            row["end_s"] = w.end_s
        rows.append(row)
    return rows


def write_dataset(ds: Dataset, out_dir: str | Path) -> dict[str, Path]:
    """Serialize a Dataset back to the four record files.

    Inverse of :func:`parse_manifest` up to record ordering (records are
    sorted by utterance id).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    bundles = ds.bundles()
    paths: dict[str, Path] = {}

    paths["utterances"] = out / "utterances.jsonl"
    write_record_file(paths["utterances"], "utterances",
                      (utterance_row(b.utterance) for b in bundles))

    hyp_rows = []
    for b in bundles:
        for hyp in (b.weak, b.strong):
            if hyp is not None:
                hyp_rows.append({"utterance_id": hyp.utterance_id, "engine": hyp.engine,
                                 "words": _word_rows(hyp.words, with_times=True)})
    paths["hypotheses"] = out / "hypotheses.jsonl"
    write_record_file(paths["hypotheses"], "hypotheses", hyp_rows)

    align_rows = [{"utterance_id": b.alignment.utterance_id,
                   "words": _word_rows(b.alignment.words, with_times=False)}
                  for b in bundles if b.alignment is not None]
    paths["alignment"] = out / "alignment.jsonl"
    write_record_file(paths["alignment"], "alignment", align_rows)

    ac_rows = [{"utterance_id": b.acoustics.utterance_id,
                "snr_db": b.acoustics.snr_db, "c50_db": b.acoustics.c50_db}
               for b in bundles if b.acoustics is not None]
    paths["acoustics"] = out / "acoustics.jsonl"
    write_record_file(paths["acoustics"], "acoustics", ac_rows)
    return paths
