from __future__ import annotations

import json
from pathlib import Path

import pytest

from asrsel.records import write_record_file

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def write_jsonl(path: Path, schema: str, rows: list[dict]) -> Path:
    write_record_file(path, schema, rows)
    return path


def utt_row(uid: str, corpus: str = "north", recording: str = "r01",
            start_s: float = 0.0, end_s: float = 2.0, reference: str | None = None,
            speaker: str | None = None) -> dict:
    row = {"id": uid, "corpus": corpus, "recording": recording,
           "start_s": start_s, "end_s": end_s}
    if speaker is not None:
        row["speaker"] = speaker
    if reference is not None:
        row["reference"] = reference
    return row


def hyp_row(uid: str, engine: str, words: list[tuple[str, float]]) -> dict:
    return {"utterance_id": uid, "engine": engine,
            "words": [{"text": t, "logprob": lp} for t, lp in words]}


def align_row(uid: str, words: list[tuple[str, float]]) -> dict:
    return {"utterance_id": uid,
            "words": [{"text": t, "logprob": lp} for t, lp in words]}


def acoustics_row(uid: str, snr: float = 10.0, c50: float = 20.0) -> dict:
    return {"utterance_id": uid, "snr_db": snr, "c50_db": c50}


@pytest.fixture
def tiny_data_dir(tmp_path: Path) -> Path:
    """Four utterances across two corpora with full engine coverage."""
    data = tmp_path / "data"
    data.mkdir()
    utts = [
        utt_row("n-u1", "north", "r01", 0.0, 2.0, reference="the cat sat"),
        utt_row("n-u2", "north", "r01", 3.0, 4.5, reference="a big dog"),
        utt_row("s-u1", "south", "r02", 0.0, 1.8, reference="go home now"),
        utt_row("s-u2", "south", "r02", 2.0, 4.0, reference="it is here"),
    ]
    hyps = []
    for u in utts:
        ref_words = u["reference"].split()
        hyps.append(hyp_row(u["id"], "strong", [(w, -0.2) for w in ref_words]))
        hyps.append(hyp_row(u["id"], "weak", [(w, -0.6) for w in ref_words]))
    aligns = [align_row(u["id"], [(w, -0.1) for w in u["reference"].split()])
              for u in utts]
    acs = [acoustics_row(u["id"]) for u in utts]
    write_jsonl(data / "utterances.jsonl", "utterances", utts)
    write_jsonl(data / "hypotheses.jsonl", "hypotheses", hyps)
    write_jsonl(data / "alignment.jsonl", "alignment", aligns)
    write_jsonl(data / "acoustics.jsonl", "acoustics", acs)
    return data


def read_header_and_rows(path: Path) -> tuple[dict, list[dict]]:
    lines = [json.loads(line) for line in path.read_text().splitlines() if line]
    return lines[0], lines[1:]
