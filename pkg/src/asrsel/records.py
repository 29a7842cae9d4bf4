"""Line-delimited record files: the pipeline's on-disk interchange format.

Every record file is UTF-8 JSON lines. The first line is a header object
carrying at least ``schema`` (the record type name) and ``version``; each
following line is one record. Writers emit fields in a fixed order and
files are written atomically (temp file + rename), so identical inputs
produce byte-identical files.

Schemas:
    utterances  {id, corpus, recording, start_s, end_s, speaker?, reference?}
    hypotheses  {utterance_id, engine, words: [{text, logprob, start_s?, end_s?}]}
    alignment   {utterance_id, words: [{text, logprob}]}
    acoustics   {utterance_id, snr_db, c50_db}
    features    {utterance_id, values: [12 reals or null], mask: [12 booleans]}
    tagged      {utterance_id, source, tokens: [{surface, lemma, pos}]}
    selection   {utterance_id, transcript, decision}
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

from .errors import SchemaError

SCHEMA_VERSION = 1
N_FEATURE_VALUES = 12

_NUMBER = (int, float)

# schema -> (required {field: types}, optional {field: types})
_FIELD_SPECS: dict[str, tuple[dict[str, tuple], dict[str, tuple]]] = {
    "utterances": (
        {"id": (str,), "corpus": (str,), "recording": (str,),
         "start_s": _NUMBER, "end_s": _NUMBER},
        {"speaker": (str,), "reference": (str,)},
    ),
    "hypotheses": (
        {"utterance_id": (str,), "engine": (str,), "words": (list,)},
        {},
    ),
    "alignment": (
        {"utterance_id": (str,), "words": (list,)},
        {},
    ),
    "acoustics": (
        {"utterance_id": (str,), "snr_db": _NUMBER, "c50_db": _NUMBER},
        {},
    ),
    "features": (
        {"utterance_id": (str,), "values": (list,), "mask": (list,)},
        {},
    ),
    "tagged": (
        {"utterance_id": (str,), "source": (str,), "tokens": (list,)},
        {},
    ),
    "selection": (
        {"utterance_id": (str,), "transcript": (str,), "decision": _NUMBER},
        {"summary": (dict,)},
    ),
}

_WORD_SPECS: dict[str, tuple[dict[str, tuple], dict[str, tuple]]] = {
    "hypotheses": ({"text": (str,), "logprob": _NUMBER},
                   {"start_s": _NUMBER, "end_s": _NUMBER}),
    "alignment": ({"text": (str,), "logprob": _NUMBER}, {}),
    "tagged": ({"surface": (str,), "lemma": (str,), "pos": (str,)}, {}),
}

ENGINES = ("weak", "strong")


class RecordFile:
    """A parsed record file: header plus validated record rows."""

    def __init__(self, path: Path, schema: str, version: int,
                 header: dict, rows: list[dict]):
        self.path = path
        self.schema = schema
        self.version = version
        self.header = header
        self.rows = rows


def _check_fields(path: str, lineno: int, obj: dict, schema: str) -> None:
    required, optional = _FIELD_SPECS[schema]
    for field, types in required.items():
        if field not in obj:
            raise SchemaError(path, lineno, field, "missing required field")
        if not isinstance(obj[field], types) or isinstance(obj[field], bool):
            raise SchemaError(path, lineno, field,
                              f"expected {'/'.join(t.__name__ for t in types)}, "
                              f"got {type(obj[field]).__name__}")
    for field, types in optional.items():
        if field in obj and obj[field] is not None and not isinstance(obj[field], types):
            raise SchemaError(path, lineno, field,
                              f"expected {'/'.join(t.__name__ for t in types)}")
    word_field = "words" if schema in ("hypotheses", "alignment") else "tokens"
    if schema in _WORD_SPECS:
        w_required, w_optional = _WORD_SPECS[schema]
        for k, entry in enumerate(obj[word_field]):
            if not isinstance(entry, dict):
                raise SchemaError(path, lineno, f"{word_field}[{k}]", "expected object")
            for field, types in w_required.items():
                if field not in entry:
                    raise SchemaError(path, lineno, f"{word_field}[{k}].{field}",
                                      "missing required field")
                if not isinstance(entry[field], types) or isinstance(entry[field], bool):
                    raise SchemaError(path, lineno, f"{word_field}[{k}].{field}",
                                      "wrong type")
    if schema == "utterances":
        if obj["end_s"] <= obj["start_s"]:
            raise SchemaError(path, lineno, "end_s",
                              f"end_s ({obj['end_s']}) must exceed start_s ({obj['start_s']})")
        if obj["start_s"] < 0:
            raise SchemaError(path, lineno, "start_s", "must be >= 0")
    if schema == "hypotheses" and obj["engine"] not in ENGINES:
        raise SchemaError(path, lineno, "engine",
                          f"expected one of {ENGINES}, got {obj['engine']!r}")
    if schema == "features":
        values, mask = obj["values"], obj["mask"]
        if len(values) != N_FEATURE_VALUES:
            raise SchemaError(path, lineno, "values",
                              f"expected {N_FEATURE_VALUES} entries, got {len(values)}")
        if len(values) != len(mask):
            raise SchemaError(path, lineno, "mask", "values and mask lengths differ")
        for k, (v, m) in enumerate(zip(values, mask)):
            if not isinstance(m, bool):
                raise SchemaError(path, lineno, f"mask[{k}]", "expected boolean")
            if m and (not isinstance(v, _NUMBER) or isinstance(v, bool)):
                raise SchemaError(path, lineno, f"values[{k}]", "observed value must be a number")
            if not m and v is not None:
                raise SchemaError(path, lineno, f"values[{k}]", "masked value must be null")


def read_record_file(path: str | Path) -> RecordFile:
    """Parse and validate one record file; raises SchemaError on violations."""
    path = Path(path)
    rows: list[dict] = []
    schema: str | None = None
    version = SCHEMA_VERSION
    header: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(str(path), lineno, "-", f"invalid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise SchemaError(str(path), lineno, "-", "expected a JSON object")
            if schema is None:
                if "schema" not in obj:
                    raise SchemaError(str(path), lineno, "schema",
                                      "first line must be a header with a 'schema' field")
                schema = obj["schema"]
                if schema not in _FIELD_SPECS:
                    raise SchemaError(str(path), lineno, "schema",
                                      f"unknown schema {schema!r}")
                version = obj.get("version", SCHEMA_VERSION)
                if not isinstance(version, int) or version > SCHEMA_VERSION:
                    raise SchemaError(str(path), lineno, "version",
                                      f"unsupported version {version!r} "
                                      f"(tool supports <= {SCHEMA_VERSION})")
                header = obj
                continue
            _check_fields(str(path), lineno, obj, schema)
            rows.append(obj)
    if schema is None:
        # Zero-byte or whitespace-only files are accepted as vacuously empty.
        return RecordFile(path, "empty", SCHEMA_VERSION, {}, [])
    return RecordFile(path, schema, version, header, rows)


def dumps_record(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write a file via temp-then-rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_record_file(path: str | Path, schema: str, rows: Iterable[dict],
                      extra_header: dict[str, Any] | None = None) -> None:
    """Emit a record file with a header line followed by one record per line."""
    header: dict[str, Any] = {"schema": schema, "version": SCHEMA_VERSION}
    if extra_header:
        header.update(extra_header)
    lines = [dumps_record(header)]
    lines.extend(dumps_record(row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()
