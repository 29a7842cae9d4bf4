"""Transcript normalization and a lightweight lemmatizer/POS tagger.

Normalization turns raw transcript strings into token lists under an
explicit, configurable policy, so that error-rate scoring and lexical
counting are reproducible. The tagger is a deterministic exception-table +
suffix-rule system; externally produced tags can be supplied through
:func:`load_tagged` wherever higher fidelity is needed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import SchemaError

_MARKUP_RE = re.compile(r"\[[^\]]*\]")
# Strip everything except word characters, whitespace and apostrophes; a
# second pass drops apostrophes that are not inside a word.
_PUNCT_RE = re.compile(r"[^\w\s']")
_EDGE_APOSTROPHE_RE = re.compile(r"(?<![\w])'|'(?![\w])")
_DIGITS_RE = re.compile(r"^\d+$")


class Pos(str, Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    OTHER = "OTHER"


@dataclass(frozen=True)
class NormalizationPolicy:
    """Pure description of the normalization applied before tokenizing.

    Equal policies produce equal outputs on equal inputs. Contraction
    expansion and numeral spelling are off by default so that scoring
    reflects the surface forms the recognizer actually produced.
    """

    lowercase: bool = True
    strip_punctuation: bool = True
    expand_contractions: bool = False
    spell_out_numerals: bool = False
    drop_annotation_markup: bool = True

    def as_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "strip_punctuation": self.strip_punctuation,
            "expand_contractions": self.expand_contractions,
            "spell_out_numerals": self.spell_out_numerals,
            "drop_annotation_markup": self.drop_annotation_markup,
        }


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    lemma: str
    pos: Pos

    def __post_init__(self) -> None:
        assert self.lemma and self.lemma == self.lemma.lower()


def _load_table(name: str) -> dict[str, tuple[str, ...]]:
    table: dict[str, tuple[str, ...]] = {}
    text = resources.files("asrsel.data").joinpath(name).read_text(encoding="utf-8")
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        form, _, rest = line.partition("\t")
        table[form] = tuple(rest.split("\t"))
    return table


_contractions: dict[str, tuple[str, ...]] | None = None
_numerals: dict[str, tuple[str, ...]] | None = None
_lemma_exceptions: dict[str, tuple[str, ...]] | None = None


def _contraction_table() -> dict[str, tuple[str, ...]]:
    global _contractions
    if _contractions is None:
        _contractions = {k: tuple(v[0].split()) for k, v in _load_table("contractions.tsv").items()}
    return _contractions


def _numeral_table() -> dict[str, tuple[str, ...]]:
    global _numerals
    if _numerals is None:
        _numerals = {k: tuple(v[0].split()) for k, v in _load_table("numerals.tsv").items()}
    return _numerals


def _exception_table() -> dict[str, tuple[str, str]]:
    global _lemma_exceptions
    if _lemma_exceptions is None:
        _lemma_exceptions = {}
        for form, fields in _load_table("lemma_exceptions.tsv").items():
            lemma, pos = fields
            _lemma_exceptions[form] = (lemma, pos)
    return _lemma_exceptions  # type: ignore[return-value]


def normalize(text: str, policy: NormalizationPolicy = NormalizationPolicy()) -> list[str]:
    """Apply ``policy`` to a raw transcript and split it into tokens.

    Total and deterministic: any string input yields a (possibly empty)
    token list.
    """
    if policy.drop_annotation_markup:
        text = _MARKUP_RE.sub(" ", text)
    if policy.lowercase:
        text = text.lower()
    if policy.strip_punctuation:
        text = _PUNCT_RE.sub(" ", text)
        text = _EDGE_APOSTROPHE_RE.sub(" ", text)
    tokens = text.split()
    if policy.expand_contractions:
        table = _contraction_table()
        tokens = [part for tok in tokens for part in table.get(tok, (tok,))]
    if policy.spell_out_numerals:
        table = _numeral_table()
        expanded: list[str] = []
        for tok in tokens:
            if _DIGITS_RE.match(tok):
                expanded.extend(table.get(tok, (tok,)))
            else:
                expanded.append(tok)
        tokens = expanded
    return tokens


_DOUBLED_FINALS = set("bdgklmnprt")


def _suffix_tag(word: str) -> tuple[str, Pos]:
    """Suffix heuristics for words outside the exception table."""
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y", Pos.NOUN
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y", Pos.VERB
    if word.endswith(("ches", "shes", "xes", "zes", "sses")) and len(word) > 4:
        return word[:-2], Pos.NOUN
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in _DOUBLED_FINALS:
            stem = stem[:-1]
        return stem, Pos.VERB
    if word.endswith("ed") and len(word) > 3:
        stem = word[:-2]
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] in _DOUBLED_FINALS:
            stem = stem[:-1]
        return stem, Pos.VERB
    if word.endswith("ly") and len(word) > 3:
        return word, Pos.ADV
    if word.endswith(("ness", "ment", "tion", "sion")) and len(word) > 5:
        return word, Pos.NOUN
    if word.endswith(("ful", "ish", "ous", "ive", "able")) and len(word) > 4:
        return word, Pos.ADJ
    if word.endswith("s") and not word.endswith("ss") and len(word) > 3:
        return word[:-1], Pos.NOUN
    return word, Pos.OTHER


def tag(tokens: list[str]) -> list[TaggedToken]:
    """Tag normalized tokens: exception table first, then suffix rules.

    Length-preserving; unknown words fall back to identity lemma and OTHER.
    """
    exceptions = _exception_table()
    out: list[TaggedToken] = []
    for tok in tokens:
        word = tok.lower()
        hit = exceptions.get(word)
        if hit is not None:
            lemma, pos = hit
            out.append(TaggedToken(surface=tok, lemma=lemma, pos=Pos(pos)))
            continue
        lemma, pos = _suffix_tag(word)
        out.append(TaggedToken(surface=tok, lemma=lemma or word, pos=pos))
    return out


def load_tagged(path: str | Path) -> dict[tuple[str, str], list[TaggedToken]]:
    """Read a tagged-tokens record file, keyed by (utterance_id, source).

    ``source`` distinguishes manual from automatic transcripts so externally
    produced tags can replace the built-in tagger on either side of the
    lexical comparison.
    """
    path = Path(path)
    result: dict[tuple[str, str], list[TaggedToken]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(str(path), lineno, "-", f"invalid JSON: {exc}") from exc
            if lineno == 1 and "schema" in obj:
                if obj.get("schema") != "tagged":
                    raise SchemaError(str(path), lineno, "schema",
                                      f"expected 'tagged', got {obj.get('schema')!r}")
                continue
            for field in ("utterance_id", "source", "tokens"):
                if field not in obj:
                    raise SchemaError(str(path), lineno, field, "missing required field")
            key = (str(obj["utterance_id"]), str(obj["source"]))
            if key in result:
                raise SchemaError(str(path), lineno, "utterance_id",
                                  f"duplicate tagged record for {key}")
            tokens: list[TaggedToken] = []
            for k, entry in enumerate(obj["tokens"]):
                for field in ("surface", "lemma", "pos"):
                    if field not in entry:
                        raise SchemaError(str(path), lineno, f"tokens[{k}].{field}",
                                          "missing required field")
                try:
                    pos = Pos(entry["pos"])
                except ValueError as exc:
                    raise SchemaError(str(path), lineno, f"tokens[{k}].pos",
                                      f"unknown pos {entry['pos']!r}") from exc
                tokens.append(TaggedToken(surface=str(entry["surface"]),
                                          lemma=str(entry["lemma"]), pos=pos))
            result[key] = tokens
    return result
