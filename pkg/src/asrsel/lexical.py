"""Lemma frequency comparison between manual and automatic transcripts.

Counts are paired over the union vocabulary (a lemma absent from one source
simply counts 0 there), shifted by +1 and log10-scaled before computing the
product-moment correlation. The per-category report keys entries on
(lemma, pos) within each part-of-speech row and on the lemma alone for the
"all words" row, since the same lemma may surface under several tags.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from math import log10
from typing import Iterable, Sequence

from .textnorm import TaggedToken

POS_REPORT_ORDER: tuple[str, ...] = ("all", "NOUN", "VERB", "ADJ", "ADV", "PRON")


class Scope(str, Enum):
    ALL = "all_utterances"
    SELECTED = "selected_utterances"


@dataclass(frozen=True)
class FrequencyTable:
    """(lemma, pos) -> (manual count, automatic count), plus the scope tag."""

    entries: dict[tuple[str, str], tuple[int, int]]
    scope: Scope

    def total(self, source: str) -> int:
        idx = 0 if source == "manual" else 1
        return sum(counts[idx] for counts in self.entries.values())


def count_lemmas(pairs: Iterable[tuple[list[TaggedToken], list[TaggedToken]]],
                 scope: Scope = Scope.ALL) -> FrequencyTable:
    """Count tagged lemmas per source over (manual, automatic) token pairs."""
    entries: dict[tuple[str, str], list[int]] = {}
    for manual, automatic in pairs:
        for idx, tokens in ((0, manual), (1, automatic)):
            for tok in tokens:
                key = (tok.lemma, tok.pos.value)
                if key not in entries:
                    entries[key] = [0, 0]
                entries[key][idx] += 1
    return FrequencyTable(entries={k: (v[0], v[1]) for k, v in entries.items()},
                          scope=scope)


def log_counts(table: FrequencyTable) -> tuple[list[tuple[str, str]],
                                               list[float], list[float]]:
    """Per entry: (log10(manual+1), log10(automatic+1)), in sorted key order."""
    keys = sorted(table.entries)
    manual = [log10(table.entries[k][0] + 1) for k in keys]
    automatic = [log10(table.entries[k][1] + 1) for k in keys]
    return keys, manual, automatic


def pearson(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Product-moment correlation; None when either vector is constant."""
    if len(x) != len(y):
        raise ValueError("vectors must have equal length")
    if len(x) < 2:
        raise ValueError("need at least 2 points")
    try:
        return statistics.correlation(list(x), list(y))
    except statistics.StatisticsError:
        return None


def _filtered_counts(table: FrequencyTable, pos_filter: set[str] | None,
                     min_auto_count: int) -> list[tuple[int, int]]:
    """Count pairs after POS and automatic-frequency filtering.

    With a POS filter the (lemma, pos) keys are kept as-is; without one,
    counts are aggregated per lemma across tags.
    """
    if pos_filter is None:
        by_lemma: dict[str, list[int]] = {}
        for (lemma, _pos), (m, a) in table.entries.items():
            if lemma not in by_lemma:
                by_lemma[lemma] = [0, 0]
            by_lemma[lemma][0] += m
            by_lemma[lemma][1] += a
        pairs = [(m, a) for lemma, (m, a) in sorted(by_lemma.items())]
    else:
        pairs = [table.entries[key] for key in sorted(table.entries)
                 if key[1] in pos_filter]
    return [(m, a) for m, a in pairs if a >= min_auto_count]


@dataclass(frozen=True)
class CorrelationRow:
    category: str
    r: float | None
    n_entries: int


def correlation_report(table: FrequencyTable, pos_filter: set[str] | None = None,
                       min_auto_count: int = 0) -> CorrelationRow:
    """Correlation of log counts for one POS selection and frequency floor.

    Fewer than two surviving entries (or constant counts) yield an
    undefined-marker row rather than an error.
    """
    pairs = _filtered_counts(table, pos_filter, min_auto_count)
    category = "all" if pos_filter is None else "+".join(sorted(pos_filter))
    if len(pairs) < 2:
        return CorrelationRow(category=category, r=None, n_entries=len(pairs))
    x = [log10(m + 1) for m, _ in pairs]
    y = [log10(a + 1) for _, a in pairs]
    return CorrelationRow(category=category, r=pearson(x, y), n_entries=len(pairs))


def correlation_table(table: FrequencyTable,
                      min_auto_count: int = 0) -> list[CorrelationRow]:
    """One row per report category: all words first, then the five POS rows."""
    rows = [correlation_report(table, None, min_auto_count)]
    for pos in POS_REPORT_ORDER[1:]:
        row = correlation_report(table, {pos}, min_auto_count)
        rows.append(CorrelationRow(category=pos, r=row.r, n_entries=row.n_entries))
    return rows


def mean_counts_per_pos(table: FrequencyTable) -> dict[str, float]:
    """Mean automatic count per (lemma, pos) entry, by POS (descriptive only)."""
    sums: dict[str, list[int]] = {}
    for (_lemma, pos), (_m, a) in table.entries.items():
        if pos not in sums:
            sums[pos] = [0, 0]
        sums[pos][0] += a
        sums[pos][1] += 1
    return {pos: total / n for pos, (total, n) in sorted(sums.items()) if n > 0}


@dataclass(frozen=True)
class FittedLine:
    slope: float
    intercept: float
    n_points: int
    r: float | None


@dataclass(frozen=True)
class ScatterPoint:
    lemma: str
    log_manual: float
    log_automatic: float
    labeled: bool


@dataclass(frozen=True)
class ScatterData:
    points: tuple[ScatterPoint, ...]
    line_all: FittedLine | None
    line_filtered: FittedLine | None
    min_auto_count: int
    scope: Scope


def _least_squares(x: Sequence[float], y: Sequence[float]) -> FittedLine | None:
    if len(x) < 2:
        return None
    try:
        fit = statistics.linear_regression(list(x), list(y))
    except statistics.StatisticsError:
        return None
    return FittedLine(slope=fit.slope, intercept=fit.intercept, n_points=len(x),
                      r=pearson(x, y))


def scatter_data(table: FrequencyTable, min_auto_count: int = 5,
                 max_labels: int = 40) -> ScatterData:
    """Scatter document for the manual-vs-automatic log-count plot.

    Points are per lemma (aggregated over POS). Two least-squares lines are
    fitted: one over all lemmas and one over lemmas meeting the automatic
    count floor; the filtered line is omitted when fewer than two points
    survive. Only the ``max_labels`` most frequent lemmas carry labels, to
    keep the plot readable.
    """
    by_lemma: dict[str, list[int]] = {}
    for (lemma, _pos), (m, a) in table.entries.items():
        if lemma not in by_lemma:
            by_lemma[lemma] = [0, 0]
        by_lemma[lemma][0] += m
        by_lemma[lemma][1] += a
    lemmas = sorted(by_lemma)
    label_set = set(sorted(lemmas, key=lambda w: (-sum(by_lemma[w]), w))[:max_labels])
    points = tuple(
        ScatterPoint(lemma=w, log_manual=log10(by_lemma[w][0] + 1),
                     log_automatic=log10(by_lemma[w][1] + 1), labeled=w in label_set)
        for w in lemmas
    )
    xs = [p.log_manual for p in points]
    ys = [p.log_automatic for p in points]
    keep = [i for i, w in enumerate(lemmas) if by_lemma[w][1] >= min_auto_count]
    return ScatterData(
        points=points,
        line_all=_least_squares(xs, ys),
        line_filtered=_least_squares([xs[i] for i in keep], [ys[i] for i in keep]),
        min_auto_count=min_auto_count,
        scope=table.scope,
    )


def frequency_rows(table: FrequencyTable) -> list[str]:
    """Tab-delimited export lines (lemma, pos, manual_count, auto_count)."""
    lines = ["lemma\tpos\tmanual_count\tauto_count"]
    for (lemma, pos) in sorted(table.entries):
        m, a = table.entries[(lemma, pos)]
        lines.append(f"{lemma}\t{pos}\t{m}\t{a}")
    return lines
