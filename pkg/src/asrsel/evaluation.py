"""Labeling, leave-one-corpus-out cross-validation, and selection metrics.

Each corpus serves once as the held-out test set while the remaining
corpora train the classifier. Standardization statistics and model weights
are always fitted inside the training fold only. Metrics that are undefined
for a fold (e.g. precision when nothing was selected) are reported as None
and rendered as a dash, never coerced to 0.
"""

from __future__ import annotations

import dataclasses
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DataError, TrainingError
from .features import FeatureVector, assemble, fit_standardizer, transform
from .ingest import Dataset
from .svm import Label, LabeledExample, make_label, predict, train
from .textnorm import NormalizationPolicy, normalize
from . import align


@dataclass(frozen=True)
class CvConfig:
    wer_threshold: float = 0.30
    fn_cost: float = 1.0
    regularization: float = 1.0
    seed: int = 0
    policy: NormalizationPolicy = field(default_factory=NormalizationPolicy)
    tol: float = 1e-6
    max_epochs: int = 10_000


@dataclass(frozen=True)
class LabeledUtterance:
    """One utterance ready for supervised work: raw features plus true WER."""

    utterance_id: str
    corpus: str
    duration_ms: int
    wer: float
    features: FeatureVector


@dataclass(frozen=True)
class Fold:
    test_corpus: str
    train_corpora: tuple[str, ...]
    test_ids: tuple[str, ...]
    train_ids: tuple[str, ...]


@dataclass(frozen=True)
class FoldResult:
    test_corpus: str
    train_corpora: tuple[str, ...]
    tp: int
    fp: int
    tn: int
    fn: int
    precision: float | None
    recall: float | None
    recall_duration: float | None
    wer_median_selected: float | None
    wer_mean_selected: float | None
    wer_median_all: float
    wer_mean_all: float
    pct_duration_selected: float
    pct_count_selected: float


_MEAN_FIELDS = ("tp", "fp", "tn", "fn", "precision", "recall", "recall_duration",
                "wer_median_selected", "wer_mean_selected", "wer_median_all",
                "wer_mean_all", "pct_duration_selected", "pct_count_selected")


def leave_one_corpus_out(ds: Dataset) -> list[Fold]:
    """One fold per corpus: that corpus is the test set, the rest train.

    Requires at least two corpora; folds are ordered by corpus tag and the
    test sets partition the dataset.
    """
    if len(ds.corpora) < 2:
        raise DataError(
            f"cross-validation needs at least 2 corpora, got {len(ds.corpora)}")
    by_corpus: dict[str, list[str]] = {c: [] for c in ds.corpora}
    for uid in sorted(ds.utterances):
        by_corpus[ds.utterances[uid].utterance.corpus].append(uid)
    folds = []
    for test_corpus in ds.corpora:
        train_corpora = tuple(c for c in ds.corpora if c != test_corpus)
        train_ids = tuple(uid for c in train_corpora for uid in by_corpus[c])
        folds.append(Fold(test_corpus=test_corpus, train_corpora=train_corpora,
                          test_ids=tuple(by_corpus[test_corpus]), train_ids=train_ids))
    return folds


def collect_labeled(ds: Dataset, policy: NormalizationPolicy = NormalizationPolicy(),
                    ) -> tuple[list[LabeledUtterance], dict[str, int]]:
    """Compute per-utterance features and true WER against the reference.

    WER is scored for the strong engine's hypothesis, the one the pipeline
    would ship. Utterances without a reference, with a reference that
    normalizes to nothing, or without a strong hypothesis cannot be labeled
    and are skipped with a counted reason.
    """
    labeled: list[LabeledUtterance] = []
    skipped: dict[str, int] = {}

    def _skip(reason: str) -> None:
        skipped[reason] = skipped.get(reason, 0) + 1

    for bundle in ds.bundles():
        u = bundle.utterance
        if u.reference is None:
            _skip("no_reference")
            continue
        if bundle.strong is None:
            _skip("no_strong_hypothesis")
            continue
        ref_tokens = normalize(u.reference, policy)
        if not ref_tokens:
            _skip("empty_reference_after_normalization")
            continue
        hyp_tokens = normalize(bundle.strong.text, policy)
        utterance_wer = align.wer(ref_tokens, hyp_tokens)
        labeled.append(LabeledUtterance(
            utterance_id=u.id, corpus=u.corpus, duration_ms=u.duration_ms,
            wer=utterance_wer, features=assemble(bundle, policy)))
    return labeled, skipped


def evaluate_selection(test: Sequence[LabeledExample],
                       predictions: Sequence[Label]) -> FoldResult:
    """Selection-quality metrics for one test set and its predictions.

    Precision/recall are computed over the LOW class by utterance count;
    recall_duration weights each utterance by its duration, answering how
    much of the acceptable speech time was actually recovered. WER stats
    cover the selected subset and, for the no-selection baseline, all
    utterances.
    """
    if len(test) != len(predictions):
        raise ValueError("test examples and predictions must have equal length")
    if not test:
        raise DataError("cannot evaluate an empty test set")

    tp = fp = tn = fn = 0
    dur_tp = dur_low = dur_selected = dur_total = 0
    selected_wers: list[float] = []
    all_wers: list[float] = []
    for ex, pred in zip(test, predictions):
        dur_total += ex.duration_ms
        all_wers.append(ex.wer)
        is_low = ex.label == Label.LOW
        picked = pred == Label.LOW
        if is_low:
            dur_low += ex.duration_ms
        if picked:
            dur_selected += ex.duration_ms
            selected_wers.append(ex.wer)
        if picked and is_low:
            tp += 1
            dur_tp += ex.duration_ms
        elif picked and not is_low:
            fp += 1
        elif not picked and is_low:
            fn += 1
        else:
            tn += 1

    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    recall_duration = dur_tp / dur_low if dur_low > 0 else None
    return FoldResult(
        test_corpus="", train_corpora=(),
        tp=tp, fp=fp, tn=tn, fn=fn,
        precision=precision, recall=recall, recall_duration=recall_duration,
        wer_median_selected=statistics.median(selected_wers) if selected_wers else None,
        wer_mean_selected=statistics.fmean(selected_wers) if selected_wers else None,
        wer_median_all=statistics.median(all_wers),
        wer_mean_all=statistics.fmean(all_wers),
        pct_duration_selected=100.0 * dur_selected / dur_total if dur_total else 0.0,
        pct_count_selected=100.0 * len(selected_wers) / len(test),
    )


def mean_fold_result(folds: Sequence[FoldResult]) -> FoldResult:
    """Unweighted arithmetic mean of fold metrics.

    A metric undefined in any fold is undefined in the mean.
    """
    values: dict[str, object] = {"test_corpus": "mean", "train_corpora": ()}
    for name in _MEAN_FIELDS:
        entries = [getattr(f, name) for f in folds]
        values[name] = None if any(e is None for e in entries) \
            else sum(entries) / len(entries)
    return FoldResult(**values)  # type: ignore[arg-type]


@dataclass(frozen=True)
class PooledStats:
    """WER statistics pooled over every test utterance across folds,
    complementing the unweighted fold means."""

    wer_median_selected: float | None
    wer_mean_selected: float | None
    wer_median_all: float
    wer_mean_all: float
    pct_duration_selected: float


@dataclass(frozen=True)
class CvResult:
    fp_cost: float
    folds: tuple[FoldResult, ...]
    mean: FoldResult
    pooled: PooledStats
    skipped: dict[str, int]
    n_labeled: int


def run_cv(ds: Dataset, fp_cost: float, config: CvConfig = CvConfig()) -> CvResult:
    """Leave-one-corpus-out cross-validation at one false-positive cost.

    Per fold: fit the standardizer on the training corpora, train the
    classifier there, then predict the held-out corpus. Test data never
    touches the standardizer or the model of its own fold.
    """
    labeled, skipped = collect_labeled(ds, config.policy)
    if not labeled:
        raise DataError("no labelable utterances (references and strong "
                        "hypotheses are required)")
    folds = leave_one_corpus_out(ds)
    by_corpus: dict[str, list[LabeledUtterance]] = {}
    for u in labeled:
        by_corpus.setdefault(u.corpus, []).append(u)

    results: list[FoldResult] = []
    pooled_selected: list[float] = []
    pooled_all: list[float] = []
    pooled_dur_selected = 0
    pooled_dur_total = 0
    for fold in folds:
        train_utts = [u for c in fold.train_corpora for u in by_corpus.get(c, [])]
        test_utts = by_corpus.get(fold.test_corpus, [])
        if not train_utts or not test_utts:
            raise DataError(f"fold {fold.test_corpus}: empty train or test set "
                            f"after labeling")
        try:
            standardizer = fit_standardizer([u.features for u in train_utts])
            train_examples = [
                LabeledExample(features=tuple(transform(standardizer, u.features)),
                               label=make_label(u.wer, config.wer_threshold),
                               wer=u.wer, duration_ms=u.duration_ms, corpus=u.corpus)
                for u in train_utts
            ]
            model = train(train_examples, fp_cost, config.fn_cost,
                          config.regularization, config.seed,
                          standardizer=standardizer,
                          wer_threshold=config.wer_threshold,
                          tol=config.tol, max_epochs=config.max_epochs)
        except (TrainingError, DataError) as exc:
            raise type(exc)(f"fold {fold.test_corpus}: {exc}") from exc
        test_examples = [
            LabeledExample(features=tuple(transform(standardizer, u.features)),
                           label=make_label(u.wer, config.wer_threshold),
                           wer=u.wer, duration_ms=u.duration_ms, corpus=u.corpus)
            for u in test_utts
        ]
        predictions = [predict(model, ex.features)[0] for ex in test_examples]
        metrics = evaluate_selection(test_examples, predictions)
        results.append(dataclasses.replace(
            metrics, test_corpus=fold.test_corpus, train_corpora=fold.train_corpora))
        for ex, pred in zip(test_examples, predictions):
            pooled_all.append(ex.wer)
            pooled_dur_total += ex.duration_ms
            if pred == Label.LOW:
                pooled_selected.append(ex.wer)
                pooled_dur_selected += ex.duration_ms

    pooled = PooledStats(
        wer_median_selected=statistics.median(pooled_selected)
        if pooled_selected else None,
        wer_mean_selected=statistics.fmean(pooled_selected)
        if pooled_selected else None,
        wer_median_all=statistics.median(pooled_all),
        wer_mean_all=statistics.fmean(pooled_all),
        pct_duration_selected=100.0 * pooled_dur_selected / pooled_dur_total
        if pooled_dur_total else 0.0,
    )
    return CvResult(fp_cost=fp_cost, folds=tuple(results),
                    mean=mean_fold_result(results), pooled=pooled,
                    skipped=skipped, n_labeled=len(labeled))


@dataclass(frozen=True)
class SweepResult:
    grid: tuple[float, ...]
    runs: tuple[CvResult, ...]
    baseline: FoldResult


def sweep_fp_cost(ds: Dataset, grid: Sequence[float],
                  config: CvConfig = CvConfig()) -> SweepResult:
    """run_cv at every grid value with identical folds and seeds.

    The baseline row describes the no-selection regime: WER statistics over
    everything, 100% of the data kept, precision/recall not applicable.
    """
    if not grid:
        raise ValueError("fp_cost grid must be nonempty")
    runs = tuple(run_cv(ds, fp_cost, config) for fp_cost in grid)
    first_mean = runs[0].mean
    baseline = FoldResult(
        test_corpus="no selection", train_corpora=(),
        tp=0, fp=0, tn=0, fn=0,
        precision=None, recall=None, recall_duration=None,
        wer_median_selected=first_mean.wer_median_all,
        wer_mean_selected=first_mean.wer_mean_all,
        wer_median_all=first_mean.wer_median_all,
        wer_mean_all=first_mean.wer_mean_all,
        pct_duration_selected=100.0, pct_count_selected=100.0,
    )
    return SweepResult(grid=tuple(grid), runs=runs, baseline=baseline)
