from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from asrsel.errors import DataError
from asrsel.evaluation import (CvConfig, FoldResult, collect_labeled,
                               evaluate_selection, leave_one_corpus_out,
                               mean_fold_result, run_cv, sweep_fp_cost)
from asrsel.ingest import parse_manifest
from asrsel.svm import Label, LabeledExample
from asrsel.synth import SynthConfig, generate

from conftest import hyp_row, utt_row, write_jsonl


def _dataset(tmp_path, corpora, n_per=2):
    utts, hyps = [], []
    for c in corpora:
        for i in range(n_per):
            uid = f"{c}-u{i}"
            utts.append(utt_row(uid, corpus=c, recording=f"{c}-r", start_s=3.0 * i,
                                end_s=3.0 * i + 2.0, reference="one two three"))
            hyps.append(hyp_row(uid, "strong", [("one", -0.1), ("two", -0.1),
                                                ("three", -0.1)]))
    paths = [write_jsonl(tmp_path / "utterances.jsonl", "utterances", utts),
             write_jsonl(tmp_path / "hypotheses.jsonl", "hypotheses", hyps)]
    return parse_manifest(paths)


def test_folds_one_per_corpus(tmp_path):
    ds = _dataset(tmp_path, ["ber", "luc", "sod", "war"])
    folds = leave_one_corpus_out(ds)
    assert [f.test_corpus for f in folds] == ["ber", "luc", "sod", "war"]
    ber = folds[0]
    assert ber.train_corpora == ("luc", "sod", "war")
    assert all(uid.startswith("ber") for uid in ber.test_ids)


def test_two_corpora_two_folds(tmp_path):
    ds = _dataset(tmp_path, ["x", "y"])
    assert len(leave_one_corpus_out(ds)) == 2


def test_single_corpus_refused(tmp_path):
    ds = _dataset(tmp_path, ["only"])
    with pytest.raises(DataError, match="at least 2"):
        leave_one_corpus_out(ds)


def test_fold_test_sets_partition_dataset(tmp_path):
    ds = _dataset(tmp_path, ["a", "b", "c"], n_per=3)
    folds = leave_one_corpus_out(ds)
    seen = [uid for f in folds for uid in f.test_ids]
    assert sorted(seen) == sorted(ds.utterances)
    for f in folds:
        assert set(f.test_ids).isdisjoint(f.train_ids)
        assert sorted(f.test_ids + f.train_ids) == sorted(ds.utterances)


def _example(label, wer, duration_ms=1000):
    return LabeledExample(features=(0.0,), label=label, wer=wer,
                          duration_ms=duration_ms, corpus="c")


def test_evaluate_all_correct_all_low():
    test = [_example(Label.LOW, 0.0) for _ in range(4)]
    r = evaluate_selection(test, [Label.LOW] * 4)
    assert r.precision == 1.0
    assert r.recall == 1.0
    assert r.pct_duration_selected == 100.0


def test_evaluate_nothing_selected():
    test = [_example(Label.LOW, 0.1), _example(Label.HIGH, 0.9)]
    r = evaluate_selection(test, [Label.HIGH, Label.HIGH])
    assert r.precision is None          # undefined, rendered as a dash
    assert r.recall == 0.0
    assert r.pct_duration_selected == 0.0
    assert r.wer_median_selected is None  # empty selection is never 0


def test_evaluate_hand_counted_case():
    # 6 utterances: 3 LOW; 2 of them selected plus 1 false positive
    test = [
        _example(Label.LOW, 0.0), _example(Label.LOW, 0.1),
        _example(Label.LOW, 0.2), _example(Label.HIGH, 0.8),
        _example(Label.HIGH, 0.9), _example(Label.HIGH, 1.0),
    ]
    preds = [Label.LOW, Label.LOW, Label.HIGH, Label.LOW,
             Label.HIGH, Label.HIGH]
    r = evaluate_selection(test, preds)
    assert r.precision == pytest.approx(2 / 3)
    assert r.recall == pytest.approx(2 / 3)
    assert (r.tp, r.fp, r.tn, r.fn) == (2, 1, 2, 1)


def test_evaluate_duration_weighted_recall():
    test = [_example(Label.LOW, 0.0, duration_ms=3000),
            _example(Label.LOW, 0.0, duration_ms=1000),
            _example(Label.HIGH, 0.9, duration_ms=1000)]
    r = evaluate_selection(test, [Label.LOW, Label.HIGH, Label.HIGH])
    assert r.recall == pytest.approx(1 / 2)
    assert r.recall_duration == pytest.approx(3 / 4)


def test_evaluate_empty_test_set_is_an_error():
    with pytest.raises(DataError):
        evaluate_selection([], [])


def test_mean_row_reproduces_published_arithmetic():
    folds = []
    for corpus, precision in (("ber", 0.78), ("luc", 0.76),
                              ("sod", 0.77), ("war", 0.85)):
        folds.append(FoldResult(
            test_corpus=corpus, train_corpora=(), tp=1, fp=1, tn=1, fn=1,
            precision=precision, recall=0.5, recall_duration=0.5,
            wer_median_selected=0.0, wer_mean_selected=0.2,
            wer_median_all=0.5, wer_mean_all=0.5,
            pct_duration_selected=10.0, pct_count_selected=10.0))
    mean = mean_fold_result(folds)
    assert mean.precision == pytest.approx(0.79, abs=1e-12)


def test_mean_row_undefined_when_any_fold_undefined():
    defined = FoldResult(test_corpus="a", train_corpora=(), tp=1, fp=0, tn=1,
                         fn=0, precision=1.0, recall=1.0, recall_duration=1.0,
                         wer_median_selected=0.0, wer_mean_selected=0.0,
                         wer_median_all=0.1, wer_mean_all=0.1,
                         pct_duration_selected=50.0, pct_count_selected=50.0)
    undefined = dataclasses.replace(defined, test_corpus="b", precision=None,
                                    wer_median_selected=None,
                                    wer_mean_selected=None)
    mean = mean_fold_result([defined, undefined])
    assert mean.precision is None
    assert mean.recall == 1.0


def _synth_dataset(tmp_path, noise, seed=77, n=60, corpora=3):
    cfg = SynthConfig(seed=seed, corpora=corpora, utterances_per_corpus=n,
                      vocabulary_size=120, low_wer_fraction=0.45,
                      feature_noise=noise, duration_range_ms=(400, 6000))
    return parse_manifest(generate(cfg, tmp_path / "synth").values())


def test_perfect_features_give_perfect_folds(tmp_path):
    ds = _synth_dataset(tmp_path, noise=0.0)
    result = run_cv(ds, fp_cost=1.5, config=CvConfig(seed=0))
    for fold in result.folds:
        assert fold.precision == 1.0
        assert fold.recall == 1.0


def test_no_leakage_from_test_fold(tmp_path):
    ds = _synth_dataset(tmp_path, noise=0.8, n=40)
    labeled, _ = collect_labeled(ds)
    folds = leave_one_corpus_out(ds)
    fold = folds[0]

    from asrsel.features import fit_standardizer, transform
    from asrsel.svm import make_label, train

    def train_fold(corrupt_test: bool):
        train_utts = [u for u in labeled if u.corpus != fold.test_corpus]
        test_utts = [u for u in labeled if u.corpus == fold.test_corpus]
        if corrupt_test:
            test_utts = [dataclasses.replace(
                u, features=dataclasses.replace(
                    u.features,
                    values=tuple(999.0 for _ in u.features.values),
                    mask=tuple(True for _ in u.features.mask)))
                for u in test_utts]
        standardizer = fit_standardizer([u.features for u in train_utts])
        examples = [LabeledExample(tuple(transform(standardizer, u.features)),
                                   make_label(u.wer), u.wer, u.duration_ms,
                                   u.corpus) for u in train_utts]
        return train(examples, fp_cost=1.5, seed=0)

    assert train_fold(False).weights == train_fold(True).weights


def test_run_cv_fold_structure_and_partition(tmp_path):
    ds = _synth_dataset(tmp_path, noise=1.0, n=30, corpora=4)
    result = run_cv(ds, fp_cost=1.0, config=CvConfig(seed=0))
    assert len(result.folds) == 4
    assert {f.test_corpus for f in result.folds} == set(ds.corpora)
    for f in result.folds:
        assert f.test_corpus not in f.train_corpora
        assert len(f.train_corpora) == 3


def test_sweep_single_point_equals_run_cv(tmp_path):
    ds = _synth_dataset(tmp_path, noise=0.8, n=30)
    cfg = CvConfig(seed=0)
    sweep = sweep_fp_cost(ds, [1.0], cfg)
    single = run_cv(ds, 1.0, cfg)
    assert sweep.runs[0] == single


def test_sweep_uses_identical_folds_across_grid(tmp_path):
    ds = _synth_dataset(tmp_path, noise=0.8, n=30)
    sweep = sweep_fp_cost(ds, [1.0, 1.5, 2.0], CvConfig(seed=0))
    fold_ids = [[(f.test_corpus, f.train_corpora) for f in run.folds]
                for run in sweep.runs]
    assert fold_ids[0] == fold_ids[1] == fold_ids[2]


def test_training_errors_carry_fold_context(tmp_path):
    # every utterance transcribed perfectly: a single class in every fold
    utts, hyps, aligns, acs = [], [], [], []
    for corpus in ("east", "west"):
        for i in range(3):
            uid = f"{corpus}{i}"
            utts.append(utt_row(uid, corpus=corpus, start_s=2.0 * i,
                                end_s=2.0 * i + 1.0, reference="x y"))
            hyps.append(hyp_row(uid, "strong", [("x", -0.1), ("y", -0.1)]))
            hyps.append(hyp_row(uid, "weak", [("x", -0.4), ("y", -0.4)]))
            aligns.append({"utterance_id": uid,
                           "words": [{"text": "x", "logprob": -0.03},
                                     {"text": "y", "logprob": -0.04}]})
            acs.append({"utterance_id": uid, "snr_db": 8.0, "c50_db": 16.0})
    paths = [write_jsonl(tmp_path / "utterances.jsonl", "utterances", utts),
             write_jsonl(tmp_path / "hypotheses.jsonl", "hypotheses", hyps),
             write_jsonl(tmp_path / "alignment.jsonl", "alignment", aligns),
             write_jsonl(tmp_path / "acoustics.jsonl", "acoustics", acs)]
    ds = parse_manifest(paths)
    from asrsel.errors import TrainingError
    with pytest.raises(TrainingError, match="fold east"):
        run_cv(ds, 1.5, CvConfig(seed=0))


def test_sweep_baseline_row(tmp_path):
    ds = _synth_dataset(tmp_path, noise=0.8, n=30)
    sweep = sweep_fp_cost(ds, [1.0, 1.5], CvConfig(seed=0))
    assert sweep.baseline.pct_duration_selected == 100.0
    assert sweep.baseline.precision is None
    assert sweep.baseline.wer_mean_selected == sweep.baseline.wer_mean_all


def test_selected_wer_improves_on_baseline(tmp_path):
    ds = _synth_dataset(tmp_path, noise=0.5, n=60)
    result = run_cv(ds, fp_cost=1.5, config=CvConfig(seed=0))
    assert result.mean.wer_mean_selected < result.mean.wer_mean_all


def test_pct_selected_monotone_in_decision_threshold(tmp_path):
    ds = _synth_dataset(tmp_path, noise=1.0, n=50, corpora=2)
    labeled, _ = collect_labeled(ds)
    from asrsel.features import fit_standardizer, transform
    from asrsel.svm import make_label, predict, train

    standardizer = fit_standardizer([u.features for u in labeled])
    examples = [LabeledExample(tuple(transform(standardizer, u.features)),
                               make_label(u.wer), u.wer, u.duration_ms, u.corpus)
                for u in labeled]
    model = train(examples, fp_cost=1.5, seed=0)
    decisions = [predict(model, ex.features)[1] for ex in examples]

    last_pct = None
    for threshold in np.linspace(-2.0, 2.0, 17):
        preds = [Label.LOW if d >= threshold else Label.HIGH for d in decisions]
        pct = evaluate_selection(examples, preds).pct_duration_selected
        if last_pct is not None:
            assert pct <= last_pct + 1e-12
        last_pct = pct


def test_collect_labeled_skips_unlabelable(tmp_path):
    utts = [utt_row("u1", reference="a b"), utt_row("u2"),
            utt_row("u3", reference="[...]")]
    hyps = [hyp_row("u1", "strong", [("a", -0.1), ("b", -0.2)]),
            hyp_row("u2", "strong", [("a", -0.1)]),
            hyp_row("u3", "strong", [("x", -0.3)])]
    paths = [write_jsonl(tmp_path / "utterances.jsonl", "utterances", utts),
             write_jsonl(tmp_path / "hypotheses.jsonl", "hypotheses", hyps)]
    labeled, skipped = collect_labeled(parse_manifest(paths))
    assert [u.utterance_id for u in labeled] == ["u1"]
    assert skipped == {"no_reference": 1, "empty_reference_after_normalization": 1}
    assert labeled[0].wer == 0.0
