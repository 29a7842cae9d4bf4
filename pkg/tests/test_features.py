from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asrsel.errors import FeaturizeError
from asrsel.features import (FEATURE_NAMES, FeatureVector, assemble,
                             confidence_stats, feature_from_row, feature_row,
                             fit_standardizer, transform)
from asrsel.ingest import (AcousticsRecord, HypothesisRecord, UtteranceBundle,
                           UtteranceRecord, WordScore)


def _bundle(uid="u1", weak=None, strong=None, alignment=None, acoustics=None):
    utt = UtteranceRecord(id=uid, corpus="north", recording="r01",
                          start_s=0.0, end_s=2.0)
    return UtteranceBundle(utterance=utt, weak=weak, strong=strong,
                           alignment=alignment, acoustics=acoustics)


def _hyp(engine, words):
    return HypothesisRecord(utterance_id="u1", engine=engine,
                            words=tuple(WordScore(text=t, logprob=lp)
                                        for t, lp in words))


def test_confidence_stats_arithmetic():
    mean, lo, hi = confidence_stats([-0.1, -0.5, -0.2])
    assert mean == pytest.approx(-0.26666666666, abs=1e-9)
    assert lo == -0.5 and hi == -0.1


def test_confidence_stats_singleton():
    assert confidence_stats([-0.3]) == (-0.3, -0.3, -0.3)


def test_confidence_stats_empty_is_missing():
    assert confidence_stats([]) is None


def test_assemble_identical_hypotheses_zero_divergence():
    words = [("go", -0.2), ("home", -0.3)]
    fv = assemble(_bundle(weak=_hyp("weak", words), strong=_hyp("strong", words)))
    assert fv.get("divergence") == 0.0


def test_assemble_normalizes_before_divergence():
    weak = _hyp("weak", [("Go", -0.2), ("home.", -0.3)])
    strong = _hyp("strong", [("go", -0.2), ("home", -0.3)])
    fv = assemble(_bundle(weak=weak, strong=strong))
    assert fv.get("divergence") == 0.0


def test_assemble_missing_acoustics_flagged():
    words = [("a", -0.2)]
    fv = assemble(_bundle(weak=_hyp("weak", words), strong=_hyp("strong", words)))
    assert fv.get("snr_db") is None
    assert fv.get("c50_db") is None
    assert fv.mask[FEATURE_NAMES.index("snr_db")] is False


def test_assemble_requires_a_hypothesis():
    with pytest.raises(FeaturizeError):
        assemble(_bundle())


def test_assemble_single_engine_leaves_divergence_missing():
    fv = assemble(_bundle(strong=_hyp("strong", [("a", -0.1)])))
    assert fv.get("divergence") is None
    assert fv.get("strong_mean_lp") == -0.1


def test_confidence_triple_ordering_invariant():
    words = [("a", -0.9), ("b", -0.1), ("c", -0.4)]
    fv = assemble(_bundle(strong=_hyp("strong", words),
                          acoustics=AcousticsRecord("u1", 5.0, 10.0)))
    assert fv.get("strong_min_lp") <= fv.get("strong_mean_lp") <= fv.get("strong_max_lp")


def _fv(**named):
    values = [named.get(name) for name in FEATURE_NAMES]
    return FeatureVector.from_values(values)


def test_fit_standardizer_population_convention():
    train = [_fv(**{n: 0.0 for n in FEATURE_NAMES}),
             _fv(**{n: 2.0 for n in FEATURE_NAMES})]
    s = fit_standardizer(train)
    assert all(m == 1.0 for m in s.means)
    assert all(sd == 1.0 for sd in s.stds)  # population std of {0, 2}


def test_fit_standardizer_constant_feature():
    train = [_fv(**{n: 3.0 for n in FEATURE_NAMES})] * 2
    s = fit_standardizer(train)
    assert s.stds[0] == 0.0
    z = transform(s, _fv(**{n: 5.0 for n in FEATURE_NAMES}))
    assert z[0] == 0.0  # zero spread maps to 0 regardless of the value


def test_fit_standardizer_never_observed_feature_errors():
    values = {n: 1.0 for n in FEATURE_NAMES}
    values["snr_db"] = None
    with pytest.raises(FeaturizeError, match="snr_db"):
        fit_standardizer([_fv(**values), _fv(**values)])


def test_transform_at_mean_is_zero():
    rng = np.random.RandomState(0)
    train = [_fv(**{n: float(v) for n, v in zip(FEATURE_NAMES, rng.randn(12))})
             for _ in range(10)]
    s = fit_standardizer(train)
    z = transform(s, _fv(**{n: m for n, m in zip(FEATURE_NAMES, s.means)}))
    assert np.allclose(z, 0.0)


def test_transform_fully_missing_is_zero():
    rng = np.random.RandomState(1)
    train = [_fv(**{n: float(v) for n, v in zip(FEATURE_NAMES, rng.randn(12))})
             for _ in range(5)]
    s = fit_standardizer(train)
    z = transform(s, FeatureVector.from_values([None] * 12))
    assert np.allclose(z, 0.0)


@settings(max_examples=50)
@given(st.integers(min_value=2, max_value=40), st.integers(0, 2**31 - 1))
def test_transformed_train_fold_is_zero_mean_unit_std(n, seed):
    rng = np.random.RandomState(seed)
    data = rng.randn(n, 12) * rng.uniform(0.5, 4.0, size=12) + rng.randn(12)
    train = [_fv(**{name: float(v) for name, v in zip(FEATURE_NAMES, row)})
             for row in data]
    s = fit_standardizer(train)
    z = np.array([transform(s, fv) for fv in train])
    for k in range(12):
        if s.stds[k] == 0.0:
            continue
        assert abs(z[:, k].mean()) < 1e-9
        assert abs(z[:, k].std() - 1.0) < 1e-9


@given(st.floats(min_value=0.0, max_value=1.0))
def test_transform_is_affine_per_coordinate(alpha):
    rng = np.random.RandomState(7)
    data = rng.randn(6, 12)
    train = [_fv(**{name: float(v) for name, v in zip(FEATURE_NAMES, row)})
             for row in data]
    s = fit_standardizer(train)
    x, y = train[0], train[1]
    mix = _fv(**{name: alpha * xv + (1 - alpha) * yv
                 for name, xv, yv in zip(FEATURE_NAMES, x.values, y.values)})
    lhs = transform(s, mix)
    rhs = alpha * transform(s, x) + (1 - alpha) * transform(s, y)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_feature_row_round_trip():
    fv = _fv(divergence=0.5, strong_mean_lp=-1.0, snr_db=3.0)
    row = feature_row("u1", fv)
    assert row["utterance_id"] == "u1"
    assert feature_from_row(row) == fv


def test_assemble_deterministic(tiny_data_dir):
    from asrsel.ingest import parse_manifest
    ds = parse_manifest(sorted(tiny_data_dir.glob("*.jsonl")))
    bundle = ds.bundles()[0]
    assert assemble(bundle) == assemble(bundle)
