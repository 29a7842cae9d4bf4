"""Per-utterance feature vectors and train-set standardization.

Twelve features feed the classifier: the weak-vs-strong hypothesis
divergence, three word-confidence statistics for each of the strong ASR,
weak ASR and forced-alignment outputs, and the two acoustic quality
estimates. A presence mask tracks which entries were actually observed;
missing entries are imputed with the training-fold mean (equivalently zero
after standardization).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import align
from .errors import FeaturizeError
from .ingest import UtteranceBundle
from .textnorm import NormalizationPolicy, normalize

FEATURE_NAMES: tuple[str, ...] = (
    "divergence",
    "strong_mean_lp", "strong_min_lp", "strong_max_lp",
    "weak_mean_lp", "weak_min_lp", "weak_max_lp",
    "align_mean_lp", "align_min_lp", "align_max_lp",
    "snr_db", "c50_db",
)

N_FEATURES = len(FEATURE_NAMES)


@dataclass(frozen=True)
class FeatureVector:
    """Feature values in FEATURE_NAMES order; None marks a missing entry."""

    values: tuple[float | None, ...]
    mask: tuple[bool, ...]

    def __post_init__(self) -> None:
        assert len(self.values) == N_FEATURES and len(self.mask) == N_FEATURES
        assert all((v is not None) == m for v, m in zip(self.values, self.mask))

    def get(self, name: str) -> float | None:
        return self.values[FEATURE_NAMES.index(name)]

    @staticmethod
    def from_values(values: list[float | None]) -> "FeatureVector":
        return FeatureVector(values=tuple(values),
                             mask=tuple(v is not None for v in values))


def confidence_stats(word_logprobs: list[float]) -> tuple[float, float, float] | None:
    """(mean, min, max) of per-word log-probabilities; None when empty.

    An engine that produced no words yields no confidence evidence; the
    caller records the gap in the presence mask.
    """
    if not word_logprobs:
        return None
    return (sum(word_logprobs) / len(word_logprobs),
            min(word_logprobs), max(word_logprobs))


def assemble(bundle: UtteranceBundle,
             policy: NormalizationPolicy = NormalizationPolicy()) -> FeatureVector:
    """Compute the 12-entry feature vector for one joined utterance bundle.

    Hypothesis texts are normalized before the divergence computation so
    casing or punctuation differences between the engines do not register
    as disagreement. Requires at least one hypothesis record.
    """
    if bundle.weak is None and bundle.strong is None:
        raise FeaturizeError(
            f"utterance {bundle.utterance.id!r} has no hypothesis records")

    values: list[float | None] = [None] * N_FEATURES

    if bundle.weak is not None and bundle.strong is not None:
        weak_toks = normalize(bundle.weak.text, policy)
        strong_toks = normalize(bundle.strong.text, policy)
        values[0] = align.divergence(weak_toks, strong_toks)

    for base, record in (
        (1, bundle.strong),
        (4, bundle.weak),
        (7, bundle.alignment),
    ):
        if record is None:
            continue
        stats = confidence_stats([w.logprob for w in record.words])
        if stats is not None:
            values[base], values[base + 1], values[base + 2] = stats[0], stats[1], stats[2]

    if bundle.acoustics is not None:
        values[10] = bundle.acoustics.snr_db
        values[11] = bundle.acoustics.c50_db

    return FeatureVector.from_values(values)


@dataclass(frozen=True)
class Standardizer:
    """Per-feature z-scoring statistics fitted on training data only.

    Missing entries are imputed with the per-feature training mean before
    scaling; a feature with zero spread maps to 0.
    """

    means: tuple[float, ...]
    stds: tuple[float, ...]
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def as_dict(self) -> dict:
        return {"means": list(self.means), "stds": list(self.stds),
                "feature_names": list(self.feature_names)}

    @staticmethod
    def from_dict(obj: dict) -> "Standardizer":
        return Standardizer(means=tuple(float(x) for x in obj["means"]),
                            stds=tuple(float(x) for x in obj["stds"]),
                            feature_names=tuple(obj["feature_names"]))


def fit_standardizer(train: list[FeatureVector]) -> Standardizer:
    """Mean/std per feature over the observed (unmasked) training entries.

    Standard deviation uses the population convention. A feature that was
    never observed in training cannot be imputed and is an error.
    """
    if not train:
        raise FeaturizeError("cannot fit a standardizer on an empty training set")
    means: list[float] = []
    stds: list[float] = []
    for k, name in enumerate(FEATURE_NAMES):
        observed = np.array([fv.values[k] for fv in train if fv.mask[k]], dtype=np.float64)
        if observed.size == 0:
            raise FeaturizeError(f"feature {name!r} was never observed in the training set")
        means.append(float(observed.mean()))
        stds.append(float(observed.std()))
    return Standardizer(means=tuple(means), stds=tuple(stds))


def transform(s: Standardizer, v: FeatureVector) -> np.ndarray:
    """Impute missing entries with the training mean, then z-score."""
    out = np.empty(N_FEATURES, dtype=np.float64)
    for k in range(N_FEATURES):
        x = v.values[k] if v.mask[k] else s.means[k]
        out[k] = 0.0 if s.stds[k] == 0.0 else (x - s.means[k]) / s.stds[k]
    return out


def feature_row(utterance_id: str, fv: FeatureVector) -> dict:
    return {"utterance_id": utterance_id,
            "values": [v for v in fv.values],
            "mask": [m for m in fv.mask]}


def feature_from_row(row: dict) -> FeatureVector:
    values = [float(v) if m else None for v, m in zip(row["values"], row["mask"])]
    return FeatureVector.from_values(values)
