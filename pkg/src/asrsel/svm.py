"""Cost-sensitive linear SVM separating low-WER from high-WER utterances.

The positive class is the low-WER ("acceptable") class, so a false
positive is a bad transcript let through; its misclassification cost is
the tunable knob trading precision against recall. Training solves the
class-weighted soft-margin problem

    min_w  (1/2) ||w||^2 + C * sum_i c_i * max(0, 1 - y_i * w.x_i)

by dual coordinate descent, with the bias folded in as a constant
augmented feature (value 1, never standardized) so the problem stays
strictly convex and ports can match numerically. Training is
single-threaded and seeded, hence bit-deterministic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError, TrainingError
from .features import FEATURE_NAMES, FeatureVector, Standardizer, transform
from .records import atomic_write_text

MODEL_SCHEMA = "reliability-model"
MODEL_MAJOR_VERSION = 1

WER_THRESHOLD_DEFAULT = 0.30


class Label(int, Enum):
    LOW = 1       # acceptable: transcript kept
    HIGH = -1     # discard: transcript not trusted


def make_label(wer: float, threshold: float = WER_THRESHOLD_DEFAULT) -> Label:
    """LOW when wer <= threshold (boundary inclusive), else HIGH."""
    if wer < 0:
        raise ValueError(f"wer must be >= 0, got {wer}")
    return Label.LOW if wer <= threshold else Label.HIGH


@dataclass(frozen=True)
class LabeledExample:
    features: tuple[float, ...]
    label: Label
    wer: float = 0.0
    duration_ms: int = 0
    corpus: str = ""


@dataclass(frozen=True)
class ReliabilityModel:
    weights: tuple[float, ...]
    bias: float
    standardizer: Standardizer | None
    fp_cost: float
    fn_cost: float
    wer_threshold: float
    regularization: float
    seed: int
    feature_names: tuple[str, ...]
    dataset_checksum: str = ""
    epochs_run: int = 0

    def decision_value(self, standardized: Sequence[float]) -> float:
        return float(np.dot(self.weights, standardized) + self.bias)


def _examples_checksum(examples: Sequence[LabeledExample]) -> str:
    payload = [[list(e.features), int(e.label), e.wer, e.duration_ms, e.corpus]
               for e in examples]
    blob = json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _solve_dual_cd(x: np.ndarray, y: np.ndarray, box: np.ndarray,
                   seed: int, tol: float, max_epochs: int) -> tuple[np.ndarray, int]:
    """Dual coordinate descent for the weighted L1-loss SVM.

    ``x`` already carries the augmented bias column. ``box[i]`` is the upper
    bound C*c_i on the dual variable of example i. Returns the augmented
    weight vector and the number of epochs run.

    Examples whose dual variable sits at a bound with a gradient pointing
    further out are temporarily shrunk from the working set; convergence is
    only declared after a full pass over all examples keeps the largest
    projected-gradient violation below ``tol``, so shrinking is a pure
    speedup and the stopping contract is unchanged.
    """
    n = x.shape[0]
    alpha = np.zeros(n, dtype=np.float64)
    w = np.zeros(x.shape[1], dtype=np.float64)
    q_diag = np.einsum("ij,ij->i", x, x)
    rng = np.random.RandomState(seed)

    active = np.arange(n)
    pg_max_old = np.inf
    pg_min_old = -np.inf
    epochs = 0
    for epoch in range(max_epochs):
        epochs = epoch + 1
        order = rng.permutation(len(active))
        pg_max_new = -np.inf
        pg_min_new = np.inf
        max_violation = 0.0
        keep = []
        for pos in order:
            i = int(active[pos])
            xi = x[i]
            yi = y[i]
            g = yi * float(np.dot(w, xi)) - 1.0
            a = alpha[i]
            if a <= 0.0:
                if g > pg_max_old:
                    continue  # shrink: stuck at the lower bound
                pg = min(g, 0.0)
            elif a >= box[i]:
                if g < pg_min_old:
                    continue  # shrink: stuck at the upper bound
                pg = max(g, 0.0)
            else:
                pg = g
            keep.append(i)
            pg_max_new = max(pg_max_new, pg)
            pg_min_new = min(pg_min_new, pg)
            if pg != 0.0:
                max_violation = max(max_violation, abs(pg))
                a_new = min(max(a - g / q_diag[i], 0.0), box[i])
                if a_new != a:
                    w += (a_new - a) * yi * xi
                    alpha[i] = a_new
        if max_violation < tol:
            if len(active) == n:
                break
            # converged on the shrunk set; confirm over everything
            active = np.arange(n)
            pg_max_old = np.inf
            pg_min_old = -np.inf
            continue
        active = np.array(sorted(keep), dtype=np.intp) if keep else np.arange(n)
        pg_max_old = pg_max_new if pg_max_new > 0 else np.inf
        pg_min_old = pg_min_new if pg_min_new < 0 else -np.inf
    return w, epochs


def train(examples: Sequence[LabeledExample], fp_cost: float, fn_cost: float = 1.0,
          regularization: float = 1.0, seed: int = 0, *,
          standardizer: Standardizer | None = None,
          feature_names: Sequence[str] | None = None,
          wer_threshold: float = WER_THRESHOLD_DEFAULT,
          tol: float = 1e-6, max_epochs: int = 10_000,
          dataset_checksum: str | None = None) -> ReliabilityModel:
    """Fit the classifier on (already standardized) feature vectors.

    HIGH-class examples carry cost ``fp_cost`` (their slack lets bad
    transcripts through); LOW-class examples carry ``fn_cost``. Examples
    are visited in a seeded random order each epoch, so a fixed seed gives
    bit-identical weights on every run.
    """
    if fp_cost <= 0:
        raise ValueError(f"fp_cost must be > 0, got {fp_cost}")
    if not examples:
        raise TrainingError("degenerate training set: no examples")
    labels = {e.label for e in examples}
    if len(labels) < 2:
        raise TrainingError(
            f"degenerate training set: single class {next(iter(labels)).name}")

    dim = len(examples[0].features)
    if feature_names is None:
        feature_names = FEATURE_NAMES if dim == len(FEATURE_NAMES) else \
            tuple(f"f{i}" for i in range(dim))

    x = np.array([e.features for e in examples], dtype=np.float64)
    x = np.hstack([x, np.ones((x.shape[0], 1))])
    y = np.array([float(e.label) for e in examples], dtype=np.float64)
    cost = np.where(y < 0, fp_cost, fn_cost)
    box = regularization * cost

    w_aug, epochs = _solve_dual_cd(x, y, box, seed=seed, tol=tol, max_epochs=max_epochs)

    return ReliabilityModel(
        weights=tuple(float(v) for v in w_aug[:-1]),
        bias=float(w_aug[-1]),
        standardizer=standardizer,
        fp_cost=float(fp_cost),
        fn_cost=float(fn_cost),
        wer_threshold=float(wer_threshold),
        regularization=float(regularization),
        seed=int(seed),
        feature_names=tuple(feature_names),
        dataset_checksum=dataset_checksum if dataset_checksum is not None
        else _examples_checksum(examples),
        epochs_run=epochs,
    )


def predict(model: ReliabilityModel,
            raw: FeatureVector | Sequence[float]) -> tuple[Label, float]:
    """Classify one utterance; returns (label, decision value).

    A raw FeatureVector is passed through the model's standardizer first;
    a plain sequence is taken to be already standardized. Predicted LOW
    iff the decision value is >= 0.
    """
    if isinstance(raw, FeatureVector):
        if model.standardizer is None:
            raise DataError("model has no standardizer; pass standardized values")
        z = transform(model.standardizer, raw)
    else:
        z = np.asarray(raw, dtype=np.float64)
    value = model.decision_value(z)
    return (Label.LOW if value >= 0.0 else Label.HIGH), value


def save_model(model: ReliabilityModel, path: str | Path) -> None:
    doc = {
        "schema": MODEL_SCHEMA,
        "version": MODEL_MAJOR_VERSION,
        "feature_names": list(model.feature_names),
        "weights": list(model.weights),
        "bias": model.bias,
        "standardizer": model.standardizer.as_dict() if model.standardizer else None,
        "fp_cost": model.fp_cost,
        "fn_cost": model.fn_cost,
        "wer_threshold": model.wer_threshold,
        "regularization": model.regularization,
        "seed": model.seed,
        "dataset_checksum": model.dataset_checksum,
        "epochs_run": model.epochs_run,
    }
    atomic_write_text(path, json.dumps(doc, ensure_ascii=False, indent=2) + "\n")


def load_model(path: str | Path) -> ReliabilityModel:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: corrupt model file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != MODEL_SCHEMA:
        raise DataError(f"{path}: not a {MODEL_SCHEMA} document")
    version = doc.get("version")
    if not isinstance(version, int) or version > MODEL_MAJOR_VERSION:
        raise DataError(f"{path}: model version {version!r} is newer than this tool "
                        f"supports (<= {MODEL_MAJOR_VERSION})")
    try:
        return ReliabilityModel(
            weights=tuple(float(v) for v in doc["weights"]),
            bias=float(doc["bias"]),
            standardizer=Standardizer.from_dict(doc["standardizer"])
            if doc.get("standardizer") else None,
            fp_cost=float(doc["fp_cost"]),
            fn_cost=float(doc["fn_cost"]),
            wer_threshold=float(doc["wer_threshold"]),
            regularization=float(doc["regularization"]),
            seed=int(doc["seed"]),
            feature_names=tuple(doc["feature_names"]),
            dataset_checksum=str(doc.get("dataset_checksum", "")),
            epochs_run=int(doc.get("epochs_run", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: corrupt model file: {exc}") from exc
