"""Reliability filtering for ASR transcripts of longform child-centered audio.

The pipeline predicts utterance-level word error rate from signal- and
confidence-derived features with a cost-sensitive linear classifier, keeps
only the utterances whose automatic transcripts can be trusted, and
evaluates both the selection quality and the lexical fidelity of the
result.
"""

__version__ = "0.1.0"

from .align import EditSummary, divergence, edit_align, wer
from .features import FEATURE_NAMES, FeatureVector, Standardizer, assemble, \
    confidence_stats, fit_standardizer, transform
from .ingest import Dataset, dataset_stats, parse_manifest
from .svm import Label, LabeledExample, ReliabilityModel, load_model, make_label, \
    predict, save_model, train
from .textnorm import NormalizationPolicy, Pos, TaggedToken, load_tagged, \
    normalize, tag

__all__ = [
    "__version__",
    "EditSummary", "edit_align", "wer", "divergence",
    "FEATURE_NAMES", "FeatureVector", "Standardizer", "assemble",
    "confidence_stats", "fit_standardizer", "transform",
    "Dataset", "parse_manifest", "dataset_stats",
    "Label", "LabeledExample", "ReliabilityModel", "make_label", "train",
    "predict", "save_model", "load_model",
    "NormalizationPolicy", "Pos", "TaggedToken", "normalize", "tag",
    "load_tagged",
]
