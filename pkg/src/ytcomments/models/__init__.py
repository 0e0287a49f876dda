"""Five classifiers behind one train/predict contract."""
from .base import (
    DEFAULTS,
    KINDS,
    DimensionMismatch,
    EstimatorSpec,
    FingerprintMismatch,
    SingleClassError,
    TrainedModel,
    UnsupportedHyperparameter,
    canonical_kind,
    predict,
    predict_indices,
    predict_scores,
    train,
)
from .persist import (
    MODEL_FORMAT_VERSION,
    ModelFormatError,
    VersionMismatch,
    load_model,
    load_model_with_metadata,
    save_model,
)

__all__ = [
    "DEFAULTS", "KINDS", "MODEL_FORMAT_VERSION",
    "DimensionMismatch", "EstimatorSpec", "FingerprintMismatch", "ModelFormatError", "SingleClassError",
    "TrainedModel", "UnsupportedHyperparameter", "VersionMismatch",
    "canonical_kind", "load_model", "load_model_with_metadata", "predict", "predict_indices",
    "predict_scores", "save_model", "train",
]
