"""Cross-validation, grid search, F1 scoring, learning curves and per-class reports.

Preprocessing is stateless, so each comment is tokenized once and reused. The
vectorizer (vocabulary, document frequencies, scaler) is stateful and is always
fitted on the training side of a split only.
"""
from __future__ import annotations

import csv
import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import features
from .corpus import CLASSES, CommentClass, Dataset
from .features import Vectorizer, VectorizerConfig
from .models import (
    EstimatorSpec,
    SingleClassError,
    TrainedModel,
    UnsupportedHyperparameter,
    canonical_kind,
    predict,
    train,
)
from .preprocess import PipelineConfig, default_pipeline, run_many

logger = logging.getLogger(__name__)

REPORT_FORMAT = "ytcomments-evaluation-report"
REPORT_VERSION = 1
DEFAULT_LEARNING_SIZES = (0.2, 0.4, 0.6, 0.8, 1.0)

# Candidate values per kind, in listing order; enumeration order follows the key order.
SEARCH_GRIDS = {
    "linear_svc": {"C": [50, 10, 1.0, 0.1, 0.01]},
    "logistic_regression": {
        "C": [100, 10, 1.0, 0.1, 0.01],
        "solver": ["newton-cg", "lbfgs", "liblinear"],
        "penalty": ["l1", "l2", "elasticnet", "none"],
    },
    "multinomial_nb": {"fit_prior": [True, False], "alpha": [0, 0.5, 1]},
    "random_forest": {
        "n_estimators": [10, 100, 1000],
        "max_features": ["sqrt", "log2"],
        "criterion": ["gini", "entropy"],
    },
    "decision_tree": {"criterion": ["gini", "entropy"], "max_features": ["sqrt", "log2", "auto", None]},
}

BEST_VALUES = {
    "df_counts": {
        "linear_svc": {"C": 1.0},
        "logistic_regression": {"C": 1.0, "solver": "newton-cg", "penalty": "l2"},
        "multinomial_nb": {"fit_prior": True, "alpha": 1.0},
        "random_forest": {"n_estimators": 1000, "max_features": "log2", "criterion": "entropy"},
        "decision_tree": {"criterion": "gini", "max_features": None},
    },
    "tfidf": {
        "linear_svc": {"C": 1.0},
        "logistic_regression": {"C": 10.0, "solver": "liblinear", "penalty": "l2"},
        "multinomial_nb": {"fit_prior": False, "alpha": 1.0},
        "random_forest": {"n_estimators": 1000, "max_features": "log2", "criterion": "entropy"},
        "decision_tree": {"criterion": "entropy", "max_features": None},
    },
}


class GridSearchError(RuntimeError):
    def __init__(self, causes: list):
        self.causes = causes
        lines = "; ".join(f"{c['params']}: {c['reason']}" for c in causes)
        super().__init__(f"every grid cell failed: {lines}")


class ReportVersionError(ValueError):
    pass


def best_spec(kind: str, scheme: str, seed: int = 0) -> EstimatorSpec:
    kind = canonical_kind(kind)
    return EstimatorSpec(kind, BEST_VALUES[features.canonical_scheme(scheme)][kind], seed)


# grids and folds ---------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    kind: str
    values: dict

    def __post_init__(self):
        if not self.values or any(len(v) == 0 for v in self.values.values()):
            raise ValueError("grid needs at least one value per hyperparameter")

    @classmethod
    def default(cls, kind: str) -> "Grid":
        kind = canonical_kind(kind)
        return cls(kind, {k: list(v) for k, v in SEARCH_GRIDS[kind].items()})

    @property
    def size(self) -> int:
        n = 1
        for v in self.values.values():
            n *= len(v)
        return n

    def cells(self) -> list:
        names = list(self.values)
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.values[k] for k in names))]


@dataclass(frozen=True)
class CVConfig:
    folds: int = 5
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if int(self.folds) != self.folds or self.folds < 2:
            raise ValueError("folds must be an integer >= 2")


def kfold_indices(n: int, cv: CVConfig) -> list:
    """``(train_idx, val_idx)`` pairs; validation folds partition ``range(n)``, sizes differ by <= 1."""
    if cv.folds > n:
        raise ValueError(f"{cv.folds} folds need at least {cv.folds} rows, got {n}")
    order = np.random.default_rng(cv.seed).permutation(n) if cv.shuffle else np.arange(n)
    out = []
    for part in np.array_split(order, cv.folds):
        val = np.sort(part)
        mask = np.ones(n, dtype=bool)
        mask[val] = False
        out.append((np.nonzero(mask)[0], val))
    return out


# scoring -----------------------------------------------------------------


def accuracy(y_true: Sequence, y_pred: Sequence) -> float:
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    if not y_true:
        return 0.0
    return sum(a == b for a, b in zip(y_true, y_pred)) / len(y_true)


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class F1Report:
    macro: float
    weighted: float
    per_class: dict


def _sorted_labels(labels) -> list:
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=str)


def per_class_scores(y_true: Sequence, y_pred: Sequence, labels: Sequence) -> dict:
    out = {}
    for c in labels:
        tp = sum(1 for a, b in zip(y_true, y_pred) if a == c and b == c)
        pred = sum(1 for b in y_pred if b == c)
        sup = sum(1 for a in y_true if a == c)
        p = tp / pred if pred else 0.0
        r = tp / sup if sup else 0.0
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        out[c] = ClassScores(p, r, f, sup)
    return out


def f1_scores(y_true: Sequence, y_pred: Sequence) -> F1Report:
    """Per-class, macro (unweighted mean) and support-weighted F1 over labels seen in either input."""
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} vs {len(y_pred)}")
    labels = _sorted_labels(set(y_true) | set(y_pred))
    per = per_class_scores(y_true, y_pred, labels)
    if not labels:
        return F1Report(0.0, 0.0, {})
    macro = float(np.mean([s.f1 for s in per.values()]))
    total = sum(s.support for s in per.values())
    weighted = sum(s.f1 * s.support for s in per.values()) / total if total else 0.0
    return F1Report(macro, float(weighted), per)


def confusion_matrix(y_true: Sequence, y_pred: Sequence, labels: Sequence = CLASSES) -> np.ndarray:
    """Rows are true labels, columns predictions, both in ``labels`` order."""
    pos = {c: i for i, c in enumerate(labels)}
    m = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for a, b in zip(y_true, y_pred):
        m[pos[a], pos[b]] += 1
    return m


# feature plumbing --------------------------------------------------------


@dataclass(frozen=True)
class FeatureSetup:
    """How raw comments become a matrix: preprocessing plus vectorizer configuration."""

    pipeline: PipelineConfig = field(default_factory=default_pipeline)
    vectorizer: VectorizerConfig = field(default_factory=VectorizerConfig)


def tokenize_dataset(dataset: Dataset, pipeline: Optional[PipelineConfig] = None) -> list:
    return run_many(dataset.comments, pipeline or default_pipeline())


def _fit_features(setup: FeatureSetup, train_tokens: list, other_tokens: list) -> tuple:
    vec = Vectorizer(setup.vectorizer)
    Xtr = vec.fit_transform(train_tokens)
    Xot = vec.transform(other_tokens)
    return vec, Xtr, Xot


def _train_or_constant(spec: EstimatorSpec, X, y: list, warnings: list, where: str):
    try:
        return train(spec, X, y)
    except SingleClassError:
        only = y[0]
        warnings.append(f"{where}: training data holds one class ({only}); predicting it for every row")
        return only


def _predict(model, X) -> list:
    if isinstance(model, TrainedModel):
        return predict(model, X)
    return [model] * X.rows


@dataclass
class CVResult:
    fold_scores: list
    mean: float
    warnings: list = field(default_factory=list)
    converged: bool = True


class FoldCache:
    """Per-fold feature matrices shared by every grid cell of one search."""

    def __init__(self, tokens: list, labels: list, cv: CVConfig, setup: FeatureSetup):
        self.tokens, self.labels, self.cv, self.setup = tokens, labels, cv, setup
        self.splits = kfold_indices(len(tokens), cv)
        self._store: dict = {}
        self.warnings: list = []
        all_classes = set(labels)
        for i, (tr, _) in enumerate(self.splits):
            missing = all_classes - {labels[j] for j in tr}
            if missing:
                self.warnings.append(f"fold {i}: training part lacks {sorted(str(c) for c in missing)}")

    def get(self, i: int) -> tuple:
        hit = self._store.get(i)
        if hit is None:
            tr, va = self.splits[i]
            _, Xtr, Xva = _fit_features(self.setup, [self.tokens[j] for j in tr], [self.tokens[j] for j in va])
            hit = (Xtr, [self.labels[j] for j in tr], Xva, [self.labels[j] for j in va])
            self._store[i] = hit
        return hit


def cross_validate(spec: EstimatorSpec, train_set: Dataset, setup: FeatureSetup = FeatureSetup(),
                   cv: CVConfig = CVConfig(), *, tokens: Optional[list] = None,
                   cache: Optional[FoldCache] = None) -> CVResult:
    """Mean fold-validation accuracy; the vectorizer is refitted on each fold's training part."""
    if cache is None:
        if tokens is None:
            tokens = tokenize_dataset(train_set, setup.pipeline)
        cache = FoldCache(tokens, train_set.labels, cv, setup)
    warnings = list(cache.warnings)
    for w in warnings:
        logger.warning("%s", w)
    scores = []
    converged = True
    for i in range(len(cache.splits)):
        Xtr, ytr, Xva, yva = cache.get(i)
        model = _train_or_constant(spec, Xtr, ytr, warnings, f"fold {i}")
        if isinstance(model, TrainedModel):
            converged = converged and model.converged
        scores.append(accuracy(yva, _predict(model, Xva)))
    if not converged:
        warnings.append("optimizer did not converge on at least one fold")
    return CVResult(scores, float(np.mean(scores)), warnings, converged)


@dataclass
class CellResult:
    params: dict
    status: str  # "ok", "skipped" (unsupported) or "failed"
    mean: Optional[float] = None
    fold_scores: list = field(default_factory=list)
    reason: str = ""


@dataclass
class GridResult:
    kind: str
    best: EstimatorSpec
    best_score: float
    cells: list

    def rows(self) -> list:
        names = list(self.cells[0].params) if self.cells else []
        out = []
        for i, c in enumerate(self.cells):
            row = {"cell": i, **{k: _fmt(c.params[k]) for k in names}, "status": c.status,
                   "cv_score": "" if c.mean is None else f"{c.mean:.6f}"}
            for j, s in enumerate(c.fold_scores):
                row[f"fold_{j}"] = f"{s:.6f}"
            row["reason"] = c.reason
            out.append(row)
        return out


def _fmt(v) -> str:
    return "None" if v is None else str(v)


def grid_search(grid: Grid, train_set: Dataset, cv: CVConfig = CVConfig(), setup: FeatureSetup = FeatureSetup(),
                seed: int = 0, *, tokens: Optional[list] = None, n_jobs: int = 1) -> GridResult:
    """Every cell is cross-validated on shared fold features; the first cell with the top mean wins."""
    cells = grid.cells()
    if not cells:
        raise ValueError("empty grid")
    if tokens is None:
        tokens = tokenize_dataset(train_set, setup.pipeline)
    cache = FoldCache(tokens, train_set.labels, cv, setup)
    for i in range(len(cache.splits)):
        cache.get(i)

    def run(params):
        try:
            spec = EstimatorSpec(grid.kind, params, seed)
        except UnsupportedHyperparameter as exc:
            return CellResult(params, "skipped", reason=str(exc))
        except ValueError as exc:
            return CellResult(params, "failed", reason=str(exc))
        try:
            res = cross_validate(spec, train_set, setup, cv, cache=cache)
        except Exception as exc:  # a failing cell must not abort the search
            logger.warning("grid cell %s failed: %s", params, exc)
            return CellResult(params, "failed", reason=f"{type(exc).__name__}: {exc}")
        note = "" if res.converged else "not converged"
        return CellResult(params, "ok", res.mean, res.fold_scores, note)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]
    ok = [(i, r) for i, r in enumerate(results) if r.status == "ok"]
    if not ok:
        raise GridSearchError([{"params": r.params, "reason": r.reason} for r in results])
    best_i, best = max(ok, key=lambda ir: (ir[1].mean, -ir[0]))
    return GridResult(grid.kind, EstimatorSpec(grid.kind, best.params, seed), best.mean, results)


# full runs ---------------------------------------------------------------


@dataclass
class LearningPoint:
    size: float
    n_train: int
    accuracy: float
    flagged: bool = False
    note: str = ""


def nested_subsets(n: int, sizes: Sequence[float], seed: int) -> list:
    """Index sets for each size; each is a prefix of one seeded permutation, so they nest."""
    sizes = list(sizes)
    if any(not 0 < s <= 1 for s in sizes) or sizes != sorted(sizes):
        raise ValueError("sizes must be ascending fractions in (0, 1]")
    order = np.random.default_rng(seed).permutation(n)
    out = []
    for s in sizes:
        k = n if s == 1 else max(1, min(n, int(np.floor(s * n + 0.5))))
        out.append(np.sort(order[:k]))
    return out


def learning_curve(spec: EstimatorSpec, train_set: Dataset, test_set: Dataset, sizes=DEFAULT_LEARNING_SIZES,
                   seed: int = 0, setup: FeatureSetup = FeatureSetup(), *, train_tokens: Optional[list] = None,
                   test_tokens: Optional[list] = None) -> list:
    if train_tokens is None:
        train_tokens = tokenize_dataset(train_set, setup.pipeline)
    if test_tokens is None:
        test_tokens = tokenize_dataset(test_set, setup.pipeline)
    labels = train_set.labels
    all_classes = set(labels)
    points = []
    for size, rows in zip(sizes, nested_subsets(len(train_set), sizes, seed)):
        sub_tokens = [train_tokens[i] for i in rows]
        sub_labels = [labels[i] for i in rows]
        missing = all_classes - set(sub_labels)
        note = f"subsample lacks {sorted(str(c) for c in missing)}" if missing else ""
        try:
            _, Xtr, Xte = _fit_features(setup, sub_tokens, test_tokens)
            warns: list = []
            model = _train_or_constant(spec, Xtr, sub_labels, warns, f"size {size}")
            acc = accuracy(test_set.labels, _predict(model, Xte))
            points.append(LearningPoint(float(size), len(rows), acc, bool(missing or warns), "; ".join([note, *warns]).strip("; ")))
        except features.EmptyCorpusError as exc:
            points.append(LearningPoint(float(size), len(rows), float("nan"), True, str(exc)))
    return points


@dataclass
class EvaluationReport:
    spec: dict
    scheme: str
    cv_score: Optional[float]
    cv_fold_scores: list
    f1: float
    macro_f1: float
    accuracy: float
    per_class: dict
    confusion: list
    learning_curve: list = field(default_factory=list)
    n_train: int = 0
    n_test: int = 0
    vocabulary_size: int = 0
    converged: bool = True
    warnings: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"format": REPORT_FORMAT, "format_version": REPORT_VERSION, **d}

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        if d.get("format") != REPORT_FORMAT:
            raise ReportVersionError("not an evaluation report")
        if d.get("format_version") != REPORT_VERSION:
            raise ReportVersionError(
                f"report format version {d.get('format_version')!r} unsupported (expected {REPORT_VERSION})"
            )
        body = {k: v for k, v in d.items() if k not in ("format", "format_version")}
        return cls(**body)

    @property
    def model_kind(self) -> str:
        return self.spec["kind"]

    def save_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load_json(cls, path) -> "EvaluationReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def per_class_rows(self) -> list:
        return [
            {"model": self.model_kind, "scheme": self.scheme, "class": c,
             "precision": f"{v['precision']:.6f}", "recall": f"{v['recall']:.6f}",
             "f1": f"{v['f1']:.6f}", "support": v["support"]}
            for c, v in self.per_class.items()
        ]

    def learning_curve_rows(self) -> list:
        return [
            {"model": self.model_kind, "scheme": self.scheme, "train_size": p["size"], "accuracy": f"{p['accuracy']:.6f}"}
            for p in self.learning_curve
        ]


def write_csv(path, rows: list, fieldnames: Optional[list] = None) -> None:
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def per_class_report(model: TrainedModel, X, y_true: Sequence) -> dict:
    """Precision/recall/F1/support for all six classes and the 6x6 confusion matrix."""
    y_true = list(y_true)
    y_pred = predict(model, X)
    labels = list(CLASSES) if all(isinstance(c, CommentClass) for c in model.classes) else list(model.classes)
    per = per_class_scores(y_true, y_pred, labels)
    rep = f1_scores(y_true, y_pred)
    return {
        "per_class": {str(c): asdict(s) for c, s in per.items()},
        "confusion": confusion_matrix(y_true, y_pred, labels).tolist(),
        "accuracy": accuracy(y_true, y_pred),
        "f1": rep.weighted,
        "macro_f1": rep.macro,
        "y_pred": y_pred,
    }


@dataclass
class RunResult:
    report: EvaluationReport
    model: TrainedModel
    vectorizer: Vectorizer


def evaluate(spec: EstimatorSpec, train_set: Dataset, test_set: Dataset, setup: FeatureSetup = FeatureSetup(),
             cv: Optional[CVConfig] = CVConfig(), learning_sizes: Optional[Sequence[float]] = None,
             learning_seed: int = 0) -> RunResult:
    """Cross-validate on the training split, fit on all of it, score on the test split."""
    train_tokens = tokenize_dataset(train_set, setup.pipeline)
    test_tokens = tokenize_dataset(test_set, setup.pipeline)
    warnings: list = []
    cv_score, cv_folds = None, []
    if cv is not None:
        res = cross_validate(spec, train_set, setup, cv, tokens=train_tokens)
        cv_score, cv_folds = res.mean, res.fold_scores
        warnings.extend(res.warnings)
    vec, Xtr, Xte = _fit_features(setup, train_tokens, test_tokens)
    model = train(spec, Xtr, train_set.labels)
    if not model.converged:
        warnings.append("optimizer did not converge within max_iter on the full training split")
    pc = per_class_report(model, Xte, test_set.labels)
    curve = []
    if learning_sizes:
        curve = [asdict(p) for p in learning_curve(spec, train_set, test_set, learning_sizes, learning_seed, setup,
                                                   train_tokens=train_tokens, test_tokens=test_tokens)]
    report = EvaluationReport(
        spec=spec.to_dict(), scheme=setup.vectorizer.scheme, cv_score=cv_score, cv_fold_scores=cv_folds,
        f1=pc["f1"], macro_f1=pc["macro_f1"], accuracy=pc["accuracy"], per_class=pc["per_class"],
        confusion=pc["confusion"], learning_curve=curve, n_train=len(train_set), n_test=len(test_set),
        vocabulary_size=len(vec.vocabulary), converged=model.converged, warnings=warnings,
        steps=list(setup.pipeline.steps),
    )
    return RunResult(report, model, vec)
