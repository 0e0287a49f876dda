"""Estimator specs, training dispatch and prediction for the five classifiers."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import scipy.sparse as sp

from ..features import FeatureMatrix
from . import forest as _forest
from . import linear as _linear
from . import naive_bayes as _nb

logger = logging.getLogger(__name__)

KINDS = ("linear_svc", "logistic_regression", "multinomial_nb", "random_forest", "decision_tree")
_KIND_ALIASES = {
    "svc": "linear_svc", "linear_svc": "linear_svc", "linearsvc": "linear_svc",
    "lr": "logistic_regression", "logistic": "logistic_regression", "logistic_regression": "logistic_regression",
    "nb": "multinomial_nb", "naive_bayes": "multinomial_nb", "multinomial_nb": "multinomial_nb",
    "rf": "random_forest", "random_forest": "random_forest",
    "dt": "decision_tree", "tree": "decision_tree", "decision_tree": "decision_tree",
}
LR_SOLVERS = ("newton-cg", "lbfgs", "liblinear")

DEFAULTS = {
    "linear_svc": {"C": 1.0},
    "logistic_regression": {"C": 1.0, "penalty": "l2", "solver": "newton-cg", "max_iter": 100, "tol": 1e-4},
    "multinomial_nb": {"alpha": 1.0, "fit_prior": True},
    "random_forest": {"n_estimators": 100, "max_features": "sqrt", "criterion": "gini"},
    "decision_tree": {"criterion": "gini", "max_features": "all"},
}


class UnsupportedHyperparameter(ValueError):
    """A value that is meaningful elsewhere but has no implementing optimizer here."""


class SingleClassError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class FingerprintMismatch(ValueError):
    pass


def canonical_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[str(kind).lower()]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {', '.join(KINDS)}") from None


def _positive(name, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0 or not math.isfinite(v):
        raise ValueError(f"{name} must be a positive number, got {v!r}")
    return float(v)


def _choice(name, v, allowed):
    if v not in allowed:
        raise ValueError(f"{name} must be one of {list(allowed)}, got {v!r}")
    return v


def _as_bool(name, v):
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v.lower() in ("true", "false"):
        return v.lower() == "true"
    raise ValueError(f"{name} must be true or false, got {v!r}")


def _validate(kind: str, hp: dict) -> dict:
    out = dict(DEFAULTS[kind])
    unknown = sorted(set(hp) - set(out))
    if unknown:
        raise ValueError(f"{kind} does not accept {unknown}; allowed: {sorted(out)}")
    out.update(hp)
    if kind == "linear_svc":
        out["C"] = _positive("C", out["C"])
    elif kind == "logistic_regression":
        out["C"] = _positive("C", out["C"])
        pen = out["penalty"]
        pen = "none" if pen is None else str(pen).lower()
        if pen in ("l1", "elasticnet"):
            raise UnsupportedHyperparameter(f"penalty {pen!r} is not supported by this optimizer (use l2 or none)")
        out["penalty"] = _choice("penalty", pen, ("l2", "none"))
        out["solver"] = _choice("solver", out["solver"], LR_SOLVERS)
        mi = out["max_iter"]
        if isinstance(mi, bool) or int(mi) != mi or mi < 1:
            raise ValueError(f"max_iter must be a positive integer, got {mi!r}")
        out["max_iter"] = int(mi)
        out["tol"] = _positive("tol", out["tol"])
    elif kind == "multinomial_nb":
        a = out["alpha"]
        if isinstance(a, bool) or not isinstance(a, (int, float)) or a < 0 or not math.isfinite(a):
            raise ValueError(f"alpha must be >= 0, got {a!r}")
        out["alpha"] = float(a)
        out["fit_prior"] = _as_bool("fit_prior", out["fit_prior"])
    elif kind == "random_forest":
        n = out["n_estimators"]
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ValueError(f"n_estimators must be a positive integer, got {n!r}")
        out["n_estimators"] = int(n)
        out["max_features"] = _choice("max_features", out["max_features"], ("sqrt", "log2"))
        out["criterion"] = _choice("criterion", out["criterion"], ("gini", "entropy"))
    elif kind == "decision_tree":
        mf = out["max_features"]
        mf = "all" if mf in (None, "auto", "None", "none") else mf
        out["max_features"] = _choice("max_features", mf, ("sqrt", "log2", "all"))
        out["criterion"] = _choice("criterion", out["criterion"], ("gini", "entropy"))
    return out


@dataclass(frozen=True)
class EstimatorSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        kind = canonical_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "hyperparameters", _validate(kind, dict(self.hyperparameters or {})))
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.hyperparameters.items())), self.seed))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "hyperparameters": dict(self.hyperparameters), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "EstimatorSpec":
        return cls(d["kind"], d.get("hyperparameters", {}), d.get("seed", 0))

    def label(self) -> str:
        hp = ", ".join(f"{k}={v}" for k, v in sorted(self.hyperparameters.items()))
        return f"{self.kind}({hp})"


@dataclass(frozen=True, eq=False)
class TrainedModel:
    spec: EstimatorSpec
    classes: tuple
    parameters: dict
    n_features: int
    vectorizer_fingerprint: Optional[str] = None
    converged: bool = True
    info: dict = field(default_factory=dict)


def _unpack(X) -> tuple:
    if isinstance(X, FeatureMatrix):
        return X.values, X.fingerprint
    if sp.issparse(X):
        return sp.csr_matrix(X, dtype=np.float64), None
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    return sp.csr_matrix(arr), None


def _class_order(labels) -> tuple:
    uniq = set(labels)
    try:
        return tuple(sorted(uniq))
    except TypeError:
        return tuple(sorted(uniq, key=str))


def train(spec: EstimatorSpec, X, y, n_jobs: int = 1) -> TrainedModel:
    Xs, fingerprint = _unpack(X)
    y = list(y)
    if len(y) != Xs.shape[0]:
        raise DimensionMismatch(f"{len(y)} labels for {Xs.shape[0]} rows")
    classes = _class_order(y)
    if len(classes) < 2:
        raise SingleClassError(f"training needs at least 2 classes, got {list(classes)}")
    pos = {c: i for i, c in enumerate(classes)}
    yi = np.array([pos[v] for v in y], dtype=np.int64)
    k = len(classes)
    hp = spec.hyperparameters
    converged = True
    info: dict[str, Any] = {}

    if spec.kind == "multinomial_nb":
        params = _nb.fit_multinomial_nb(Xs, yi, k, alpha=hp["alpha"], fit_prior=hp["fit_prior"])
    elif spec.kind in ("logistic_regression", "linear_svc"):
        coefs, intercepts, hists, iters = [], [], [], []
        for c in range(k):
            t = _linear.ovr_targets(yi, c)
            if spec.kind == "logistic_regression":
                fit = _linear.fit_logistic_binary(Xs, t, hp["C"], penalized=hp["penalty"] == "l2",
                                                  tol=hp["tol"], max_iter=hp["max_iter"])
            else:
                class_seed = int(np.random.SeedSequence(spec.seed, spawn_key=(c,)).generate_state(1, np.uint64)[0])
                fit = _linear.fit_svc_binary(Xs, t, hp["C"], seed=class_seed)
            coefs.append(fit.coef)
            intercepts.append(fit.intercept)
            hists.append(fit.objective_history)
            iters.append(fit.n_iter)
            converged = converged and fit.converged
        params = {"coef": np.vstack(coefs), "intercept": np.asarray(intercepts, dtype=np.float64)}
        info["n_iter"] = iters
        info["objective_history"] = hists
        if not converged:
            logger.warning("%s did not converge for every class within its iteration limit", spec.kind)
    elif spec.kind == "decision_tree":
        params = _forest.fit_tree(Xs, yi, k, hp["criterion"], hp["max_features"], spec.seed)
    elif spec.kind == "random_forest":
        params = _forest.fit_forest(Xs, yi, k, hp["n_estimators"], hp["criterion"], hp["max_features"],
                                    spec.seed, n_jobs=n_jobs)
    else:  # pragma: no cover - canonical_kind guards this
        raise ValueError(spec.kind)
    return TrainedModel(spec, classes, params, Xs.shape[1], fingerprint, converged, info)


def _check_input(model: TrainedModel, X):
    Xs, fingerprint = _unpack(X)
    if Xs.shape[1] != model.n_features:
        raise DimensionMismatch(f"model expects {model.n_features} columns, got {Xs.shape[1]}")
    if fingerprint is not None and model.vectorizer_fingerprint is not None \
            and fingerprint != model.vectorizer_fingerprint:
        raise FingerprintMismatch("feature matrix was built with a different vocabulary than the model")
    return Xs


def predict_scores(model: TrainedModel, X) -> np.ndarray:
    """Log-joint likelihoods (NB), decision values (linear), vote or leaf fractions (trees)."""
    Xs = _check_input(model, X)
    p = model.parameters
    kind = model.spec.kind
    if kind == "multinomial_nb":
        return _nb.nb_joint_log_likelihood(p, Xs)
    if kind in ("logistic_regression", "linear_svc"):
        return np.asarray(Xs @ p["coef"].T) + p["intercept"]
    if kind == "decision_tree":
        return _forest.tree_scores(p, Xs)
    return _forest.forest_scores(p, Xs, len(model.classes))


def predict_indices(model: TrainedModel, X) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the lowest class index on ties
    return np.argmax(predict_scores(model, X), axis=1)


def predict(model: TrainedModel, X) -> list:
    return [model.classes[i] for i in predict_indices(model, X)]
