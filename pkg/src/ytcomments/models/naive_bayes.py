"""Multinomial naive Bayes with additive smoothing."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def fit_multinomial_nb(X, y: np.ndarray, n_classes: int, alpha: float = 1.0, fit_prior: bool = True) -> dict:
    """``y`` holds class indices in ``range(n_classes)``.

    ``alpha = 0`` is honoured exactly: unseen (class, feature) pairs get
    log-probability ``-inf``.
    """
    X = sp.csr_matrix(X)
    if X.data.size and X.data.min() < 0:
        raise ValueError("multinomial naive Bayes needs non-negative features")
    n = X.shape[0]
    onehot = sp.csr_matrix((np.ones(n), (np.asarray(y), np.arange(n))), shape=(n_classes, n))
    feature_count = np.asarray((onehot @ X).todense(), dtype=np.float64)
    class_count = np.bincount(y, minlength=n_classes).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        if fit_prior:
            log_prior = np.log(class_count / n)
        else:
            log_prior = np.full(n_classes, -np.log(n_classes))
        smoothed = feature_count + alpha
        totals = smoothed.sum(axis=1, keepdims=True)
        log_prob = np.log(smoothed) - np.log(totals)
    # a class with no feature mass at alpha=0 has an undefined distribution
    log_prob = np.where(np.isnan(log_prob), -np.inf, log_prob)
    return {"class_log_prior": log_prior, "feature_log_prob": log_prob}


def nb_joint_log_likelihood(params: dict, X) -> np.ndarray:
    X = sp.csr_matrix(X)
    flp = params["feature_log_prob"]
    # sparse product touches only non-zero cells, so 0 * -inf never occurs
    jll = np.asarray(X @ flp.T)
    return jll + params["class_log_prior"]
