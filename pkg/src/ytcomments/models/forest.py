"""Bagged CART forests with per-tree feature subsampling."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .tree import apply_tree, csr_structure, forest_votes, grow_tree, leaf_classes, resolve_max_features


def tree_plan(seed: int, tree_index: int, n_rows: int, bootstrap: bool = True) -> tuple:
    """Bootstrap rows and kernel seed for one tree; depends only on (seed, tree_index, n_rows)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(tree_index,)))
    rows = rng.integers(0, n_rows, size=n_rows) if bootstrap else np.arange(n_rows)
    return rows, int(rng.integers(1, 2 ** 63))


def as_dense32(X) -> np.ndarray:
    if hasattr(X, "toarray"):
        X = X.toarray()
    return np.asfortranarray(np.asarray(X, dtype=np.float32))


def fit_tree(X, y: np.ndarray, n_classes: int, criterion: str, max_features, seed: int) -> dict:
    X = as_dense32(X)
    rows, tree_seed = tree_plan(seed, 0, X.shape[0], bootstrap=False)
    k = resolve_max_features(max_features, X.shape[1])
    t = grow_tree(X, y, rows, n_classes, k, criterion, tree_seed)
    t["leaf_class"] = leaf_classes(t["counts"])
    return t


def tree_scores(params: dict, X) -> np.ndarray:
    X = np.ascontiguousarray(as_dense32(X))
    leaves = apply_tree(X, params["feature"], params["threshold"], params["left"], params["right"])
    counts = params["counts"][leaves]
    return counts / counts.sum(axis=1, keepdims=True)


def fit_forest(X, y: np.ndarray, n_classes: int, n_estimators: int, criterion: str, max_features,
               seed: int, n_jobs: int = 1) -> dict:
    X = as_dense32(X)
    n = X.shape[0]
    k = resolve_max_features(max_features, X.shape[1])
    y = np.asarray(y, dtype=np.int64)
    structure = csr_structure(X)

    def one(i):
        rows, tree_seed = tree_plan(seed, i, n)
        t = grow_tree(X, y, rows, n_classes, k, criterion, tree_seed, structure)
        return t["feature"], t["threshold"], t["left"], t["right"], leaf_classes(t["counts"])

    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(pool.map(one, range(n_estimators)))
    else:
        trees = [one(i) for i in range(n_estimators)]
    offsets = np.zeros(n_estimators + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(t[0]) for t in trees])
    cat = [np.concatenate([t[j] for t in trees]) for j in range(5)]
    return {
        "feature": cat[0], "threshold": cat[1], "left": cat[2], "right": cat[3],
        "leaf_class": cat[4], "offsets": offsets,
    }


def forest_scores(params: dict, X, n_classes: int) -> np.ndarray:
    """Fraction of trees voting for each class."""
    X = np.ascontiguousarray(as_dense32(X))
    votes = forest_votes(X, params["feature"], params["threshold"], params["left"], params["right"],
                         params["leaf_class"], params["offsets"], n_classes)
    return votes / (len(params["offsets"]) - 1)
