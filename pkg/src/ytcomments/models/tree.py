"""CART classification trees grown to purity.

Each node draws candidate features in random order (without replacement).
Features that are constant within the node are skipped and do not count
toward ``max_features``. Once ``max_features`` non-constant features have been
scored and one gives a strictly positive impurity decrease, the best of them
becomes the split. If none does, drawing continues through the remaining
features. A node with no improving split anywhere becomes a leaf.

Features with no non-zero value among a node's rows are constant there, so
the draw is taken over the features present in the node (read off the CSR
structure). That yields the same distribution over non-constant features as a
draw over all columns, at a cost proportional to the node's non-zeros.
"""
from __future__ import annotations

import math

import numba
import numpy as np
import scipy.sparse as sp

GINI = 0
ENTROPY = 1
CRITERIA = {"gini": GINI, "entropy": ENTROPY}

_MIN_GAIN = 1e-12


def resolve_max_features(setting, n_features: int) -> int:
    if setting in (None, "all", "auto"):
        return n_features
    if setting == "sqrt":
        return max(1, int(math.sqrt(n_features)))
    if setting == "log2":
        return max(1, int(math.log2(n_features))) if n_features > 1 else 1
    raise ValueError(f"unknown max_features {setting!r}")


@numba.njit(cache=True, inline="always")
def _next(state):
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return x * np.uint64(2685821657736338717)


@numba.njit(cache=True, inline="always")
def _randbelow(state, bound):
    return np.int64((_next(state) >> np.uint64(11)) % np.uint64(bound))


@numba.njit(cache=True)
def _impurity(counts, n, criterion):
    if n <= 0:
        return 0.0
    if criterion == 0:
        s = 0.0
        for c in range(counts.shape[0]):
            p = counts[c] / n
            s += p * p
        return 1.0 - s
    h = 0.0
    for c in range(counts.shape[0]):
        if counts[c] > 0:
            p = counts[c] / n
            h -= p * math.log2(p)
    return h


@numba.njit(cache=True, nogil=True)
def grow_tree_arrays(X, indptr, indices, data, y, samples, n_classes, max_features, criterion, seed):
    """Grow one tree on rows ``samples`` (duplicates allowed) of dense ``X``.

    ``indptr``/``indices``/``data`` are the CSR form of ``X`` without explicit
    zeros. Split search per feature sorts only the node's non-zero values;
    the zeros form one block. Returns ``(feature, threshold, left, right,
    counts)`` trimmed to the node count; leaves have ``feature == -1``.
    """
    m = samples.shape[0]
    d = X.shape[1]
    cap = max(2 * m, 1)
    feature = np.full(cap, -1, dtype=np.int32)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int32)
    right = np.full(cap, -1, dtype=np.int32)
    counts = np.zeros((cap, n_classes), dtype=np.float64)

    idx = samples.astype(np.int64).copy()
    total_nnz = 0
    for t in range(m):
        total_nnz += indptr[idx[t] + 1] - indptr[idx[t]]
    ent_val = np.empty(max(total_nnz, 1), dtype=np.float32)
    ent_cls = np.empty(max(total_nnz, 1), dtype=np.int64)
    feats = np.empty(d, dtype=np.int64)
    stamp = np.full(d, -1, dtype=np.int64)
    fcnt = np.zeros(d, dtype=np.int64)
    foff = np.zeros(d, dtype=np.int64)
    fcur = np.zeros(d, dtype=np.int64)
    state = np.empty(1, dtype=np.uint64)
    state[0] = np.uint64(seed) ^ np.uint64(0x9E3779B97F4A7C15)
    if state[0] == np.uint64(0):
        state[0] = np.uint64(1)

    lcount = np.zeros(n_classes, dtype=np.float64)
    rcount = np.zeros(n_classes, dtype=np.float64)
    zcount = np.zeros(n_classes, dtype=np.float64)

    st_node = np.empty(cap, dtype=np.int64)
    st_start = np.empty(cap, dtype=np.int64)
    st_end = np.empty(cap, dtype=np.int64)
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = m
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = st_node[top]
        s = st_start[top]
        e = st_end[top]
        n_node = e - s
        for t in range(s, e):
            counts[node, y[idx[t]]] += 1.0
        present = 0
        for c in range(n_classes):
            if counts[node, c] > 0:
                present += 1
        if present <= 1:
            continue

        # group the node's non-zeros by column
        n_present = 0
        for t in range(s, e):
            row = idx[t]
            for q in range(indptr[row], indptr[row + 1]):
                col = indices[q]
                if stamp[col] != node:
                    stamp[col] = node
                    fcnt[col] = 0
                    feats[n_present] = col
                    n_present += 1
                fcnt[col] += 1
        # sorted so the draw does not depend on row order inside the node
        feats[:n_present].sort()
        off = 0
        for q in range(n_present):
            col = feats[q]
            foff[col] = off
            fcur[col] = off
            off += fcnt[col]
        for t in range(s, e):
            row = idx[t]
            cls = y[row]
            for q in range(indptr[row], indptr[row + 1]):
                col = indices[q]
                ent_val[fcur[col]] = data[q]
                ent_cls[fcur[col]] = cls
                fcur[col] += 1

        parent = _impurity(counts[node], n_node, criterion)
        best_gain = 0.0
        best_f = -1
        best_thr = 0.0
        visited = 0
        j = 0
        while j < n_present:
            r = j + _randbelow(state, n_present - j)
            tmp = feats[j]
            feats[j] = feats[r]
            feats[r] = tmp
            f = feats[j]
            j += 1

            a0 = foff[f]
            nz = fcnt[f]
            nzero = n_node - nz
            vals = ent_val[a0:a0 + nz]
            order = np.argsort(vals, kind="mergesort")
            if nzero == 0 and vals[order[0]] >= vals[order[nz - 1]]:
                continue
            visited += 1

            for c in range(n_classes):
                zcount[c] = counts[node, c]
                lcount[c] = 0.0
            for q in range(nz):
                zcount[ent_cls[a0 + q]] -= 1.0
            # sweep values in ascending order; the zero block sits before the first positive value
            nl = 0
            q = 0
            zero_done = nzero == 0
            while q < nz or not zero_done:
                if not zero_done and (q == nz or vals[order[q]] > 0):
                    cur = 0.0
                    for c in range(n_classes):
                        lcount[c] += zcount[c]
                    nl += nzero
                    zero_done = True
                else:
                    cur = np.float64(vals[order[q]])
                    lcount[ent_cls[a0 + order[q]]] += 1.0
                    nl += 1
                    q += 1
                if q < nz or not zero_done:
                    if not zero_done and (q == nz or vals[order[q]] > 0):
                        nxt = 0.0
                    else:
                        nxt = np.float64(vals[order[q]])
                    if cur < nxt:
                        nr = n_node - nl
                        for c in range(n_classes):
                            rcount[c] = counts[node, c] - lcount[c]
                        child = (nl * _impurity(lcount, nl, criterion) + nr * _impurity(rcount, nr, criterion)) / n_node
                        gain = parent - child
                        if gain > _MIN_GAIN and gain > best_gain:
                            best_gain = gain
                            best_f = f
                            best_thr = (cur + nxt) / 2.0
            if visited >= max_features and best_f >= 0:
                break

        if best_f < 0:
            continue

        # partition idx[s:e] so rows with x <= threshold come first
        lo = s
        hi = e - 1
        while lo <= hi:
            if np.float64(X[idx[lo], best_f]) <= best_thr:
                lo += 1
            else:
                tmp2 = idx[lo]
                idx[lo] = idx[hi]
                idx[hi] = tmp2
                hi -= 1
        feature[node] = best_f
        threshold[node] = best_thr
        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        left[node] = lnode
        right[node] = rnode
        # push right first so the left subtree is numbered depth-first
        st_node[top] = rnode
        st_start[top] = lo
        st_end[top] = e
        top += 1
        st_node[top] = lnode
        st_start[top] = s
        st_end[top] = lo
        top += 1

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), counts[:n_nodes].copy())


@numba.njit(cache=True, nogil=True)
def apply_tree(X, feature, threshold, left, right):
    """Leaf index reached by each row of dense ``X``."""
    n = X.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if np.float64(X[i, feature[node]]) <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out


@numba.njit(cache=True, nogil=True)
def forest_votes(X, feature, threshold, left, right, leaf_class, offsets, n_classes):
    """Vote counts per row for concatenated trees; tree t owns nodes offsets[t]:offsets[t+1]."""
    n = X.shape[0]
    n_trees = offsets.shape[0] - 1
    votes = np.zeros((n, n_classes), dtype=np.float64)
    for t in range(n_trees):
        base = offsets[t]
        for i in range(n):
            node = 0
            while feature[base + node] >= 0:
                if np.float64(X[i, feature[base + node]]) <= threshold[base + node]:
                    node = left[base + node]
                else:
                    node = right[base + node]
            votes[i, leaf_class[base + node]] += 1.0
    return votes


def leaf_classes(counts: np.ndarray) -> np.ndarray:
    """Majority class per node; ``argmax`` keeps the lowest index on ties."""
    return np.argmax(counts, axis=1).astype(np.int32)


def csr_structure(X) -> tuple:
    m = sp.csr_matrix(np.asarray(X, dtype=np.float32))
    m.eliminate_zeros()
    m.sort_indices()
    return m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data.astype(np.float32)


def grow_tree(X, y, samples, n_classes: int, max_features: int, criterion: str, seed: int,
              structure=None) -> dict:
    X = np.asarray(X, dtype=np.float32)
    if not X.flags.f_contiguous:
        X = np.asfortranarray(X)
    if structure is None:
        structure = csr_structure(X)
    feature, threshold, left, right, counts = grow_tree_arrays(
        X, structure[0], structure[1], structure[2], np.asarray(y, dtype=np.int64), np.asarray(samples, dtype=np.int64),
        int(n_classes), int(max_features), CRITERIA[criterion], np.uint64(seed),
    )
    return {"feature": feature, "threshold": threshold, "left": left, "right": right, "counts": counts}
