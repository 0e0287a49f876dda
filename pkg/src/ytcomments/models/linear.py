"""One-vs-rest linear models: L2 logistic regression and a hinge-loss SVM.

Both solve, per class ``c`` with targets ``t_i = +1`` if ``y_i == c`` else ``-1``:

* logistic: ``0.5 * ||w||^2 + C * sum_i log(1 + exp(-t_i (w.x_i + b)))``
  (intercept ``b`` unpenalized; the ``||w||^2`` term is dropped for
  ``penalty="none"``), by truncated Newton-CG with an Armijo backtracking
  line search.
* svm: ``0.5 * (||w||^2 + b^2) + C * sum_i max(0, 1 - t_i (w.x_i + b))``
  by dual coordinate descent, the bias acting as a constant feature.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numba
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg
from scipy.special import expit, log_expit

logger = logging.getLogger(__name__)

SVC_GAP_TOL = 1e-4
SVC_MAX_EPOCHS = 2000
_ARMIJO = 1e-4


@dataclass
class BinaryFit:
    coef: np.ndarray
    intercept: float
    objective_history: list = field(default_factory=list)
    converged: bool = False
    n_iter: int = 0


# logistic regression -----------------------------------------------------


def logistic_objective(w: np.ndarray, b: float, X, t: np.ndarray, C: float, penalized: bool = True) -> float:
    z = X @ w + b
    reg = 0.5 * float(w @ w) if penalized else 0.0
    return reg - C * float(np.sum(log_expit(t * z)))


def logistic_gradient(w: np.ndarray, b: float, X, t: np.ndarray, C: float, penalized: bool = True) -> tuple:
    z = X @ w + b
    r = -C * t * expit(-t * z)
    gw = X.T @ r
    if penalized:
        gw = gw + w
    return np.asarray(gw).ravel(), float(r.sum())


def fit_logistic_binary(X, t: np.ndarray, C: float, penalized: bool = True, tol: float = 1e-4,
                        max_iter: int = 100, cg_max_iter: int = 200) -> BinaryFit:
    """Stops when the L2 norm of the full gradient (weights and intercept) is <= ``tol``."""
    X = sp.csr_matrix(X)
    n, d = X.shape
    theta = np.zeros(d + 1)

    def split(th):
        return th[:d], th[d]

    def f(th):
        w, b = split(th)
        return logistic_objective(w, b, X, t, C, penalized)

    def grad(th):
        gw, gb = logistic_gradient(*split(th), X, t, C, penalized)
        return np.concatenate([gw, [gb]])

    fval = f(theta)
    history = [fval]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = grad(theta)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol:
            converged = True
            it -= 1
            break
        w, b = split(theta)
        p = expit(t * (X @ w + b))
        D = C * p * (1.0 - p)

        def hv(v, D=D):
            vw, vb = v[:d], v[d]
            u = D * (X @ vw + vb)
            out = np.empty(d + 1)
            out[:d] = X.T @ u
            if penalized:
                out[:d] += vw
            out[d] = u.sum()
            return out

        H = LinearOperator((d + 1, d + 1), matvec=hv, dtype=np.float64)
        forcing = min(0.5, np.sqrt(gnorm))
        step, _ = cg(H, -g, rtol=forcing, atol=0.0, maxiter=cg_max_iter)
        slope = float(g @ step)
        if not np.all(np.isfinite(step)) or slope >= 0:
            step, slope = -g, -gnorm ** 2
        lr = 1.0
        stalled = False
        while True:
            cand = theta + lr * step
            fc = f(cand)
            if fc <= fval + _ARMIJO * lr * slope:
                break
            lr *= 0.5
            if lr < 1e-12:
                stalled = True
                break
        if stalled:
            logger.debug("line search stalled at iteration %d (gradient norm %.3g)", it, gnorm)
            converged = False
            break
        theta, fval = cand, fc
        history.append(fval)
    else:
        converged = float(np.linalg.norm(grad(theta))) <= tol
    w, b = split(theta)
    return BinaryFit(w.copy(), float(b), history, converged, it)


# linear SVM -------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def svc_dual_cd(data, indices, indptr, n_features, t, C, max_epochs, gap_tol, seed):
    """Returns ``(w, b, history, converged, epochs)``.

    ``history`` is the best primal objective seen after each epoch, so it is
    non-increasing. Convergence means the relative duality gap between that
    best primal and the current dual is at most ``gap_tol``.
    """
    n = indptr.shape[0] - 1
    w = np.zeros(n_features)
    b = 0.0
    alpha = np.zeros(n)
    qii = np.empty(n)
    for i in range(n):
        s = 1.0
        for k in range(indptr[i], indptr[i + 1]):
            s += data[k] * data[k]
        qii[i] = s
    perm = np.arange(n)
    state = np.empty(1, dtype=np.uint64)
    state[0] = np.uint64(seed) ^ np.uint64(0xD1B54A32D192ED03)
    if state[0] == np.uint64(0):
        state[0] = np.uint64(1)

    best_w = w.copy()
    best_b = 0.0
    best_p = np.inf
    history = np.empty(max_epochs)
    converged = False
    epoch = 0
    for epoch in range(1, max_epochs + 1):
        for i in range(n - 1, 0, -1):
            x = state[0]
            x ^= x >> np.uint64(12)
            x ^= x << np.uint64(25)
            x ^= x >> np.uint64(27)
            state[0] = x
            r = np.int64(((x * np.uint64(2685821657736338717)) >> np.uint64(11)) % np.uint64(i + 1))
            tmp = perm[i]
            perm[i] = perm[r]
            perm[r] = tmp
        for q in range(n):
            i = perm[q]
            m = b
            for k in range(indptr[i], indptr[i + 1]):
                m += w[indices[k]] * data[k]
            G = t[i] * m - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = min(G, 0.0)
            elif a == C:
                pg = max(G, 0.0)
            else:
                pg = G
            if pg != 0.0:
                na = min(max(a - G / qii[i], 0.0), C)
                delta = (na - a) * t[i]
                alpha[i] = na
                for k in range(indptr[i], indptr[i + 1]):
                    w[indices[k]] += delta * data[k]
                b += delta
        sq = b * b
        for j in range(n_features):
            sq += w[j] * w[j]
        hinge = 0.0
        for i in range(n):
            m = b
            for k in range(indptr[i], indptr[i + 1]):
                m += w[indices[k]] * data[k]
            v = 1.0 - t[i] * m
            if v > 0.0:
                hinge += v
        primal = 0.5 * sq + C * hinge
        dual = alpha.sum() - 0.5 * sq
        if primal < best_p:
            best_p = primal
            best_w[:] = w
            best_b = b
        history[epoch - 1] = best_p
        if best_p - dual <= gap_tol * max(abs(best_p), 1e-12):
            converged = True
            break
    return best_w, best_b, history[:epoch].copy(), converged, epoch


def svc_objective(w: np.ndarray, b: float, X, t: np.ndarray, C: float) -> float:
    m = X @ w + b
    return 0.5 * (float(w @ w) + b * b) + C * float(np.maximum(0.0, 1.0 - t * m).sum())


def fit_svc_binary(X, t: np.ndarray, C: float, seed: int = 0, max_epochs: int = SVC_MAX_EPOCHS,
                   gap_tol: float = SVC_GAP_TOL) -> BinaryFit:
    X = sp.csr_matrix(X, dtype=np.float64)
    X.sort_indices()
    w, b, hist, conv, epochs = svc_dual_cd(
        X.data, X.indices.astype(np.int64), X.indptr.astype(np.int64), X.shape[1],
        np.asarray(t, dtype=np.float64), float(C), int(max_epochs), float(gap_tol), np.uint64(seed),
    )
    return BinaryFit(w, float(b), [float(h) for h in hist], bool(conv), int(epochs))


def ovr_targets(y: np.ndarray, c: int) -> np.ndarray:
    return np.where(np.asarray(y) == c, 1.0, -1.0)
