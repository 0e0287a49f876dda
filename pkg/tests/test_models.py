import json
import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ytcomments.corpus import CommentClass
from ytcomments.features import FeatureMatrix
from ytcomments.models import (
    DimensionMismatch,
    EstimatorSpec,
    FingerprintMismatch,
    ModelFormatError,
    SingleClassError,
    UnsupportedHyperparameter,
    VersionMismatch,
    load_model,
    load_model_with_metadata,
    predict,
    predict_indices,
    predict_scores,
    save_model,
    train,
)
from ytcomments.models import linear
from ytcomments.models.forest import fit_forest, forest_scores, tree_plan
from ytcomments.models.naive_bayes import fit_multinomial_nb, nb_joint_log_likelihood
from ytcomments.models.tree import _impurity, grow_tree

ALL_SPECS = [
    EstimatorSpec("nb"),
    EstimatorSpec("lr"),
    EstimatorSpec("svc"),
    EstimatorSpec("dt", seed=3),
    EstimatorSpec("rf", {"n_estimators": 15}, seed=3),
]


def _blobs(n=90, d=12, k=3, seed=0, sep=2.0):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, k, size=n)
    centers = rng.random((k, d)) * sep
    X = np.clip(centers[y] + rng.random((n, d)), 0, None)
    X[rng.random((n, d)) < 0.4] = 0.0
    return sp.csr_matrix(X), y


# naive Bayes -------------------------------------------------------------


def _nb_brute(X, y, k, alpha):
    X = np.asarray(X.todense())
    n, d = X.shape
    out = np.zeros((n, k))
    for c in range(k):
        rows = X[y == c]
        prior = math.log(len(rows) / n)
        fc = rows.sum(axis=0) + alpha
        logp = [math.log(v / fc.sum()) for v in fc]
        for i in range(n):
            out[i, c] = prior + sum(X[i, j] * logp[j] for j in range(d))
    return out


@pytest.mark.property
def test_nb_matches_brute_force():
    X, y = _blobs()
    params = fit_multinomial_nb(X, y, 3, alpha=0.5)
    assert np.allclose(nb_joint_log_likelihood(params, X), _nb_brute(X, y, 3, 0.5), atol=1e-12, rtol=0)


@pytest.mark.property
def test_nb_hand_example():
    X = sp.csr_matrix(np.array([[2, 0], [1, 1], [0, 3], [0, 1]], dtype=float))
    y = np.array([0, 0, 1, 1])
    p = fit_multinomial_nb(X, y, 2, alpha=1.0)
    # class 0 counts (3, 1) + 1 -> (4, 2)/6; class 1 counts (0, 4) + 1 -> (1, 5)/6
    assert np.allclose(np.exp(p["feature_log_prob"]), [[4 / 6, 2 / 6], [1 / 6, 5 / 6]])
    assert np.allclose(np.exp(p["class_log_prior"]), [0.5, 0.5])


def test_nb_alpha_zero_unseen_is_minus_inf():
    X = sp.csr_matrix(np.array([[1, 0], [0, 1]], dtype=float))
    p = fit_multinomial_nb(X, np.array([0, 1]), 2, alpha=0.0)
    assert p["feature_log_prob"][0, 1] == -np.inf
    jll = nb_joint_log_likelihood(p, X)
    assert np.isfinite(jll[0, 0]) and jll[0, 1] == -np.inf


def test_nb_empty_row_predicts_prior_argmax():
    X, y = _blobs()
    y = np.where(np.arange(len(y)) < 60, 2, y)
    m = train(EstimatorSpec("nb"), X, y)
    counts = np.bincount(y)
    assert predict_indices(m, sp.csr_matrix((1, X.shape[1])))[0] == int(np.argmax(counts))


# logistic regression -----------------------------------------------------


@pytest.mark.property
@pytest.mark.parametrize("penalized", [True, False])
def test_logistic_gradient_finite_differences(penalized):
    X, y = _blobs(n=40, d=6)
    t = linear.ovr_targets(y, 1)
    rng = np.random.default_rng(1)
    w, b = rng.normal(size=6) * 0.3, 0.2
    gw, gb = linear.logistic_gradient(w, b, X, t, 2.0, penalized)
    eps = 1e-6
    for j in range(6):
        e = np.zeros(6)
        e[j] = eps
        num = (linear.logistic_objective(w + e, b, X, t, 2.0, penalized)
               - linear.logistic_objective(w - e, b, X, t, 2.0, penalized)) / (2 * eps)
        assert abs(num - gw[j]) <= 1e-5 * max(1.0, abs(num))
    num_b = (linear.logistic_objective(w, b + eps, X, t, 2.0, penalized)
             - linear.logistic_objective(w, b - eps, X, t, 2.0, penalized)) / (2 * eps)
    assert abs(num_b - gb) <= 1e-5 * max(1.0, abs(num_b))


@pytest.mark.property
def test_logistic_converges_to_tolerance_and_is_monotone():
    X, y = _blobs()
    for c in range(3):
        t = linear.ovr_targets(y, c)
        fit = linear.fit_logistic_binary(X, t, 1.0, tol=1e-6, max_iter=100)
        assert fit.converged
        gw, gb = linear.logistic_gradient(fit.coef, fit.intercept, X, t, 1.0)
        assert math.hypot(np.linalg.norm(gw), gb) <= 1e-6
        h = fit.objective_history
        assert all(b <= a + 1e-10 for a, b in zip(h, h[1:]))


def test_logistic_intercept_unpenalized():
    # all-positive targets: optimum has w = 0 only if the intercept is free to grow
    X = sp.csr_matrix(np.zeros((10, 3)))
    fit = linear.fit_logistic_binary(X, np.ones(10), 1.0, tol=1e-8, max_iter=200)
    assert fit.intercept > 5


def test_logistic_solvers_agree():
    X, y = _blobs()
    a = train(EstimatorSpec("lr", {"solver": "newton-cg"}), X, y)
    b = train(EstimatorSpec("lr", {"solver": "lbfgs"}), X, y)
    assert np.allclose(a.parameters["coef"], b.parameters["coef"])


def test_logistic_max_iter_reports_nonconvergence():
    X, y = _blobs()
    m = train(EstimatorSpec("lr", {"max_iter": 1, "tol": 1e-12}), X, y)
    assert not m.converged


def test_unsupported_penalty():
    with pytest.raises(UnsupportedHyperparameter):
        EstimatorSpec("lr", {"penalty": "l1"})
    with pytest.raises(UnsupportedHyperparameter):
        EstimatorSpec("lr", {"penalty": "elasticnet"})


# linear SVC --------------------------------------------------------------


def test_svc_matches_convex_reference():
    cp = pytest.importorskip("cvxpy")
    X, y = _blobs(n=50, d=8, seed=4)
    t = linear.ovr_targets(y, 0)
    C = 0.7
    fit = linear.fit_svc_binary(X, t, C, seed=1)
    assert fit.converged
    Xd = np.asarray(X.todense())
    w, b = cp.Variable(8), cp.Variable()
    obj = 0.5 * (cp.sum_squares(w) + cp.square(b)) + C * cp.sum(cp.pos(1 - cp.multiply(t, Xd @ w + b)))
    prob = cp.Problem(cp.Minimize(obj))
    prob.solve(solver=cp.CLARABEL)
    ours = linear.svc_objective(fit.coef, fit.intercept, X, t, C)
    assert abs(ours - prob.value) <= 1e-3 * max(1.0, abs(prob.value))
    assert fit.objective_history[-1] == pytest.approx(ours, rel=1e-9)


@pytest.mark.property
def test_svc_history_monotone_and_seeded():
    X, y = _blobs()
    t = linear.ovr_targets(y, 2)
    a = linear.fit_svc_binary(X, t, 1.0, seed=5)
    b = linear.fit_svc_binary(X, t, 1.0, seed=5)
    h = a.objective_history
    assert all(q <= p + 1e-10 for p, q in zip(h, h[1:]))
    assert np.array_equal(a.coef, b.coef)


# trees and forests -------------------------------------------------------


@pytest.mark.property
@pytest.mark.parametrize("criterion", ["gini", "entropy"])
def test_tree_children_never_raise_impurity(criterion):
    X, y = _blobs(n=120, d=10, k=4, seed=2)
    t = grow_tree(X.toarray(), y, np.arange(120), 4, 3, criterion, seed=7)
    crit = 0 if criterion == "gini" else 1
    cnt = t["counts"]
    for node in range(len(t["feature"])):
        l, r = t["left"][node], t["right"][node]
        if l < 0:
            assert np.count_nonzero(cnt[node]) == 1 or t["feature"][node] < 0
            continue
        n, nl, nr = cnt[node].sum(), cnt[l].sum(), cnt[r].sum()
        assert nl + nr == n and nl > 0 and nr > 0
        parent = _impurity(cnt[node], n, crit)
        child = (nl * _impurity(cnt[l], nl, crit) + nr * _impurity(cnt[r], nr, crit)) / n
        assert child <= parent + 1e-12


def test_tree_fits_separable_data_exactly():
    X, y = _blobs(n=100, d=10, k=3, seed=5, sep=6.0)
    m = train(EstimatorSpec("dt"), X, y)
    assert np.mean(predict_indices(m, X) == y) == 1.0


@pytest.mark.property
def test_forest_deterministic_and_parallel_equal():
    X, y = _blobs()
    a = fit_forest(X, y, 3, 12, "gini", "sqrt", seed=11)
    b = fit_forest(X, y, 3, 12, "gini", "sqrt", seed=11, n_jobs=3)
    for key in a:
        assert np.array_equal(a[key], b[key])
    c = fit_forest(X, y, 3, 12, "gini", "sqrt", seed=12)
    assert not all(np.array_equal(a[k], c[k]) for k in ("feature", "threshold"))


@pytest.mark.property
def test_single_tree_forest_equals_tree_on_plan_rows():
    X, y = _blobs()
    f = fit_forest(X, y, 3, 1, "entropy", "sqrt", seed=21)
    rows, tseed = tree_plan(21, 0, X.shape[0])
    t = grow_tree(X.toarray(), y, rows, 3, int(math.sqrt(X.shape[1])), "entropy", tseed)
    for key in ("feature", "threshold", "left", "right"):
        assert np.array_equal(f[key], t[key])


@pytest.mark.property
def test_forest_votes_are_fractions():
    X, y = _blobs()
    f = fit_forest(X, y, 3, 9, "gini", "sqrt", seed=2)
    s = forest_scores(f, X, 3)
    assert np.allclose(s.sum(axis=1), 1.0)
    assert np.allclose(s * 9, np.round(s * 9))


def test_tree_plan_depends_only_on_inputs():
    a, sa = tree_plan(5, 3, 50)
    b, sb = tree_plan(5, 3, 50)
    assert np.array_equal(a, b) and sa == sb
    assert a.min() >= 0 and a.max() < 50


# shared contract ---------------------------------------------------------


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
def test_argmax_scores_is_prediction(spec):
    X, y = _blobs()
    m = train(spec, X, y)
    s = predict_scores(m, X)
    assert s.shape == (X.shape[0], 3)
    assert np.array_equal(np.argmax(s, axis=1), predict_indices(m, X))
    assert predict(m, X) == [m.classes[i] for i in np.argmax(s, axis=1)]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
def test_training_is_deterministic(spec):
    X, y = _blobs()
    a, b = train(spec, X, y), train(spec, X, y)
    assert np.array_equal(predict_scores(a, X), predict_scores(b, X))


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
def test_save_load_round_trip(tmp_path, spec):
    X, y = _blobs()
    labels = [list(CommentClass)[i] for i in y]
    fm = FeatureMatrix(X, (), "f" * 64)
    m = train(spec, fm, labels)
    p = tmp_path / "m.json"
    save_model(m, p, {"note": "x"})
    back, meta = load_model_with_metadata(p)
    assert meta == {"note": "x"}
    assert back.classes == m.classes and back.spec == m.spec
    assert np.array_equal(predict_scores(back, fm), predict_scores(m, fm))


def test_load_rejects_bad_files(tmp_path):
    X, y = _blobs()
    m = train(EstimatorSpec("nb"), FeatureMatrix(X, (), "a" * 64), y)
    p = tmp_path / "m.json"
    save_model(m, p)
    d = json.loads(p.read_text())
    d["format_version"] = 2
    p.write_text(json.dumps(d))
    with pytest.raises(VersionMismatch):
        load_model(p)
    d["format_version"] = 1
    d["vectorizer_fingerprint"] = ""
    p.write_text(json.dumps(d))
    with pytest.raises(ModelFormatError):
        load_model(p)
    p.write_text("{oops")
    with pytest.raises(ModelFormatError):
        load_model(p)


def test_save_requires_fingerprint(tmp_path):
    X, y = _blobs()
    with pytest.raises(ModelFormatError):
        save_model(train(EstimatorSpec("nb"), X, y), tmp_path / "m.json")


def test_input_checks():
    X, y = _blobs()
    m = train(EstimatorSpec("nb"), FeatureMatrix(X, (), "a" * 64), y)
    with pytest.raises(DimensionMismatch):
        predict(m, sp.csr_matrix((2, X.shape[1] + 1)))
    with pytest.raises(FingerprintMismatch):
        predict(m, FeatureMatrix(X, (), "b" * 64))
    with pytest.raises(SingleClassError):
        train(EstimatorSpec("svc"), X, np.zeros(X.shape[0], dtype=int))
    with pytest.raises(DimensionMismatch):
        train(EstimatorSpec("svc"), X, y[:-1])


@pytest.mark.parametrize("kind,hp", [
    ("svc", {"C": 0}), ("nb", {"alpha": -1}), ("rf", {"n_estimators": 0}),
    ("dt", {"criterion": "mse"}), ("lr", {"solver": "sag"}), ("svc", {"gamma": 1}),
])
def test_invalid_hyperparameters(kind, hp):
    with pytest.raises(ValueError):
        EstimatorSpec(kind, hp)


def test_spec_round_trip_and_seed_bounds():
    s = EstimatorSpec("rf", {"n_estimators": 7}, seed=2 ** 64 - 1)
    assert EstimatorSpec.from_dict(s.to_dict()) == s
    with pytest.raises(ValueError):
        EstimatorSpec("rf", seed=-1)
    with pytest.raises(ValueError):
        EstimatorSpec("bogus")


@pytest.mark.property
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from(["nb", "lr", "svc", "dt"]))
def test_scores_argmax_property(seed, kind):
    X, y = _blobs(n=30, d=5, seed=seed % 1000)
    if len(set(y.tolist())) < 2:
        return
    m = train(EstimatorSpec(kind, seed=seed), X, y)
    assert np.array_equal(np.argmax(predict_scores(m, X), axis=1), predict_indices(m, X))


@pytest.mark.property
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_objective_histories_monotone(seed):
    X, y = _blobs(n=40, d=6, seed=seed % 1000)
    t = linear.ovr_targets(y, int(y[0]))
    for fit in (linear.fit_logistic_binary(X, t, 1.0), linear.fit_svc_binary(X, t, 1.0, seed=seed)):
        h = fit.objective_history
        assert all(b <= a + 1e-10 for a, b in zip(h, h[1:]))


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(1, 6), st.sampled_from([0.0, 0.5, 1.0]), st.booleans(), st.integers(0, 2 ** 32))
def test_nb_small_corpora_brute_force(n, d, alpha, fit_prior, seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 4, size=(n, d)).astype(float)
    y = np.arange(n) % 2
    params = fit_multinomial_nb(sp.csr_matrix(X), y, 2, alpha=alpha, fit_prior=fit_prior)
    with np.errstate(divide="ignore", invalid="ignore"):
        for c in range(2):
            rows = X[y == c]
            prior = math.log(len(rows) / n) if fit_prior else -math.log(2)
            fc = rows.sum(axis=0) + alpha
            total = fc.sum()
            logp = np.log(fc / total) if total > 0 else np.full(d, -np.inf)
            assert params["class_log_prior"][c] == pytest.approx(prior, abs=1e-12)
            assert np.allclose(params["feature_log_prob"][c], logp, atol=1e-12, rtol=0, equal_nan=False)
            jll = nb_joint_log_likelihood(params, sp.csr_matrix(X))[:, c]
            for i in range(n):
                want = prior + sum(X[i, j] * logp[j] for j in range(d) if X[i, j] > 0)
                if np.isinf(want):
                    assert jll[i] == want
                else:
                    assert jll[i] == pytest.approx(want, abs=1e-12)
