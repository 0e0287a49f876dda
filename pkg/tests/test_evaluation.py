import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import f1_score

import ytcomments.features as features_mod
from synthetic import make_dataset
from ytcomments.corpus import CLASSES, SplitSpec, split
from ytcomments.evaluation import (
    SEARCH_GRIDS,
    CVConfig,
    EvaluationReport,
    FeatureSetup,
    Grid,
    GridSearchError,
    ReportVersionError,
    accuracy,
    best_spec,
    confusion_matrix,
    cross_validate,
    evaluate,
    f1_scores,
    grid_search,
    kfold_indices,
    learning_curve,
    nested_subsets,
)
from ytcomments.features import VectorizerConfig
from ytcomments.models import EstimatorSpec

SETUP = FeatureSetup(vectorizer=VectorizerConfig(min_df_count=2))


@pytest.fixture(scope="module")
def data():
    return split(make_dataset(240, seed=1), SplitSpec(0.8, 0))


@pytest.mark.property
def test_weighted_f1_example():
    rep = f1_scores(["A", "A", "B", "B"], ["A", "B", "B", "B"])
    assert rep.weighted == pytest.approx(11 / 15)
    assert rep.per_class["A"].f1 == pytest.approx(2 / 3)


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdefg")), min_size=1, max_size=60))
def test_f1_matches_sklearn(pairs):
    y_true, y_pred = [a for a, _ in pairs], [b for _, b in pairs]
    rep = f1_scores(y_true, y_pred)
    labels = sorted(set(y_true) | set(y_pred))
    assert rep.weighted == pytest.approx(f1_score(y_true, y_pred, labels=labels, average="weighted", zero_division=0))
    assert rep.macro == pytest.approx(f1_score(y_true, y_pred, labels=labels, average="macro", zero_division=0))


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(CLASSES), st.sampled_from(CLASSES)), max_size=60))
def test_confusion_invariants(pairs):
    y_true, y_pred = [a for a, _ in pairs], [b for _, b in pairs]
    m = confusion_matrix(y_true, y_pred)
    assert m.shape == (6, 6) and m.sum() == len(pairs)
    assert list(m.sum(axis=1)) == [y_true.count(c) for c in CLASSES]
    if pairs:
        assert np.trace(m) / len(pairs) == pytest.approx(accuracy(y_true, y_pred))


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(st.integers(2, 300), st.integers(2, 10), st.integers(0, 2 ** 32))
def test_kfold_partitions(n, k, seed):
    if k > n:
        with pytest.raises(ValueError):
            kfold_indices(n, CVConfig(k, seed))
        return
    folds = kfold_indices(n, CVConfig(k, seed))
    vals = np.concatenate([v for _, v in folds])
    assert sorted(vals.tolist()) == list(range(n))
    sizes = [len(v) for _, v in folds]
    assert max(sizes) - min(sizes) <= 1
    for tr, va in folds:
        assert not set(tr.tolist()) & set(va.tolist()) and len(tr) + len(va) == n


@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(st.integers(1, 400), st.lists(st.floats(0.01, 1.0), min_size=1, max_size=5), st.integers(0, 2 ** 32))
def test_learning_subsets_nest(n, sizes, seed):
    sizes = sorted(sizes)
    subs = nested_subsets(n, sizes, seed)
    for a, b in zip(subs, subs[1:]):
        assert set(a.tolist()) <= set(b.tolist())
    if sizes[-1] == 1.0:
        assert len(subs[-1]) == n


@pytest.mark.property
def test_vectorizer_sees_only_training_rows(data, monkeypatch):
    train_set, _ = data
    seen = []
    real = features_mod.fit_vocabulary

    def spy(docs, config=features_mod.VectorizerConfig()):
        docs = list(docs)
        seen.append({d.id for d in docs})
        return real(docs, config)

    monkeypatch.setattr(features_mod, "fit_vocabulary", spy)
    cv = CVConfig(5, 3)
    cross_validate(EstimatorSpec("nb"), train_set, SETUP, cv)
    ids = train_set.ids
    assert len(seen) == 5
    for got, (tr, va) in zip(seen, kfold_indices(len(train_set), cv)):
        assert got == {ids[i] for i in tr}
        assert not got & {ids[i] for i in va}


def test_grid_sizes():
    assert Grid.default("nb").size == 6
    assert Grid.default("svc").size == 5
    assert Grid.default("lr").size == 60
    assert Grid.default("rf").size == 12
    assert Grid.default("dt").size == 8
    assert set(SEARCH_GRIDS) == {"linear_svc", "logistic_regression", "multinomial_nb", "random_forest", "decision_tree"}


def test_singleton_grid_equals_plain_cv(data):
    train_set, _ = data
    res = grid_search(Grid("svc", {"C": [0.5]}), train_set, CVConfig(), SETUP)
    plain = cross_validate(EstimatorSpec("svc", {"C": 0.5}), train_set, SETUP, CVConfig())
    assert res.best == EstimatorSpec("svc", {"C": 0.5})
    assert res.best_score == pytest.approx(plain.mean)
    assert res.cells[0].fold_scores == plain.fold_scores


def test_nb_grid_search_and_ties_pick_first(data):
    train_set, _ = data
    res = grid_search(Grid.default("nb"), train_set, CVConfig(3), SETUP)
    assert len(res.cells) == 6 and all(c.status == "ok" for c in res.cells)
    top = max(c.mean for c in res.cells)
    first = next(c for c in res.cells if c.mean == top)
    assert res.best.hyperparameters == EstimatorSpec("nb", first.params).hyperparameters
    assert len(res.rows()) == 6


def test_unsupported_cells_skipped(data):
    train_set, _ = data
    res = grid_search(Grid("lr", {"penalty": ["l1", "l2"]}), train_set, CVConfig(3), SETUP)
    assert [c.status for c in res.cells] == ["skipped", "ok"]


def test_all_cells_failing_raises(data):
    train_set, _ = data
    with pytest.raises(GridSearchError):
        grid_search(Grid("lr", {"penalty": ["l1", "elasticnet"]}), train_set, CVConfig(3), SETUP)


def test_learning_curve_full_size_matches_plain_run(data):
    train_set, test_set = data
    spec = EstimatorSpec("svc")
    pts = learning_curve(spec, train_set, test_set, sizes=(0.5, 1.0), seed=4, setup=SETUP)
    plain = evaluate(spec, train_set, test_set, SETUP, cv=None)
    assert pts[-1].n_train == len(train_set)
    assert pts[-1].accuracy == pytest.approx(plain.report.accuracy)


def test_evaluate_report_round_trip(data, tmp_path):
    train_set, test_set = data
    run = evaluate(best_spec("nb", "df_counts"), train_set, test_set, SETUP, CVConfig(3), learning_sizes=(0.5, 1.0))
    rep = run.report
    assert set(rep.per_class) == {c.value for c in CLASSES}
    assert np.array(rep.confusion).sum() == len(test_set)
    assert 0 <= rep.f1 <= 1 and len(rep.cv_fold_scores) == 3 and len(rep.learning_curve) == 2
    p = tmp_path / "report.json"
    rep.save_json(p)
    assert EvaluationReport.load_json(p) == rep
    d = json.loads(p.read_text())
    d["format_version"] = 7
    p.write_text(json.dumps(d))
    with pytest.raises(ReportVersionError):
        EvaluationReport.load_json(p)


def test_single_class_fold_predicts_constant(data):
    train_set, _ = data
    from ytcomments.corpus import Dataset
    one = Dataset(tuple(r for r in train_set.records if r.label is CLASSES[0]))
    res = cross_validate(EstimatorSpec("svc"), one, SETUP, CVConfig(3))
    assert res.fold_scores == [1.0, 1.0, 1.0]
    assert any("one class" in w for w in res.warnings)
