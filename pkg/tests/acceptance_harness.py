"""Reference-number checks on a labeled corpus, shared by the acceptance tests and their smoke test."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from ytcomments.corpus import Comment, CommentClass, Dataset, SplitSpec, load_dataset, split
from ytcomments.evaluation import BEST_VALUES, CVConfig, FeatureSetup, cross_validate, evaluate
from ytcomments.features import Vectorizer, VectorizerConfig
from ytcomments.models import KINDS, EstimatorSpec, predict
from ytcomments.preprocess import default_pipeline, run_many

CORPUS_ENV = "YTCOMMENTS_CORPUS"
TOLERANCE = 0.03
VOCAB_TOLERANCE = 0.15
SPELL_TOLERANCE = 0.01

# (mean CV score, weighted F1) per model
TARGETS = {
    "df_counts": {
        "linear_svc": (0.83, 0.86),
        "logistic_regression": (0.85, 0.87),
        "multinomial_nb": (0.79, 0.84),
        "random_forest": (0.83, 0.85),
        "decision_tree": (0.80, 0.83),
    },
    "tfidf": {
        "linear_svc": (0.84, 0.86),
        "logistic_regression": (0.84, 0.86),
        "multinomial_nb": (0.76, 0.82),
        "random_forest": (0.83, 0.84),
        "decision_tree": (0.80, 0.81),
    },
}
VOCAB_TARGETS = {"df_counts": 2210, "tfidf": 4304}
EXAMPLES = [
    ("hi, how to do this environment setting on windows 10", CommentClass.INTERROGATIVE),
    ("Thank you sooo much , sir!", CommentClass.POSITIVE),
    ("God has manifested to me in your form. Thank you.", CommentClass.POSITIVE),
    ("thank you sir helped alot.....", CommentClass.POSITIVE),
]


def corpus_from_env():
    path = os.environ.get(CORPUS_ENV)
    return load_dataset(path) if path else None


@dataclass
class Protocol:
    seed: int = 0
    folds: int = 5
    train_fraction: float = 0.8
    learning_sizes: tuple = (0.2, 1.0)
    # per-kind hyperparameter overrides, used only to keep smoke runs fast
    overrides: dict = field(default_factory=dict)

    def spec(self, kind: str, scheme: str) -> EstimatorSpec:
        return EstimatorSpec(kind, {**BEST_VALUES[scheme][kind], **self.overrides.get(kind, {})}, self.seed)

    def split(self, dataset: Dataset) -> tuple:
        return split(dataset, SplitSpec(self.train_fraction, self.seed))


@dataclass
class Check:
    name: str
    ok: bool
    detail: str


def run_scheme(dataset: Dataset, scheme: str, protocol: Protocol) -> dict:
    train_set, test_set = protocol.split(dataset)
    setup = FeatureSetup(vectorizer=VectorizerConfig(scheme=scheme))
    cv = CVConfig(protocol.folds, protocol.seed)
    return {kind: evaluate(protocol.spec(kind, scheme), train_set, test_set, setup, cv, protocol.learning_sizes,
                           protocol.seed)
            for kind in KINDS}


def check_table(runs: dict, scheme: str) -> list:
    out = []
    for kind, (cv_want, f1_want) in TARGETS[scheme].items():
        rep = runs[kind].report
        out.append(Check(f"{kind} cv", abs(rep.cv_score - cv_want) <= TOLERANCE, f"{rep.cv_score:.3f} vs {cv_want:.2f}"))
        out.append(Check(f"{kind} f1", abs(rep.f1 - f1_want) <= TOLERANCE, f"{rep.f1:.3f} vs {f1_want:.2f}"))
    return out


def vocabulary_sizes(dataset: Dataset) -> list:
    tokens = run_many(dataset.comments, default_pipeline())
    out = []
    for scheme, want in VOCAB_TARGETS.items():
        got = len(Vectorizer(VectorizerConfig(scheme=scheme)).fit(tokens).vocabulary)
        out.append(Check(f"{scheme} vocabulary", abs(got - want) <= VOCAB_TOLERANCE * want, f"{got} vs {want}"))
    return out


def check_ordering(runs: dict) -> list:
    reps = {k: r.report for k, r in runs.items()}
    lr = reps["logistic_regression"]
    best_cv = max(reps, key=lambda k: reps[k].cv_score)
    best_f1 = max(reps, key=lambda k: reps[k].f1)
    out = [Check("logistic best", best_cv == "logistic_regression" and best_f1 == "logistic_regression",
                 f"best cv {best_cv} ({reps[best_cv].cv_score:.3f}), best f1 {best_f1} ({reps[best_f1].f1:.3f}), "
                 f"logistic {lr.cv_score:.3f}/{lr.f1:.3f}")]
    for kind, rep in reps.items():
        misc = rep.per_class[CommentClass.MISCELLANEOUS.value]["f1"]
        out.append(Check(f"{kind} misc f1 < weighted", misc < rep.f1, f"{misc:.3f} vs {rep.f1:.3f}"))
        curve = rep.learning_curve
        first, last = curve[0], curve[-1]
        out.append(Check(f"{kind} curve rises", last["accuracy"] > first["accuracy"],
                         f"{first['size']}: {first['accuracy']:.3f} -> {last['size']}: {last['accuracy']:.3f}"))
    return out


def spell_ablation(dataset: Dataset, runs: dict, protocol: Protocol, scheme: str = "df_counts") -> list:
    train_set, _ = protocol.split(dataset)
    setup = FeatureSetup(default_pipeline().without("spell_correction"), VectorizerConfig(scheme=scheme))
    cv = CVConfig(protocol.folds, protocol.seed)
    out = []
    for kind in KINDS:
        base = runs[kind].report.cv_score
        off = cross_validate(protocol.spec(kind, scheme), train_set, setup, cv).mean
        out.append(Check(f"{kind} spell delta", abs(off - base) <= SPELL_TOLERANCE, f"{base:.4f} -> {off:.4f}"))
    return out


def classify_examples(run) -> list:
    tokens = run_many([Comment(f"ex{i}", text) for i, (text, _) in enumerate(EXAMPLES)], default_pipeline())
    X = Vectorizer.from_vocabulary(run.vectorizer.vocabulary).transform(tokens)
    got = predict(run.model, X)
    return [Check(text, g == want, f"{g} (expected {want})") for (text, want), g in zip(EXAMPLES, got)]


def summarize(checks: list) -> str:
    bad = [c for c in checks if not c.ok]
    shown = bad if bad else checks
    return "; ".join(f"{c.name}: {c.detail}" for c in shown[:6]) + (" ..." if len(shown) > 6 else "")
