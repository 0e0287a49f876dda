"""Document-frequency filtered vocabularies, count and tf-idf matrices, min-max scaling.

Vocabulary selection keeps a term when its document count ``n`` satisfies
``n > min_df_count`` and ``n / N <= max_df_fraction`` (``N`` = fitted documents;
repeated occurrences inside one document count once).

Cell values:

* ``df_counts``: raw term count in the document, later min-max scaled per
  column with training extrema, ``(x - min) / (max - min)``, clamped to [0, 1].
* ``tfidf``: ``tf * log(1 / df)`` using the training-time ``df``.
"""
from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

VOCAB_FORMAT = "ytcomments-vocabulary"
VOCAB_FORMAT_VERSION = 1

SCHEMES = ("df_counts", "tfidf")
_SCHEME_ALIASES = {"df": "df_counts", "df_counts": "df_counts", "tfidf": "tfidf", "tf-idf": "tfidf", "tf_idf": "tfidf"}


class EmptyCorpusError(ValueError):
    pass


class VocabularyFormatError(ValueError):
    pass


def canonical_scheme(name: str) -> str:
    try:
        return _SCHEME_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; expected one of {SCHEMES}") from None


@dataclass(frozen=True)
class VectorizerConfig:
    scheme: str = "df_counts"
    ngram_range: Optional[tuple] = None
    min_df_count: int = 5
    max_df_fraction: float = 0.5
    idf_log_base: float = math.e

    def __post_init__(self):
        scheme = canonical_scheme(self.scheme)
        object.__setattr__(self, "scheme", scheme)
        ngram = self.ngram_range
        if ngram is None:
            ngram = (1, 1) if scheme == "df_counts" else (1, 2)
        ngram = tuple(int(v) for v in ngram)
        object.__setattr__(self, "ngram_range", ngram)
        if len(ngram) != 2 or ngram[0] != 1 or ngram[1] not in (1, 2):
            raise ValueError(f"ngram_range must be (1, 1) or (1, 2), got {ngram}")
        if self.min_df_count < 0:
            raise ValueError("min_df_count must be >= 0")
        if not 0.0 < self.max_df_fraction <= 1.0:
            raise ValueError("max_df_fraction must lie in (0, 1]")
        if self.idf_log_base <= 0 or self.idf_log_base == 1:
            raise ValueError("idf_log_base must be positive and != 1")

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "ngram_range": list(self.ngram_range),
            "min_df_count": self.min_df_count,
            "max_df_fraction": self.max_df_fraction,
            "idf_log_base": self.idf_log_base,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VectorizerConfig":
        return cls(
            scheme=d["scheme"],
            ngram_range=tuple(d["ngram_range"]),
            min_df_count=int(d["min_df_count"]),
            max_df_fraction=float(d["max_df_fraction"]),
            idf_log_base=float(d["idf_log_base"]),
        )


@dataclass(frozen=True)
class ScalerState:
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        mins = np.asarray(self.mins, dtype=np.float64)
        maxs = np.asarray(self.maxs, dtype=np.float64)
        if mins.shape != maxs.shape or np.any(maxs < mins):
            raise ValueError("scaler needs max >= min per column")
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)


@dataclass(frozen=True, eq=False)
class Vocabulary:
    terms: tuple
    df: np.ndarray
    n_docs_fitted: int
    config: VectorizerConfig = field(default_factory=VectorizerConfig)
    scaler: Optional[ScalerState] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "df", np.asarray(self.df, dtype=np.float64))
        if len(self.df) != len(self.terms):
            raise ValueError("df length must match the number of terms")
        index = {t: i for i, t in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise ValueError("duplicate terms in vocabulary")
        object.__setattr__(self, "_index", index)
        if self.scaler is not None and self.scaler.mins.shape != (len(self.terms),):
            raise ValueError("scaler width must match the vocabulary")

    @property
    def index(self) -> dict:
        return self._index

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def doc_counts(self) -> np.ndarray:
        return np.rint(self.df * self.n_docs_fitted).astype(np.int64)

    def to_dict(self) -> dict:
        out = {
            "format": VOCAB_FORMAT,
            "format_version": VOCAB_FORMAT_VERSION,
            "config": self.config.to_dict(),
            "n_docs_fitted": self.n_docs_fitted,
            "terms": list(self.terms),
            "df": [float(v) for v in self.df],
            "scaler": None,
        }
        if self.scaler is not None:
            out["scaler"] = {"min": [float(v) for v in self.scaler.mins], "max": [float(v) for v in self.scaler.maxs]}
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        if d.get("format") != VOCAB_FORMAT:
            raise VocabularyFormatError("not a vocabulary file")
        if d.get("format_version") != VOCAB_FORMAT_VERSION:
            raise VocabularyFormatError(
                f"vocabulary format version {d.get('format_version')} unsupported (expected {VOCAB_FORMAT_VERSION})"
            )
        scaler = d.get("scaler")
        return cls(
            terms=tuple(d["terms"]),
            df=np.asarray(d["df"], dtype=np.float64),
            n_docs_fitted=int(d["n_docs_fitted"]),
            config=VectorizerConfig.from_dict(d["config"]),
            scaler=None if scaler is None else ScalerState(np.asarray(scaler["min"]), np.asarray(scaler["max"])),
        )

    def fingerprint(self) -> str:
        cached = self.__dict__.get("_fingerprint")
        if cached is None:
            payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8")
            cached = hashlib.sha256(payload).hexdigest()
            object.__setattr__(self, "_fingerprint", cached)
        return cached


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    values: sp.csr_matrix
    row_ids: tuple = ()
    fingerprint: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "values", sp.csr_matrix(self.values, dtype=np.float64))
        object.__setattr__(self, "row_ids", tuple(self.row_ids))
        if self.row_ids and len(self.row_ids) != self.values.shape[0]:
            raise ValueError("row_ids length must match the number of rows")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple:
        return self.values.shape

    def take(self, rows: Sequence[int]) -> "FeatureMatrix":
        rows = list(rows)
        ids = tuple(self.row_ids[i] for i in rows) if self.row_ids else ()
        return FeatureMatrix(self.values[rows], ids, self.fingerprint)

    def toarray(self) -> np.ndarray:
        return self.values.toarray()


def extract_terms(tokens: Sequence[str], ngram_range=(1, 1)) -> list:
    """Unigrams followed by space-joined adjacent bigrams (if requested)."""
    tokens = list(tokens)
    terms = list(tokens)
    if ngram_range[1] >= 2:
        terms.extend(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    return terms


def _tokens_of(doc):
    return doc.tokens if hasattr(doc, "tokens") else doc


def _ids_of(docs) -> tuple:
    if docs and all(hasattr(d, "id") for d in docs):
        return tuple(d.id for d in docs)
    return ()


def fit_vocabulary(train, config: VectorizerConfig = VectorizerConfig()) -> Vocabulary:
    train = list(train)
    n_docs = len(train)
    if n_docs == 0:
        raise EmptyCorpusError("cannot fit a vocabulary on an empty corpus")
    doc_counts: Counter = Counter()
    for doc in train:
        doc_counts.update(set(extract_terms(_tokens_of(doc), config.ngram_range)))
    keep = sorted(
        t for t, n in doc_counts.items()
        if n > config.min_df_count and n / n_docs <= config.max_df_fraction
    )
    if not keep:
        raise EmptyCorpusError(
            f"every term was filtered out (min_df_count={config.min_df_count}, "
            f"max_df_fraction={config.max_df_fraction}, documents={n_docs})"
        )
    df = np.array([doc_counts[t] / n_docs for t in keep], dtype=np.float64)
    return Vocabulary(tuple(keep), df, n_docs, config)


def _count_matrix(vocab: Vocabulary, docs) -> sp.csr_matrix:
    index = vocab.index
    indptr = [0]
    indices: list = []
    data: list = []
    for doc in docs:
        counts = Counter(t for t in extract_terms(_tokens_of(doc), vocab.config.ngram_range) if t in index)
        cols = sorted(index[t] for t in counts)
        indices.extend(cols)
        data.extend(counts[vocab.terms[c]] for c in cols)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, len(vocab)),
    )


def transform_counts(vocab: Vocabulary, docs) -> FeatureMatrix:
    docs = list(docs)
    return FeatureMatrix(_count_matrix(vocab, docs), _ids_of(docs), vocab.fingerprint())


def fit_scaler(matrix: FeatureMatrix) -> ScalerState:
    X = matrix.values
    if X.shape[0] == 0:
        raise EmptyCorpusError("cannot fit a scaler on zero rows")
    mins = np.asarray(X.min(axis=0).todense()).ravel()
    maxs = np.asarray(X.max(axis=0).todense()).ravel()
    return ScalerState(mins, maxs)


def apply_scaler(state: ScalerState, matrix: FeatureMatrix) -> FeatureMatrix:
    X = matrix.values
    if X.shape[1] != state.mins.shape[0]:
        raise ValueError(f"matrix has {X.shape[1]} columns, scaler expects {state.mins.shape[0]}")
    span = state.maxs - state.mins
    degenerate = span <= 0
    inv = np.where(degenerate, 0.0, 1.0 / np.where(degenerate, 1.0, span))
    if np.all(state.mins == 0):
        out = sp.csr_matrix(X @ sp.diags(inv))
        out.data = np.clip(out.data, 0.0, 1.0)
        out.eliminate_zeros()
    else:
        dense = (X.toarray() - state.mins) * inv
        out = sp.csr_matrix(np.clip(dense, 0.0, 1.0))
    return FeatureMatrix(out, matrix.row_ids, matrix.fingerprint)


def _idf(vocab: Vocabulary) -> np.ndarray:
    return np.log(1.0 / vocab.df) / math.log(vocab.config.idf_log_base)


def transform_tfidf(vocab: Vocabulary, docs) -> FeatureMatrix:
    docs = list(docs)
    counts = _count_matrix(vocab, docs)
    weighted = sp.csr_matrix(counts @ sp.diags(_idf(vocab)))
    weighted.eliminate_zeros()
    return FeatureMatrix(weighted, _ids_of(docs), vocab.fingerprint())


def fit_transform_tfidf(train, config: VectorizerConfig = VectorizerConfig(scheme="tfidf")) -> tuple:
    if config.scheme != "tfidf":
        raise ValueError("fit_transform_tfidf needs a tfidf config")
    train = list(train)
    vocab = fit_vocabulary(train, config)
    return vocab, transform_tfidf(vocab, train)


class Vectorizer:
    """Scheme dispatch: fit on training documents, transform anything after."""

    def __init__(self, config: VectorizerConfig = VectorizerConfig()):
        self.config = config
        self.vocabulary: Optional[Vocabulary] = None

    def fit(self, docs) -> "Vectorizer":
        self.fit_transform(docs)
        return self

    def fit_transform(self, docs) -> FeatureMatrix:
        docs = list(docs)
        vocab = fit_vocabulary(docs, self.config)
        if self.config.scheme == "tfidf":
            self.vocabulary = vocab
            return transform_tfidf(vocab, docs)
        counts = transform_counts(vocab, docs)
        scaler = fit_scaler(counts)
        self.vocabulary = replace(vocab, scaler=scaler)
        return self.transform(docs)

    def transform(self, docs) -> FeatureMatrix:
        if self.vocabulary is None:
            raise RuntimeError("vectorizer is not fitted")
        vocab = self.vocabulary
        if vocab.config.scheme == "tfidf":
            return transform_tfidf(vocab, docs)
        counts = transform_counts(vocab, docs)
        return apply_scaler(vocab.scaler, counts)

    @classmethod
    def from_vocabulary(cls, vocab: Vocabulary) -> "Vectorizer":
        if vocab.config.scheme == "df_counts" and vocab.scaler is None:
            raise VocabularyFormatError("df_counts vocabulary is missing its scaler state")
        v = cls(vocab.config)
        v.vocabulary = vocab
        return v


def save_vocabulary(vocab: Vocabulary, path) -> None:
    Path(path).write_text(json.dumps(vocab.to_dict(), indent=1) + "\n", encoding="utf-8")


def load_vocabulary(path) -> Vocabulary:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise VocabularyFormatError(f"corrupted vocabulary file: {exc}") from None
    return Vocabulary.from_dict(data)
