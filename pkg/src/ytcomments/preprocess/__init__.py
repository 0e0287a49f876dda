"""Comment cleaning: text normalization, spelling correction, lemmatization, stopwords.

The default step order is::

    lowercase, urls, newlines, punctuation, integers, emojis,
    spell_correction, lemmatize, stopwords

The first six operate on the raw string (:func:`normalize`); the text is then
split on whitespace and the remaining three operate on tokens.
"""
from __future__ import annotations

import hashlib
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
import importlib.resources as ilr
from typing import Optional

from ..corpus import Comment
from .lemmatizer import LemmaModel, lemmatize, load_lemma_table, load_suffix_rules
from .spelling import SpellModel, correct_spelling, load_spell_dictionary, osa_distance

logger = logging.getLogger(__name__)

TEXT_STEPS = ("lowercase", "urls", "newlines", "punctuation", "integers", "emojis")
TOKEN_STEPS = ("spell_correction", "lemmatize", "stopwords")
DEFAULT_STEPS = TEXT_STEPS + TOKEN_STEPS
ALL_STEPS = frozenset(DEFAULT_STEPS)

# Stopwords kept because they carry class signal (negation, questions, modals).
STOPWORD_EXCEPTIONS = frozenset({
    "no", "not",
    "how", "what", "which", "who", "whom", "why", "do", "does", "is", "are", "was", "were",
    "will", "am", "could", "would", "should", "can", "did", "had", "have",
})

_URL_RE = re.compile(r"(?:\b[a-z][a-z0-9+.\-]*://|\bwww\.)\S*", re.IGNORECASE)
_NEWLINE_RE = re.compile(r"[\r\n\u2028\u2029]+")
_DIGITS_RE = re.compile(r"\d+")
_EMOJI_RE = re.compile(
    "[\U0001F300-\U0001FAFF\u2600-\u27BF\uFE0F\u200D\U0001F1E6-\U0001F1FF]"
)
_SPACE_RE = re.compile(r"\s+")


def _in_emoji_range(ch: str) -> bool:
    return _EMOJI_RE.match(ch) is not None


@lru_cache(maxsize=None)
def is_punctuation(ch: str) -> bool:
    """Unicode punctuation or symbol, excluding the emoji ranges."""
    cat = unicodedata.category(ch)
    return cat[0] in "PS" and not _in_emoji_range(ch)


def _strip_punctuation(text: str) -> str:
    return "".join(" " if is_punctuation(ch) else ch for ch in text)




def _resource_path(name: str):
    return ilr.files(__name__).joinpath("resources", name)


def _sha256_file(name: str) -> str:
    return hashlib.sha256(_resource_path(name).read_bytes()).hexdigest()


def load_stopwords(path=None) -> frozenset:
    """One word per line, UTF-8."""
    if path is None:
        text = _resource_path("stopwords_en.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset:
    return load_stopwords()


@lru_cache(maxsize=None)
def default_speller() -> SpellModel:
    with ilr.as_file(_resource_path("spell_en.tsv")) as p:
        return SpellModel(load_spell_dictionary(p))


@lru_cache(maxsize=None)
def default_lemmatizer() -> LemmaModel:
    with ilr.as_file(_resource_path("lemma_en.tsv")) as t, \
            ilr.as_file(_resource_path("lemma_suffix_rules.tsv")) as r:
        return LemmaModel(load_lemma_table(t), load_suffix_rules(r))


@lru_cache(maxsize=None)
def _default_fingerprints() -> dict:
    return {
        "spell": _sha256_file("spell_en.tsv"),
        "lemma": hashlib.sha256(
            _resource_path("lemma_en.tsv").read_bytes() + b"\0" + _resource_path("lemma_suffix_rules.tsv").read_bytes()
        ).hexdigest(),
    }


@dataclass(frozen=True)
class TokenizedComment:
    id: str
    tokens: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))


@dataclass(frozen=True)
class PipelineConfig:
    steps: tuple = DEFAULT_STEPS
    stopword_list: frozenset = field(default_factory=default_stopwords)
    stopword_exceptions: frozenset = STOPWORD_EXCEPTIONS
    speller: Optional[SpellModel] = None
    lemmatizer: Optional[LemmaModel] = None

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "stopword_list", frozenset(self.stopword_list))
        object.__setattr__(self, "stopword_exceptions", frozenset(self.stopword_exceptions))
        unknown = [s for s in steps if s not in ALL_STEPS]
        if unknown:
            raise ValueError(f"unknown step(s) {unknown}; known: {', '.join(DEFAULT_STEPS)}")
        if len(set(steps)) != len(steps):
            raise ValueError("duplicate steps")
        seen_token_step = False
        for s in steps:
            if s in TOKEN_STEPS:
                seen_token_step = True
            elif seen_token_step:
                raise ValueError(f"text step {s!r} cannot follow a token step")
        stray = self.stopword_exceptions - self.stopword_list
        if stray and self.stopword_exceptions != STOPWORD_EXCEPTIONS:
            logger.warning("stopword exceptions not in the stopword list are ignored: %s", sorted(stray))

    def without(self, *names: str) -> "PipelineConfig":
        bad = [n for n in names if n not in ALL_STEPS]
        if bad:
            raise ValueError(f"unknown step(s) {bad}; known: {', '.join(DEFAULT_STEPS)}")
        return PipelineConfig(
            steps=tuple(s for s in self.steps if s not in names),
            stopword_list=self.stopword_list,
            stopword_exceptions=self.stopword_exceptions,
            speller=self.speller,
            lemmatizer=self.lemmatizer,
        )

    @property
    def spell_model(self) -> SpellModel:
        return self.speller if self.speller is not None else default_speller()

    @property
    def lemma_model(self) -> LemmaModel:
        return self.lemmatizer if self.lemmatizer is not None else default_lemmatizer()

    def to_dict(self) -> dict:
        fp = _default_fingerprints()
        out = {
            "steps": list(self.steps),
            "stopword_list": sorted(self.stopword_list),
            "stopword_exceptions": sorted(self.stopword_exceptions),
            "speller": "default" if self.speller is None else "custom",
            "lemmatizer": "default" if self.lemmatizer is None else "custom",
        }
        if self.speller is None:
            out["speller_sha256"] = fp["spell"]
        else:
            out["speller_max_edit_distance"] = self.speller.max_edit_distance
            out["speller_prefer"] = self.speller.prefer
        if self.lemmatizer is None:
            out["lemmatizer_sha256"] = fp["lemma"]
        return out

    @classmethod
    def from_dict(cls, data: dict, speller: Optional[SpellModel] = None,
                  lemmatizer: Optional[LemmaModel] = None) -> "PipelineConfig":
        fp = _default_fingerprints()
        if data.get("speller", "default") == "default" and data.get("speller_sha256", fp["spell"]) != fp["spell"]:
            logger.warning("spelling dictionary differs from the one the model was trained with")
        if data.get("lemmatizer", "default") == "default" and data.get("lemmatizer_sha256", fp["lemma"]) != fp["lemma"]:
            logger.warning("lemma resources differ from the ones the model was trained with")
        if data.get("speller") == "custom" and speller is None:
            raise ValueError("pipeline used a custom spelling model; pass it explicitly")
        if data.get("lemmatizer") == "custom" and lemmatizer is None:
            raise ValueError("pipeline used a custom lemmatizer; pass it explicitly")
        kwargs = {"steps": tuple(data.get("steps", DEFAULT_STEPS)), "speller": speller, "lemmatizer": lemmatizer}
        if "stopword_list" in data:
            kwargs["stopword_list"] = frozenset(data["stopword_list"])
        if "stopword_exceptions" in data:
            kwargs["stopword_exceptions"] = frozenset(data["stopword_exceptions"])
        return cls(**kwargs)


DEFAULT_PIPELINE = None  # built lazily; see default_pipeline()


def default_pipeline() -> PipelineConfig:
    global DEFAULT_PIPELINE
    if DEFAULT_PIPELINE is None:
        DEFAULT_PIPELINE = PipelineConfig()
    return DEFAULT_PIPELINE


def normalize(text: str, config: Optional[PipelineConfig] = None) -> str:
    steps = (config or default_pipeline()).steps
    for step in steps:
        if step == "lowercase":
            text = text.lower()
        elif step == "urls":
            text = _URL_RE.sub(" ", text)
        elif step == "newlines":
            text = _NEWLINE_RE.sub(" ", text)
        elif step == "punctuation":
            text = _strip_punctuation(text)
        elif step == "integers":
            text = _DIGITS_RE.sub(" ", text)
        elif step == "emojis":
            text = _EMOJI_RE.sub(" ", text)
    return _SPACE_RE.sub(" ", text).strip()


def tokenize(text: str) -> list:
    return text.split()


def remove_stopwords(tokens, config: Optional[PipelineConfig] = None) -> list:
    config = config or default_pipeline()
    drop = config.stopword_list - config.stopword_exceptions
    return [t for t in tokens if t not in drop]


def process_tokens(tokens, config: PipelineConfig) -> list:
    tokens = list(tokens)
    for step in config.steps:
        if step == "spell_correction":
            tokens = correct_spelling(tokens, config.spell_model)
        elif step == "lemmatize":
            tokens = lemmatize(tokens, config.lemma_model)
        elif step == "stopwords":
            tokens = remove_stopwords(tokens, config)
    return tokens


def run_pipeline(comment: Comment, config: Optional[PipelineConfig] = None) -> TokenizedComment:
    config = config or default_pipeline()
    tokens = tokenize(normalize(comment.text, config))
    return TokenizedComment(comment.id, process_tokens(tokens, config))


def run_many(comments, config: Optional[PipelineConfig] = None) -> list:
    config = config or default_pipeline()
    return [run_pipeline(c, config) for c in comments]


__all__ = [
    "ALL_STEPS", "DEFAULT_STEPS", "STOPWORD_EXCEPTIONS", "TEXT_STEPS", "TOKEN_STEPS",
    "LemmaModel", "PipelineConfig", "SpellModel", "TokenizedComment",
    "correct_spelling", "default_lemmatizer", "default_pipeline", "default_speller",
    "default_stopwords", "is_punctuation", "lemmatize", "load_lemma_table", "load_spell_dictionary",
    "load_stopwords", "load_suffix_rules", "normalize", "osa_distance", "process_tokens",
    "remove_stopwords", "run_many", "run_pipeline", "tokenize",
]
