"""Table + suffix-rule lemmatizer."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True, eq=False)
class LemmaModel:
    """Lookup table first, then the first matching suffix rule, else identity.

    Steps repeat until the word stops changing, so ``lemma`` is idempotent.
    Construction enforces what makes that terminate: rules never lengthen a
    word (a same-length rule must be the identity, which acts as a stop), and
    every table value is itself a fixpoint.
    """

    lemma_table: Mapping[str, str]
    suffix_rules: tuple = ()

    def __post_init__(self):
        rules = tuple((str(s), str(r)) for s, r in self.suffix_rules)
        object.__setattr__(self, "suffix_rules", rules)
        for suffix, repl in rules:
            if not suffix:
                raise ValueError("empty suffix in lemma rules")
            if len(repl) > len(suffix) or (len(repl) == len(suffix) and repl != suffix):
                raise ValueError(f"rule {suffix!r}->{repl!r} must shorten the word or be the identity")
        for form, lemma in self.lemma_table.items():
            if self._step(lemma) != lemma:
                raise ValueError(f"lemma {lemma!r} (of {form!r}) is not a fixpoint of the table and rules")

    def _step(self, word: str) -> str:
        hit = self.lemma_table.get(word)
        if hit is not None:
            return hit
        for suffix, repl in self.suffix_rules:
            if word.endswith(suffix) and len(word) > len(suffix):
                return word[: -len(suffix)] + repl
        return word

    def lemma(self, word: str) -> str:
        for _ in range(len(word) + 2):
            nxt = self._step(word)
            if nxt == word:
                return word
            word = nxt
        return word


def lemmatize(tokens, model: LemmaModel) -> list:
    return [model.lemma(t) for t in tokens]


def load_lemma_table(path) -> dict:
    """Read ``form<TAB>lemma`` lines."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{n}: expected 'form<TAB>lemma'")
            out[parts[0]] = parts[1]
    return out


def load_suffix_rules(path) -> tuple:
    """Read ordered ``suffix<TAB>replacement`` lines (replacement may be empty)."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{n}: expected 'suffix<TAB>replacement'")
            rules.append((parts[0], parts[1]))
    return tuple(rules)
