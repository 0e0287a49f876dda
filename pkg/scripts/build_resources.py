"""Regenerate the shipped spelling dictionary and lemma table.

Build-time only. Requires ``pyspellchecker`` (word frequencies, MIT) and
``lemminflect`` (lemma lookup, MIT); neither is a runtime dependency.

    python scripts/build_resources.py
"""
import gzip
import json
import os
import re
from pathlib import Path

import spellchecker
from lemminflect import getAllLemmas

RESOURCES = Path(__file__).resolve().parents[1] / "src" / "ytcomments" / "preprocess" / "resources"
MIN_COUNT = 50
WORD_RE = re.compile(r"^[a-z]+$")

# Stopword forms allowed to be lemmatized; every other stopword is left alone so
# the exception list keeps matching.
STOPWORD_LEMMAS = {"does": "do", "did": "do", "has": "have", "had": "have"}


def load_frequencies():
    path = Path(os.path.dirname(spellchecker.__file__)) / "resources" / "en.json.gz"
    with gzip.open(path, "rt", encoding="utf-8") as fh:
        raw = json.load(fh)
    return {w: c for w, c in raw.items() if WORD_RE.match(w) and c >= MIN_COUNT}


def read_rules():
    rules = []
    for line in (RESOURCES / "lemma_suffix_rules.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            suffix, repl = line.split("\t")
            rules.append((suffix, repl))
    return rules


def apply_rules(word, rules):
    for suffix, repl in rules:
        if word.endswith(suffix) and len(word) > len(suffix):
            return word[: -len(suffix)] + repl
    return word


def pick_lemma(word):
    lemmas = getAllLemmas(word)
    for pos in ("NOUN", "VERB"):
        cands = lemmas.get(pos, ())
        # the word is the primary lemma here; later entries are variant spellings (install -> instal)
        if cands and cands[0] == word:
            continue
        for cand in cands:
            if cand != word and WORD_RE.match(cand):
                return cand
    return word


def main():
    freqs = load_frequencies()
    stopwords = set((RESOURCES / "stopwords_en.txt").read_text().split())
    for w in stopwords | set(STOPWORD_LEMMAS.values()):
        if WORD_RE.match(w):
            freqs.setdefault(w, MIN_COUNT)

    rules = read_rules()
    table = {}
    for word in sorted(freqs):
        if word in stopwords:
            lemma = STOPWORD_LEMMAS.get(word, word)
        else:
            lemma = pick_lemma(word)
        if lemma != word or apply_rules(word, rules) != word:
            table[word] = lemma

    # Lemmas must be fixpoints: resolve chains, then pin values the rules would alter.
    for word, lemma in list(table.items()):
        seen = {word}
        while lemma in table and table[lemma] != lemma and lemma not in seen:
            seen.add(lemma)
            lemma = table[lemma]
        table[word] = lemma
    for lemma in set(table.values()):
        if lemma not in table and apply_rules(lemma, rules) != lemma:
            table[lemma] = lemma

    with open(RESOURCES / "spell_en.tsv", "w", encoding="utf-8") as fh:
        for word in sorted(freqs):
            fh.write(f"{word}\t{freqs[word]}\n")
    with open(RESOURCES / "lemma_en.tsv", "w", encoding="utf-8") as fh:
        for word in sorted(table):
            fh.write(f"{word}\t{table[word]}\n")
    print(f"spell entries: {len(freqs)}; lemma entries: {len(table)}")


if __name__ == "__main__":
    main()
