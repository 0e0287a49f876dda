"""Dictionary-based spelling correction.

Candidates are dictionary words within ``max_edit_distance`` optimal-string-
alignment edits (insert, delete, substitute, adjacent transpose) of the token.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from typing import Mapping

import numba
import numpy as np

_CORRECTABLE = re.compile(r"^[a-z]+$")


@numba.njit(cache=True, nogil=True)
def _osa_bounded(a, la, b, lb, k, prev2, prev, cur):
    """OSA distance between a[:la] and b[:lb], or k+1 once it must exceed k."""
    if abs(la - lb) > k:
        return k + 1
    for j in range(lb + 1):
        prev[j] = j
    for i in range(1, la + 1):
        cur[0] = i
        row_min = cur[0]
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            v = prev[j] + 1
            if cur[j - 1] + 1 < v:
                v = cur[j - 1] + 1
            if prev[j - 1] + cost < v:
                v = prev[j - 1] + cost
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                if prev2[j - 2] + 1 < v:
                    v = prev2[j - 2] + 1
            cur[j] = v
            if v < row_min:
                row_min = v
        if row_min > k:
            return k + 1
        for j in range(lb + 1):
            prev2[j] = prev[j]
            prev[j] = cur[j]
    return prev[lb]


@numba.njit(cache=True, nogil=True)
def _scan(query, packed, offsets, lengths, lo, hi, k):
    n = hi - lo
    out = np.empty(n, dtype=np.int64)
    width = max(len(query), 1) + k + 2
    prev2 = np.empty(width + 64, dtype=np.int64)
    prev = np.empty(width + 64, dtype=np.int64)
    cur = np.empty(width + 64, dtype=np.int64)
    lq = len(query)
    for t in range(n):
        w = lo + t
        lw = lengths[w]
        if lw + 1 > prev.shape[0]:
            out[t] = k + 1
            continue
        out[t] = _osa_bounded(query, lq, packed[offsets[w]:offsets[w] + lw], lw, k, prev2, prev, cur)
    return out


def osa_distance(a: str, b: str) -> int:
    """Unbounded OSA distance (plain Python); reference implementation."""
    la, lb = len(a), len(b)
    d = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        d[i][0] = i
    for j in range(lb + 1):
        d[0][j] = j
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                d[i][j] = min(d[i][j], d[i - 2][j - 2] + 1)
    return d[la][lb]


@dataclass(frozen=True, eq=False)
class SpellModel:
    """Word-frequency dictionary plus the correction policy.

    ``prefer="distance"`` picks the nearest candidates first, then the most
    frequent among them; ``prefer="frequency"`` picks the most frequent word
    anywhere within ``max_edit_distance``, breaking ties by distance. Both
    break remaining ties lexicographically.
    """

    dictionary: Mapping[str, int]
    max_edit_distance: int = 2
    prefer: str = "distance"
    _index: dict = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.prefer not in ("distance", "frequency"):
            raise ValueError(f"prefer must be 'distance' or 'frequency', got {self.prefer!r}")
        if self.max_edit_distance < 0:
            raise ValueError("max_edit_distance must be >= 0")
        for w in self.dictionary:
            if w != w.lower():
                raise ValueError(f"dictionary keys must be lowercase: {w!r}")
        words = sorted(self.dictionary, key=lambda w: (len(w), w))
        encoded = [w.encode("utf-8") for w in words]
        lengths = np.fromiter((len(e) for e in encoded), dtype=np.int64, count=len(encoded))
        offsets = np.zeros(len(encoded), dtype=np.int64)
        if len(encoded) > 1:
            offsets[1:] = np.cumsum(lengths)[:-1]
        packed = np.frombuffer(b"".join(encoded), dtype=np.uint8) if encoded else np.zeros(0, np.uint8)
        freqs = np.array([self.dictionary[w] for w in words], dtype=np.int64)
        object.__setattr__(self, "_index", {
            "words": words, "packed": packed, "offsets": offsets, "lengths": lengths, "freqs": freqs,
            "cache": {}, "lock": threading.Lock(),
        })

    def __contains__(self, word: str) -> bool:
        return word in self.dictionary

    def candidates(self, word: str) -> list:
        """All ``(word, distance, frequency)`` within ``max_edit_distance``."""
        idx = self._index
        k = self.max_edit_distance
        if not idx["words"]:
            return []
        q = np.frombuffer(word.encode("utf-8"), dtype=np.uint8)
        lengths = idx["lengths"]
        lo = int(np.searchsorted(lengths, max(len(q) - k, 0), side="left"))
        hi = int(np.searchsorted(lengths, len(q) + k, side="right"))
        if hi <= lo:
            return []
        dist = _scan(q, idx["packed"], idx["offsets"], lengths, lo, hi, k)
        hits = np.nonzero(dist <= k)[0]
        words, freqs = idx["words"], idx["freqs"]
        return [(words[lo + h], int(dist[h]), int(freqs[lo + h])) for h in hits]

    def correct(self, word: str) -> str:
        if word in self.dictionary or not _CORRECTABLE.match(word):
            return word
        cache = self._index["cache"]
        hit = cache.get(word)
        if hit is not None:
            return hit
        cands = self.candidates(word)
        if not cands:
            best = word
        elif self.prefer == "distance":
            best = min(cands, key=lambda c: (c[1], -c[2], c[0]))[0]
        else:
            best = min(cands, key=lambda c: (-c[2], c[1], c[0]))[0]
        with self._index["lock"]:
            cache[word] = best
        return best


def correct_spelling(tokens, model: SpellModel) -> list:
    return [model.correct(t) for t in tokens]


def load_spell_dictionary(path) -> dict:
    """Read ``word<TAB>frequency`` lines."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                word, freq = line.split("\t")
                out[word.lower()] = out.get(word.lower(), 0) + int(freq)
            except ValueError:
                raise ValueError(f"{path}:{n}: expected 'word<TAB>frequency'") from None
    return out
