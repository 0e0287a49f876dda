"""Comment data model, the six-class label scheme, dataset I/O and splitting."""
from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Optional

import numpy as np


class DatasetError(ValueError):
    """Raised when a dataset file does not conform to the schema."""

    def __init__(self, message: str, row: Optional[int] = None, path: Optional[str] = None):
        self.row = row
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if row is not None:
            where += f" (row {row})" if where else f"row {row}"
        super().__init__(f"{where}: {message}" if where else message)


class UnknownLabelError(DatasetError):
    pass


class CommentClass(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    INTERROGATIVE = "interrogative"
    IMPERATIVE = "imperative"
    CORRECTIVE = "corrective"
    MISCELLANEOUS = "miscellaneous"

    @classmethod
    def parse(cls, value: "str | CommentClass") -> "CommentClass":
        if isinstance(value, CommentClass):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if member.value == key:
                return member
        accepted = ", ".join(m.value for m in cls)
        raise UnknownLabelError(f"unknown label {value!r}; expected one of: {accepted}")

    @property
    def index(self) -> int:
        return _CLASS_ORDER[self]

    def __lt__(self, other):
        if isinstance(other, CommentClass):
            return self.index < other.index
        return NotImplemented

    def __str__(self) -> str:
        return self.value


_CLASS_ORDER = {c: i for i, c in enumerate(CommentClass)}
CLASSES: tuple = tuple(CommentClass)


@dataclass(frozen=True)
class Comment:
    id: str
    text: str
    video_id: Optional[str] = None


@dataclass(frozen=True)
class LabeledComment:
    comment: Comment
    label: CommentClass

    @property
    def id(self) -> str:
        return self.comment.id

    @property
    def text(self) -> str:
        return self.comment.text


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of labeled comments."""

    records: tuple
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise DatasetError(f"duplicate id {rec.id!r}")
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[LabeledComment]:
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def ids(self) -> list:
        return [r.id for r in self.records]

    @property
    def labels(self) -> list:
        return [r.label for r in self.records]

    @property
    def comments(self) -> list:
        return [r.comment for r in self.records]

    def subset(self, indices: Iterable[int], provenance: Optional[str] = None) -> "Dataset":
        return Dataset(tuple(self.records[i] for i in indices), provenance or self.provenance)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


CSV_FIELDS = ("id", "video_id", "text", "label")


def _infer_format(path: Path, fmt: Optional[str]) -> str:
    if fmt:
        fmt = fmt.lower()
    else:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson", ".json") else "csv"
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unsupported format {fmt!r}")
    return fmt


def _iter_rows(path: Path, fmt: str, require_label: bool):
    """Yield (row_number, dict) pairs; row numbers are 1-based data rows."""
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            needed = ("id", "text", "label") if require_label else ("id", "text")
            missing = [f for f in needed if f not in header]
            if missing:
                raise DatasetError(f"missing column(s) {missing}; expected header {','.join(CSV_FIELDS)}", path=str(path))
            for n, row in enumerate(reader, start=1):
                if None in row:
                    raise DatasetError("too many fields", row=n, path=str(path))
                yield n, row
    else:
        with open(path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DatasetError(f"invalid JSON: {exc.msg}", row=n, path=str(path)) from None
                if not isinstance(obj, dict):
                    raise DatasetError("expected a JSON object", row=n, path=str(path))
                yield n, obj


def _comment_from_row(n: int, row: dict, path: Path) -> Comment:
    cid = row.get("id")
    text = row.get("text")
    if cid is None or str(cid).strip() == "":
        raise DatasetError("missing id", row=n, path=str(path))
    if text is None or not str(text).strip():
        raise DatasetError("empty text", row=n, path=str(path))
    video = row.get("video_id")
    video = None if video in (None, "") else str(video)
    return Comment(id=str(cid), text=str(text), video_id=video)


def load_dataset(path, format: Optional[str] = None) -> Dataset:
    """Load a labeled dataset from CSV (``id,video_id,text,label``) or JSONL."""
    path = Path(path)
    fmt = _infer_format(path, format)
    records = []
    seen = set()
    for n, row in _iter_rows(path, fmt, require_label=True):
        comment = _comment_from_row(n, row, path)
        if "label" not in row or row["label"] in (None, ""):
            raise DatasetError("missing label", row=n, path=str(path))
        try:
            label = CommentClass.parse(row["label"])
        except UnknownLabelError as exc:
            raise UnknownLabelError(str(exc), row=n, path=str(path)) from None
        if comment.id in seen:
            raise DatasetError(f"duplicate id {comment.id!r}", row=n, path=str(path))
        seen.add(comment.id)
        records.append(LabeledComment(comment, label))
    return Dataset(tuple(records), provenance=str(path))


def load_comments(path, format: Optional[str] = None) -> list:
    """Load unlabeled comments; a ``label`` column, if present, is ignored."""
    path = Path(path)
    fmt = _infer_format(path, format)
    if path.exists() and path.stat().st_size == 0:
        return []
    out = []
    seen = set()
    for n, row in _iter_rows(path, fmt, require_label=False):
        comment = _comment_from_row(n, row, path)
        if comment.id in seen:
            raise DatasetError(f"duplicate id {comment.id!r}", row=n, path=str(path))
        seen.add(comment.id)
        out.append(comment)
    return out


def save_dataset(dataset: Dataset, path, format: Optional[str] = None) -> None:
    path = Path(path)
    fmt = _infer_format(path, format)
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
            writer.writerow(CSV_FIELDS)
            for rec in dataset:
                c = rec.comment
                writer.writerow([c.id, c.video_id or "", c.text, rec.label.value])
    else:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in dataset:
                c = rec.comment
                obj = {"id": c.id, "video_id": c.video_id, "text": c.text, "label": rec.label.value}
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def class_histogram(dataset: Iterable) -> dict:
    counts = Counter(r.label for r in dataset)
    return {c: counts.get(c, 0) for c in CommentClass}


def _train_size(n: int, fraction: float) -> int:
    # round half up, keeping both sides non-empty
    k = int(math.floor(fraction * n + 0.5))
    return min(max(k, 1), n - 1)


def split_indices(labels: list, spec: SplitSpec) -> tuple:
    n = len(labels)
    if n < 2:
        raise ValueError("cannot split a dataset with fewer than 2 records")
    rng = np.random.default_rng(int(spec.seed))
    if not spec.stratified:
        perm = rng.permutation(n)
        k = _train_size(n, spec.train_fraction)
        return sorted(perm[:k].tolist()), sorted(perm[k:].tolist())
    train, test = [], []
    by_class: dict = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    for lab in sorted(by_class):
        idx = np.asarray(by_class[lab])
        perm = idx[rng.permutation(len(idx))]
        k = int(math.floor(spec.train_fraction * len(idx) + 0.5))
        train.extend(perm[:k].tolist())
        test.extend(perm[k:].tolist())
    if not train or not test:
        raise ValueError("stratified split produced an empty side; use more data")
    return sorted(train), sorted(test)


def split(dataset: Dataset, spec: SplitSpec = SplitSpec()) -> tuple:
    """Seeded random train/test partition; records keep their input order."""
    tr, te = split_indices(dataset.labels, spec)
    return (
        dataset.subset(tr, provenance=f"{dataset.provenance}#train"),
        dataset.subset(te, provenance=f"{dataset.provenance}#test"),
    )
