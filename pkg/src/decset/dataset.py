"""CSV ingestion, binarization and majority-vote consistency resolution."""

from __future__ import annotations

import csv
import io
import logging
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

log = logging.getLogger(__name__)

Vector = Tuple[int, ...]

MISSING = {"", "?"}


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class RawDataset:
    feature_names: List[str]
    rows: List[Tuple[Tuple[str, ...], str]]
    class_name: str = "class"

    def __post_init__(self):
        if not self.feature_names:
            raise DataError("dataset has no feature columns")
        if not self.rows:
            raise DataError("no data rows")
        for i, (vals, _) in enumerate(self.rows):
            if len(vals) != len(self.feature_names):
                raise DataError(f"row {i + 1}: expected {len(self.feature_names)} values, got {len(vals)}")


def parse_csv(text) -> RawDataset:
    """Parse comma-separated text (or a file object); the last column is the
    class.  Row numbers in errors count data rows from 1."""
    if not isinstance(text, str):
        text = text.read()
    reader = csv.reader(io.StringIO(text))
    lines = [r for r in reader if r and any(x.strip() for x in r)]
    if not lines:
        raise DataError("empty input")
    header = [h.strip() for h in lines[0]]
    if len(header) < 2:
        raise DataError("need at least one feature column and a class column")
    rows = []
    for i, rec in enumerate(lines[1:], 1):
        if len(rec) != len(header):
            raise DataError(f"row {i}: expected {len(header)} fields, got {len(rec)}")
        rec = [x.strip() for x in rec]
        for name, x in zip(header, rec):
            if x in MISSING:
                raise DataError(f"row {i}: missing value for {name!r}")
        rows.append((tuple(rec[:-1]), rec[-1]))
    if not rows:
        raise DataError("no data rows")
    return RawDataset(header[:-1], rows, header[-1])


@dataclass
class BoolFeature:
    """One Boolean feature derived from an original column.

    For a two-valued column ``values`` holds ``(value at 0, value at 1)``;
    for a one-hot column it holds the single value whose presence is 1.
    """

    column: str
    kind: str  # "binary" | "onehot"
    values: Tuple[str, ...]

    def literal(self, sigma: int) -> Tuple[str, str, bool]:
        """(column, value, negated) for the literal f^sigma."""
        if self.kind == "binary":
            return self.column, self.values[sigma], False
        return self.column, self.values[0], sigma == 0


@dataclass
class BinarizationMap:
    columns: List[str]
    column_values: Dict[str, List[str]]
    features: List[BoolFeature]
    classes: List[str]
    class_name: str = "class"
    dropped: List[str] = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.features)

    def class_index(self, name: str) -> int:
        try:
            return self.classes.index(name)
        except ValueError:
            raise DataError(f"unknown class {name!r}") from None

    def decode_literal(self, r: int, sigma: int) -> Tuple[str, str, bool]:
        return self.features[r].literal(sigma)

    def encode_literal(self, column: str, value: str, negated: bool = False) -> Tuple[int, int]:
        for r, f in enumerate(self.features):
            if f.column != column:
                continue
            if f.kind == "binary" and value in f.values and not negated:
                return r, f.values.index(value)
            if f.kind == "onehot" and f.values[0] == value:
                return r, 0 if negated else 1
        if column not in self.columns:
            raise DataError(f"unknown feature {column!r}")
        raise DataError(f"unknown value {value!r} for feature {column!r}")

    def encode_row(self, values: Sequence[str]) -> Vector:
        if len(values) != len(self.columns):
            raise DataError(f"expected {len(self.columns)} feature values, got {len(values)}")
        by_col = dict(zip(self.columns, values))
        out = []
        for f in self.features:
            x = by_col[f.column]
            if f.kind == "binary":
                if x not in f.values:
                    raise DataError(f"unseen value {x!r} for binary feature {f.column!r}")
                out.append(f.values.index(x))
            else:
                out.append(int(x == f.values[0]))
        return tuple(out)

    def decode_row(self, vec: Sequence[int]) -> Dict[str, str]:
        """Original values of the non-dropped columns for a valid vector."""
        if len(vec) != self.K:
            raise DataError(f"vector width {len(vec)} != {self.K}")
        out: Dict[str, str] = {}
        for f, bit in zip(self.features, vec):
            if f.kind == "binary":
                out[f.column] = f.values[bit]
            elif bit:
                if f.column in out:
                    raise DataError(f"two hot values for {f.column!r}")
                out[f.column] = f.values[0]
        return out

    def to_json(self) -> dict:
        feats = []
        for r, f in enumerate(self.features):
            feats.append({"index": r, "column": f.column, "encoding": f.kind, "values": list(f.values)})
        return {
            "columns": list(self.columns),
            "column_values": {c: list(v) for c, v in self.column_values.items()},
            "features": feats,
            "classes": list(self.classes),
            "class_name": self.class_name,
            "dropped": list(self.dropped),
        }

    @classmethod
    def from_json(cls, d: dict) -> "BinarizationMap":
        try:
            feats = [BoolFeature(f["column"], f["encoding"], tuple(f["values"])) for f in d["features"]]
            return cls(
                columns=list(d["columns"]),
                column_values={c: list(v) for c, v in d["column_values"].items()},
                features=feats,
                classes=list(d["classes"]),
                class_name=d.get("class_name", "class"),
                dropped=list(d.get("dropped", [])),
            )
        except (KeyError, TypeError) as e:
            raise DataError(f"malformed binarization map: {e}") from None


@dataclass(frozen=True)
class BinaryDataset:
    K: int
    examples: List[Tuple[Vector, int]]
    class_count: int

    def __post_init__(self):
        for v, c in self.examples:
            if len(v) != self.K:
                raise DataError(f"vector width {len(v)} != {self.K}")
            if not 0 <= c < self.class_count:
                raise DataError(f"class index {c} out of range")


def binarize(raw: RawDataset) -> Tuple[BinaryDataset, BinarizationMap]:
    """Two-valued columns become one feature (alphabetically first value at
    0); wider columns are one-hot encoded; constant columns are dropped."""
    features: List[BoolFeature] = []
    column_values: Dict[str, List[str]] = {}
    dropped = []
    for j, name in enumerate(raw.feature_names):
        values = sorted({vals[j] for vals, _ in raw.rows})
        column_values[name] = values
        if len(values) == 1:
            log.warning("dropping constant feature %r", name)
            dropped.append(name)
        elif len(values) == 2:
            features.append(BoolFeature(name, "binary", tuple(values)))
        else:
            features.extend(BoolFeature(name, "onehot", (v,)) for v in values)
    classes = sorted({c for _, c in raw.rows})
    bmap = BinarizationMap(list(raw.feature_names), column_values, features, classes, raw.class_name, dropped)
    cidx = {c: i for i, c in enumerate(classes)}
    examples = [(bmap.encode_row(vals), cidx[c]) for vals, c in raw.rows]
    return BinaryDataset(len(features), examples, len(classes)), bmap


@dataclass(frozen=True)
class ClassSplit:
    """One-vs-rest split for ``target``.

    ``pos_counts[i]`` / ``neg_counts[j]`` are the numbers of surviving rows
    behind each listed vector; ``errors`` is the number of rows outvoted by
    the majority label of their vector.
    """

    target: int
    positives: List[Vector]
    negatives: List[Vector]
    pos_counts: List[int]
    neg_counts: List[int]
    errors: int


def majority_labels(ds: BinaryDataset) -> "OrderedDict[Vector, Tuple[int, Counter]]":
    """Vector -> (majority class, label counts), in first-occurrence order.
    Ties go to the smallest class index."""
    groups: "OrderedDict[Vector, Counter]" = OrderedDict()
    for v, c in ds.examples:
        groups.setdefault(v, Counter())[c] += 1
    out = OrderedDict()
    for v, cnt in groups.items():
        best = min(cnt, key=lambda c: (-cnt[c], c))
        out[v] = (best, cnt)
    return out


def resolve_consistency(ds: BinaryDataset, target_class: int, keep_duplicates: bool = False) -> ClassSplit:
    if not 0 <= target_class < ds.class_count:
        raise DataError(f"class index {target_class} out of range")
    groups = majority_labels(ds)
    errors = sum(sum(cnt.values()) - cnt[best] for best, cnt in groups.values())
    pos, neg, pc, nc = [], [], [], []
    if keep_duplicates:
        for v, c in ds.examples:
            best = groups[v][0]
            if c != best:
                continue
            (pos if best == target_class else neg).append(v)
            (pc if best == target_class else nc).append(1)
    else:
        for v, (best, cnt) in groups.items():
            if best == target_class:
                pos.append(v)
                pc.append(cnt[best])
            else:
                neg.append(v)
                nc.append(cnt[best])
    return ClassSplit(target_class, pos, neg, pc, nc, errors)
