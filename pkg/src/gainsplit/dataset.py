"""Tabular dataset loading, typing, and node-level row subsetting.

A loaded ``Dataset`` is immutable and column-major: numeric columns are
float64 arrays, categorical columns are int32 code arrays backed by a
per-column dictionary of observed string values (built once over the whole
file, so branch identities stay stable across CV folds). The target column
is always categorical; its dictionary doubles as the class-label list.

CSV dialect: comma-separated, double-quote escaping, first row is a header.
``?`` and the empty string are missing markers. A missing categorical cell
becomes the literal category ``"?"``; a row with a missing numeric or
missing target cell is dropped and counted.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .rules import CategoricalFanout, NumericThreshold, SplitRule

NUMERIC = "numeric"
CATEGORICAL = "categorical"

MISSING_MARKERS = frozenset({"", "?"})

#: Code used for a categorical string never seen at training time.
UNSEEN_CODE = -1


@dataclass(frozen=True)
class Schema:
    """Column names/kinds plus the designated target column."""

    columns: tuple[tuple[str, str], ...]
    target: str

    def __post_init__(self):
        names = [name for name, _ in self.columns]
        if len(set(names)) != len(names):
            raise DataError("duplicate column names in schema")
        if self.target not in names:
            raise DataError(f"target column {self.target!r} not in schema")
        for name, kind in self.columns:
            if kind not in (NUMERIC, CATEGORICAL):
                raise DataError(f"column {name!r} has unknown kind {kind!r}")
        if self.kind_of(self.target) != CATEGORICAL:
            raise DataError("target column must be categorical")

    @property
    def target_index(self) -> int:
        return next(i for i, (name, _) in enumerate(self.columns) if name == self.target)

    @property
    def feature_indices(self) -> tuple[int, ...]:
        t = self.target_index
        return tuple(i for i in range(len(self.columns)) if i != t)

    def kind_of(self, name: str) -> str:
        for col, kind in self.columns:
            if col == name:
                return kind
        raise DataError(f"unknown column {name!r}")

    def to_dict(self) -> dict:
        return {"columns": [list(c) for c in self.columns], "target": self.target}

    @staticmethod
    def from_dict(d: dict) -> "Schema":
        return Schema(tuple((n, k) for n, k in d["columns"]), d["target"])


@dataclass
class Dataset:
    """Column-typed sample table. Immutable after load; safe to share."""

    schema: Schema
    columns: list[np.ndarray]
    categories: dict[int, list[str]]  # per categorical column index
    n_dropped: int = 0

    def __post_init__(self):
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise DataError("ragged columns")

    @property
    def n(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def y(self) -> np.ndarray:
        return self.columns[self.schema.target_index]

    @property
    def class_labels(self) -> list[str]:
        return self.categories[self.schema.target_index]

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    def full_view(self) -> "NodeView":
        return NodeView(self, np.arange(self.n, dtype=np.intp))

    def decode_cell(self, row: int, col: int) -> str:
        kind = self.schema.columns[col][1]
        if kind == NUMERIC:
            v = self.columns[col][row]
            return repr(float(v))
        code = int(self.columns[col][row])
        return "?" if code == UNSEEN_CODE else self.categories[col][code]


@dataclass(frozen=True)
class NodeView:
    """Index subset of a dataset, as seen by one tree node."""

    dataset: Dataset
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp)
        object.__setattr__(self, "indices", idx)
        if idx.size and (idx.min() < 0 or idx.max() >= self.dataset.n):
            raise DataError("view indices out of bounds")
        if len(np.unique(idx)) != len(idx):
            raise DataError("view indices not unique")

    def __len__(self) -> int:
        return len(self.indices)

    def column(self, col: int) -> np.ndarray:
        return self.dataset.columns[col][self.indices]

    def labels(self) -> np.ndarray:
        return self.dataset.y[self.indices]


@dataclass(frozen=True)
class ClassHistogram:
    """Per-class counts over some row subset; length is always K."""

    counts: np.ndarray
    total: int = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        total = int(counts.sum()) if self.total is None else int(self.total)
        if total != int(counts.sum()):
            raise DataError("histogram total does not match counts")
        if (counts < 0).any():
            raise DataError("negative class count")
        object.__setattr__(self, "total", total)

    def majority(self) -> int:
        """Argmax class code, ties to the lowest code."""
        return int(np.argmax(self.counts))

    def is_pure(self) -> bool:
        return int((self.counts > 0).sum()) <= 1


def class_histogram(view: NodeView) -> ClassHistogram:
    """Tally the view's rows per class."""
    if len(view) == 0:
        raise DataError("empty view has no class histogram")
    counts = np.bincount(view.labels(), minlength=view.dataset.n_classes)
    return ClassHistogram(counts.astype(np.int64))


def partition(view: NodeView, rule: SplitRule) -> list[NodeView]:
    """Split a view's rows into child views along a rule.

    Children are a disjoint cover of the parent: a numeric rule yields
    (<= threshold, > threshold); a categorical rule yields one child per
    declared value, in declared order, keeping empty children.
    """
    kind = view.dataset.schema.columns[rule.feature][1] if 0 <= rule.feature < len(view.dataset.schema.columns) else None
    if kind is None:
        raise DataError(f"rule references unknown feature index {rule.feature}")
    values = view.column(rule.feature)
    if isinstance(rule, NumericThreshold):
        if kind != NUMERIC:
            raise DataError(f"numeric rule on {kind} column {rule.feature}")
        mask = values <= rule.threshold
        return [NodeView(view.dataset, view.indices[mask]),
                NodeView(view.dataset, view.indices[~mask])]
    if kind != CATEGORICAL:
        raise DataError(f"categorical rule on {kind} column {rule.feature}")
    declared = set(rule.values)
    observed = set(int(v) for v in np.unique(values))
    if not observed <= declared:
        raise DataError("categorical rule does not cover values present in the view")
    return [NodeView(view.dataset, view.indices[values == v]) for v in rule.values]


def _parse_numeric(cell: str) -> float:
    v = float(cell)
    if not math.isfinite(v):
        raise ValueError("non-finite")
    return v


def _is_numeric_cell(cell: str) -> bool:
    try:
        _parse_numeric(cell)
        return True
    except ValueError:
        return False


def _read_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty file") from None
            rows = [row for row in reader if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {i + 2} has {len(row)} cells, header has {width}")
    return [h.strip() for h in header], [[c.strip() for c in row] for row in rows]


def infer_schema(path: str | Path, target: str) -> Schema:
    """Type columns from the file: numeric iff every non-missing cell parses
    as a finite real; the target is forced categorical."""
    header, rows = _read_rows(path)
    if target not in header:
        raise DataError(f"target column {target!r} not found in {path}")
    columns = []
    for j, name in enumerate(header):
        if name == target:
            columns.append((name, CATEGORICAL))
            continue
        cells = [row[j] for row in rows if row[j] not in MISSING_MARKERS]
        kind = NUMERIC if cells and all(_is_numeric_cell(c) for c in cells) else CATEGORICAL
        columns.append((name, kind))
    return Schema(tuple(columns), target)


def read_schema_file(path: str | Path) -> Schema:
    """Sidecar schema: one ``name,kind`` line per column plus ``target=<name>``."""
    columns = []
    target = None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read schema {path}: {exc}") from exc
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("target="):
            target = line.split("=", 1)[1].strip()
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise DataError(f"{path}: bad schema line {line!r}")
        columns.append((parts[0], parts[1]))
    if target is None:
        raise DataError(f"{path}: schema file missing target= line")
    return Schema(tuple(columns), target)


def load_csv(path: str | Path, schema: Schema | None = None,
             target: str | None = None) -> Dataset:
    """Load a CSV into a typed Dataset.

    Pass an explicit ``schema`` or a ``target`` name to infer one. Rows with
    a missing target or missing numeric cell are dropped (counted in
    ``n_dropped``); missing categorical cells become the category ``"?"``.
    """
    if schema is None:
        if target is None:
            raise DataError("need a schema or a target column name")
        schema = infer_schema(path, target)
    header, rows = _read_rows(path)
    names = [name for name, _ in schema.columns]
    if header != names:
        raise DataError(f"{path}: header {header} does not match schema columns {names}")

    kinds = [kind for _, kind in schema.columns]
    t = schema.target_index
    kept: list[list[str]] = []
    dropped = 0
    for row in rows:
        if row[t] in MISSING_MARKERS:
            dropped += 1
            continue
        if any(kinds[j] == NUMERIC and row[j] in MISSING_MARKERS for j in range(len(row))):
            dropped += 1
            continue
        kept.append(row)
    if not kept:
        raise DataError(f"{path}: no usable rows after dropping {dropped}")

    columns: list[np.ndarray] = []
    categories: dict[int, list[str]] = {}
    for j, kind in enumerate(kinds):
        cells = [row[j] for row in kept]
        if kind == NUMERIC:
            try:
                columns.append(np.array([_parse_numeric(c) for c in cells], dtype=np.float64))
            except ValueError as exc:
                raise DataError(
                    f"{path}: column {names[j]!r} declared numeric but has a "
                    f"non-numeric cell") from exc
        else:
            dictionary: list[str] = []
            seen: dict[str, int] = {}
            codes = np.empty(len(cells), dtype=np.int32)
            for i, cell in enumerate(cells):
                value = "?" if cell in MISSING_MARKERS else cell
                code = seen.get(value)
                if code is None:
                    code = len(dictionary)
                    seen[value] = code
                    dictionary.append(value)
                codes[i] = code
            columns.append(codes)
            categories[j] = dictionary

    ds = Dataset(schema, columns, categories, n_dropped=dropped)
    if ds.n_classes < 1:
        raise DataError(f"{path}: no class labels")
    return ds


def encode_with(dataset_schema: Schema, categories: dict[int, list[str]],
                path: str | Path, require_target: bool = True,
                ) -> tuple[Dataset, list[list[str]], list[str], int, int]:
    """Encode a CSV against an existing schema and category dictionaries.

    For prediction inputs: feature columns must all be present by name; extra
    columns are ignored and the target may be absent unless required. Returns
    (encoded dataset, kept raw rows in input order, input header, dropped-row
    count, count of categorical cells unseen in the dictionaries). Unseen
    values get ``UNSEEN_CODE`` so prediction can fall back to node majorities.
    """
    header, rows = _read_rows(path)
    t = dataset_schema.target_index
    col_pos: list[int | None] = []
    for j, (name, _) in enumerate(dataset_schema.columns):
        if name in header:
            col_pos.append(header.index(name))
        elif j == t and not require_target:
            col_pos.append(None)
        else:
            raise DataError(f"{path}: required column {name!r} missing from input")

    kinds = [kind for _, kind in dataset_schema.columns]
    kept: list[list[str]] = []  # schema-ordered cells
    raw_kept: list[list[str]] = []  # original rows, input order
    dropped = 0
    for row in rows:
        cells = ["" if p is None else row[p] for p in col_pos]
        if require_target and cells[t] in MISSING_MARKERS:
            dropped += 1
            continue
        numeric_missing = any(
            kinds[j] == NUMERIC and cells[j] in MISSING_MARKERS
            for j in range(len(cells)))
        if numeric_missing:
            dropped += 1
            continue
        kept.append(cells)
        raw_kept.append(row)
    if not kept:
        raise DataError(f"{path}: no usable rows after dropping {dropped}")

    unseen = 0
    columns: list[np.ndarray] = []
    for j, kind in enumerate(kinds):
        cells = [row[j] for row in kept]
        if kind == NUMERIC:
            try:
                columns.append(np.array([_parse_numeric(c) for c in cells], dtype=np.float64))
            except ValueError as exc:
                raise DataError(
                    f"{path}: column {dataset_schema.columns[j][0]!r} declared numeric "
                    f"but has a non-numeric cell") from exc
        else:
            lookup = {v: i for i, v in enumerate(categories.get(j, []))}
            codes = np.empty(len(cells), dtype=np.int32)
            for i, cell in enumerate(cells):
                value = "?" if cell in MISSING_MARKERS else cell
                code = lookup.get(value, UNSEEN_CODE)
                if code == UNSEEN_CODE and j != t:
                    unseen += 1
                codes[i] = code
            columns.append(codes)

    ds = Dataset(dataset_schema, columns, dict(categories))
    return ds, raw_kept, header, dropped, unseen
