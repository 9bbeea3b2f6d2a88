"""Impurity measures and split-gain criteria over contingency tables.

All logarithms are base 2. That choice is a fixed constant of this library:
the plain gain ratio is base-invariant, but the balanced gain ratio's
``1 +`` denominator is not, so changing the base would change which splits
it prefers. ``0 * log 0`` is taken as 0 throughout.

Four criteria are provided:

  information-gain      parent entropy minus weighted child entropy
  gain-ratio            entropy gain / split information
  balanced-gain-ratio   entropy gain / (1 + split information)
  gini-gain             same weighted-gain form with Gini impurity

Split information is the entropy of the partition-size distribution. It is
what penalizes high-arity splits: for n singleton branches it reaches its
maximum log2(n). Dividing by it (gain ratio) removes the many-valued-column
bias but over-rewards lopsided splits whose split information is tiny; the
``1 +`` variant keeps the penalty monotone while damping that second bias.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .dataset import ClassHistogram

#: Negative gains larger than this are rounding noise and are clamped to 0.
GAIN_EPS = 1e-12

#: Score comparisons treat values within this of each other as tied.
TIE_EPS = 1e-12


class Criterion(enum.Enum):
    INFORMATION_GAIN = "information-gain"
    GAIN_RATIO = "gain-ratio"
    BALANCED_GAIN_RATIO = "balanced-gain-ratio"
    GINI_GAIN = "gini-gain"

    @staticmethod
    def from_name(name: str) -> "Criterion":
        try:
            return Criterion(name.strip().lower().replace("_", "-"))
        except ValueError:
            valid = ", ".join(c.value for c in Criterion)
            raise DataError(f"unknown criterion {name!r}; valid: {valid}") from None


@dataclass(frozen=True)
class Score:
    """Criterion value plus the underlying purity gain (kept for tie-breaks)."""

    value: float
    gain: float
    valid: bool = True


@dataclass(frozen=True)
class ContingencyTable:
    """J x K class-by-partition counts with row/column/grand totals."""

    cells: np.ndarray
    row_totals: np.ndarray = field(default=None)  # type: ignore[assignment]
    col_totals: np.ndarray = field(default=None)  # type: ignore[assignment]
    grand_total: int = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise DataError("contingency table must be a J x K matrix, J,K >= 1")
        if (cells < 0).any():
            raise DataError("negative contingency cell")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "row_totals", cells.sum(axis=1))
        object.__setattr__(self, "col_totals", cells.sum(axis=0))
        object.__setattr__(self, "grand_total", int(cells.sum()))

    @property
    def arity(self) -> int:
        return self.cells.shape[0]

    def nonempty_children(self) -> int:
        return int((self.row_totals > 0).sum())


def _require_samples(total: int, what: str) -> None:
    if total <= 0:
        raise DataError(f"{what} over zero samples")


def _batch_entropy(counts: np.ndarray) -> np.ndarray:
    """Entropy in bits per row of a (B, K) count matrix; empty rows give 0."""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / totals
        terms = np.where(counts > 0, -p * np.log2(p), 0.0)
    return terms.sum(axis=1)


def _batch_gini(counts: np.ndarray) -> np.ndarray:
    """Gini impurity 1 - sum p^2 per row; empty rows give 0."""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
    return 1.0 - (p * p).sum(axis=1)


_MEASURES = {"entropy": _batch_entropy, "gini": _batch_gini}


def _clamp_gain(gain):
    """Round concavity-guaranteed-nonnegative gains up from tiny negatives."""
    return np.where((gain < 0.0) & (gain > -GAIN_EPS), 0.0, gain)


def entropy(hist: ClassHistogram) -> float:
    """Entropy of a class histogram, in bits; 0 for a pure node."""
    _require_samples(hist.total, "entropy")
    return float(_batch_entropy(hist.counts[None, :])[0])


def gini(hist: ClassHistogram) -> float:
    """Gini impurity 1 - sum p^2 of a class histogram."""
    _require_samples(hist.total, "gini")
    return float(_batch_gini(hist.counts[None, :])[0])


def purity_gain(table: ContingencyTable, measure: str = "entropy") -> float:
    """Parent impurity minus the size-weighted mean of child impurities.

    Empty partitions contribute nothing. The result is invariant to adding
    a constant to the impurity measure, since the weights sum to 1.
    """
    _require_samples(table.grand_total, "purity gain")
    impurity = _MEASURES[measure]
    parent = float(impurity(table.col_totals[None, :])[0])
    children = impurity(table.cells)
    n = float(table.grand_total)
    gain = parent
    for j in range(table.arity):
        gain -= (table.row_totals[j] / n) * float(children[j])
    return float(_clamp_gain(gain))


def split_information(table: ContingencyTable) -> float:
    """Entropy of the partition sizes, in bits.

    Depends only on how many rows land in each branch, not on classes; it is
    maximal, log2(n), when every branch holds a single row.
    """
    _require_samples(table.grand_total, "split information")
    return float(_batch_entropy(table.row_totals[None, :])[0])


def information_gain(table: ContingencyTable) -> Score:
    g = purity_gain(table, "entropy")
    return Score(value=g, gain=g)


def gain_ratio(table: ContingencyTable) -> Score:
    """Entropy gain normalized by split information.

    A split that routes every row into one branch has split information 0;
    it is scored 0 and flagged invalid rather than dividing by zero.
    """
    g = purity_gain(table, "entropy")
    si = split_information(table)
    if si == 0.0:
        return Score(value=0.0, gain=g, valid=False)
    return Score(value=g / si, gain=g)


def balanced_gain_ratio(table: ContingencyTable) -> Score:
    """Entropy gain over (1 + split information); always finite."""
    g = purity_gain(table, "entropy")
    si = split_information(table)
    return Score(value=g / (1.0 + si), gain=g)


def gini_gain(table: ContingencyTable) -> Score:
    g = purity_gain(table, "gini")
    return Score(value=g, gain=g)


_DISPATCH = {
    Criterion.INFORMATION_GAIN: information_gain,
    Criterion.GAIN_RATIO: gain_ratio,
    Criterion.BALANCED_GAIN_RATIO: balanced_gain_ratio,
    Criterion.GINI_GAIN: gini_gain,
}


def score(table: ContingencyTable, criterion: Criterion) -> Score:
    """Evaluate one criterion on a contingency table."""
    return _DISPATCH[criterion](table)


def binary_split_scores(left_counts: np.ndarray, parent_counts: np.ndarray,
                        criterion: Criterion) -> tuple[np.ndarray, np.ndarray]:
    """Score many binary splits of one node at once.

    ``left_counts`` holds one row per candidate threshold (the class counts
    of the <=-side); the right side is the complement against
    ``parent_counts``. Returns (criterion values, underlying gains), matching
    ``score()`` on each candidate's 2 x K table bit for bit, which keeps
    threshold enumeration fast without forking the math.
    """
    left = np.asarray(left_counts, dtype=np.int64)
    parent = np.asarray(parent_counts, dtype=np.int64)
    right = parent[None, :] - left
    if (right < 0).any():
        raise DataError("left counts exceed parent counts")
    n = float(parent.sum())
    _require_samples(int(n), "binary split scores")
    n_left = left.sum(axis=1)
    n_right = right.sum(axis=1)

    impurity = _batch_gini if criterion is Criterion.GINI_GAIN else _batch_entropy
    parent_impurity = float(impurity(parent[None, :])[0])
    gain = parent_impurity - (n_left / n) * impurity(left) - (n_right / n) * impurity(right)
    gain = _clamp_gain(gain)

    if criterion in (Criterion.INFORMATION_GAIN, Criterion.GINI_GAIN):
        return gain, gain
    si = _batch_entropy(np.stack([n_left, n_right], axis=1))
    if criterion is Criterion.GAIN_RATIO:
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(si > 0.0, gain / si, 0.0)
        return values, gain
    return gain / (1.0 + si), gain
