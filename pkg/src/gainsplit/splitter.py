"""Candidate split enumeration and best-split selection at a tree node.

Numeric columns get one binary candidate per midpoint between consecutive
distinct sorted values; categorical columns get a single full fan-out over
the values observed at the node. Every candidate is scored on its class-by-
partition contingency table by the impurity module; numeric thresholds are
swept in one vectorized pass per feature.

Selection is a pure function of the candidate set: maximum criterion value,
with ties (within ``TIE_EPS``) broken by higher underlying gain, then lower
feature index, then lower threshold. Candidates must produce at least two
nonempty children and a strictly positive score to be selected at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import CATEGORICAL, NUMERIC, NodeView, class_histogram
from .errors import DataError
from .impurity import (
    TIE_EPS,
    ContingencyTable,
    Criterion,
    Score,
    binary_split_scores,
    score,
)
from .rules import CategoricalFanout, NumericThreshold, SplitRule


@dataclass(frozen=True)
class SplitCandidate:
    rule: SplitRule
    score: Score
    arity: int
    child_sizes: tuple[int, ...]


def _column_kind(view: NodeView, feature: int) -> str:
    columns = view.dataset.schema.columns
    if not 0 <= feature < len(columns):
        raise DataError(f"unknown feature index {feature}")
    return columns[feature][1]


def _midpoints(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Thresholds halfway between consecutive distinct values.

    A midpoint that rounds up onto the right value would re-route that value
    leftward, so it is pulled back to the left value (<= keeps the same
    partition).
    """
    mids = (lo + hi) / 2.0
    return np.where(mids >= hi, lo, mids)


def numeric_candidates(view: NodeView, feature: int) -> list[NumericThreshold]:
    """All threshold rules for a numeric column within a view."""
    if _column_kind(view, feature) != NUMERIC:
        raise DataError(f"feature {feature} is not numeric")
    if len(view) == 0:
        raise DataError("empty view")
    distinct = np.unique(view.column(feature))
    return [NumericThreshold(feature, float(t))
            for t in _midpoints(distinct[:-1], distinct[1:])]


def categorical_candidate(view: NodeView, feature: int) -> CategoricalFanout | None:
    """The fan-out rule over observed categories, or None if fewer than two."""
    if _column_kind(view, feature) != CATEGORICAL:
        raise DataError(f"feature {feature} is not categorical")
    if len(view) == 0:
        raise DataError("empty view")
    observed = np.unique(view.column(feature))
    if len(observed) < 2:
        return None
    return CategoricalFanout(feature, tuple(int(v) for v in observed))


def contingency_table(view: NodeView, rule: SplitRule) -> ContingencyTable:
    """Class-by-partition counts for one rule applied to a view."""
    labels = view.labels()
    n_classes = view.dataset.n_classes
    if isinstance(rule, NumericThreshold):
        if _column_kind(view, rule.feature) != NUMERIC:
            raise DataError("numeric rule on non-numeric column")
        left = view.column(rule.feature) <= rule.threshold
        cells = np.stack([
            np.bincount(labels[left], minlength=n_classes),
            np.bincount(labels[~left], minlength=n_classes),
        ])
        return ContingencyTable(cells)
    if _column_kind(view, rule.feature) != CATEGORICAL:
        raise DataError("categorical rule on non-categorical column")
    codes = view.column(rule.feature)
    order = np.asarray(rule.values, dtype=codes.dtype)
    pos = np.searchsorted(order, codes)
    ok = (pos < len(order)) & (order[np.minimum(pos, len(order) - 1)] == codes)
    if not ok.all():
        raise DataError("categorical rule does not cover values present in the view")
    cells = np.bincount(pos * n_classes + labels,
                        minlength=len(order) * n_classes).reshape(len(order), n_classes)
    return ContingencyTable(cells)


def _numeric_sweep(view: NodeView, feature: int, parent_counts: np.ndarray,
                   criterion: Criterion):
    """Score every threshold of one numeric feature in a single pass."""
    values = view.column(feature)
    labels = view.labels()
    order = np.argsort(values, kind="stable")
    sv = values[order]
    sy = labels[order]
    boundaries = np.flatnonzero(sv[:-1] != sv[1:])
    if len(boundaries) == 0:
        return None
    one_hot = np.zeros((len(sv), len(parent_counts)), dtype=np.int64)
    one_hot[np.arange(len(sv)), sy] = 1
    left_counts = np.cumsum(one_hot, axis=0)[boundaries]
    thresholds = _midpoints(sv[boundaries], sv[boundaries + 1])
    crit_values, gains = binary_split_scores(left_counts, parent_counts, criterion)
    return thresholds, crit_values, gains


def _collect(view: NodeView, criterion: Criterion):
    """Candidate arrays (value, gain, feature, threshold) in canonical order.

    Features ascend, thresholds ascend within a feature; a categorical
    candidate carries NaN in the threshold slot.
    """
    parent_counts = class_histogram(view).counts
    values, gains, features, thresholds = [], [], [], []
    for f in view.dataset.schema.feature_indices:
        kind = view.dataset.schema.columns[f][1]
        if kind == NUMERIC:
            swept = _numeric_sweep(view, f, parent_counts, criterion)
            if swept is None:
                continue
            t, v, g = swept
            values.append(v)
            gains.append(g)
            features.append(np.full(len(t), f, dtype=np.intp))
            thresholds.append(t)
        else:
            rule = categorical_candidate(view, f)
            if rule is None:
                continue
            sc = score(contingency_table(view, rule), criterion)
            if not sc.valid:
                continue
            values.append(np.array([sc.value]))
            gains.append(np.array([sc.gain]))
            features.append(np.array([f], dtype=np.intp))
            thresholds.append(np.array([np.nan]))
    if not values:
        return None
    return (np.concatenate(values), np.concatenate(gains),
            np.concatenate(features), np.concatenate(thresholds))


def _pick(values, gains) -> int:
    """First index of the value-max/gain-max tie group (eps-tolerant)."""
    keep = values >= values.max() - TIE_EPS
    best_gain = gains[keep].max()
    keep &= gains >= best_gain - TIE_EPS
    return int(np.flatnonzero(keep)[0])


def _candidate_at(view: NodeView, features, thresholds, values, gains,
                  idx: int) -> SplitCandidate:
    f = int(features[idx])
    if np.isnan(thresholds[idx]):
        rule: SplitRule = categorical_candidate(view, f)
        sizes = tuple(int((view.column(f) == v).sum()) for v in rule.values)
    else:
        rule = NumericThreshold(f, float(thresholds[idx]))
        n_left = int((view.column(f) <= rule.threshold).sum())
        sizes = (n_left, len(view) - n_left)
    return SplitCandidate(rule=rule,
                          score=Score(value=float(values[idx]), gain=float(gains[idx])),
                          arity=rule.arity, child_sizes=sizes)


def best_split(view: NodeView, criterion: Criterion) -> SplitCandidate | None:
    """Highest-scoring valid split of a view, or None.

    Valid means a strictly positive criterion value; every enumerated
    candidate already has >= 2 nonempty children by construction. Degenerate
    views (fewer than 2 rows, or pure) have no valid split.
    """
    if len(view) < 2 or class_histogram(view).is_pure():
        return None
    collected = _collect(view, criterion)
    if collected is None:
        return None
    values, gains, features, thresholds = collected
    positive = values > 0.0
    if not positive.any():
        return None
    idx_map = np.flatnonzero(positive)
    local = _pick(values[idx_map], gains[idx_map])
    return _candidate_at(view, features, thresholds, values, gains, int(idx_map[local]))


def max_gain_candidate(view: NodeView, criterion: Criterion) -> SplitCandidate | None:
    """Candidate with the highest underlying gain, positive or not.

    Fallback used by tree induction when no candidate scores above zero;
    ties resolve by lower feature index then lower threshold.
    """
    if len(view) < 2:
        return None
    collected = _collect(view, criterion)
    if collected is None:
        return None
    values, gains, features, thresholds = collected
    keep = gains >= gains.max() - TIE_EPS
    idx = int(np.flatnonzero(keep)[0])
    return _candidate_at(view, features, thresholds, values, gains, idx)
