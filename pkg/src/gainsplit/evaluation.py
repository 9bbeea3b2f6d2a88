"""Repeated stratified k-fold cross-validation and criterion comparison.

Folds are a deterministic function of (seed, repeat_index) only, so every
criterion in a comparison sees bit-identical train/test partitions. Rows
are grouped by class, each group is shuffled with the documented splitmix64
stream (see ``prng``), and samples are dealt round-robin into folds with a
single cursor that carries across classes: per-class fold counts differ by
at most one, and so do total fold sizes.

Accuracies are percentages; a report's mean is the plain arithmetic mean of
fold accuracies and the spread is their sample standard deviation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, NodeView
from .errors import DataError
from .impurity import Criterion
from .prng import stream_for_repeat
from .tree import InductionConfig, induce, predict_view, tree_stats


@dataclass(frozen=True)
class CVPlan:
    k: int = 5
    repeats: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise DataError("need at least 2 folds")
        if self.repeats < 1:
            raise DataError("need at least 1 repeat")


@dataclass(frozen=True)
class FoldScore:
    repeat: int
    fold: int
    accuracy: float
    depth: int
    leaves: int


@dataclass
class CriterionResult:
    criterion: Criterion
    fold_scores: list[FoldScore]
    wall_time_s: float

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([f.accuracy for f in self.fold_scores])

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def stddev_accuracy(self) -> float:
        return float(np.std(self.accuracies, ddof=1))

    @property
    def mean_depth(self) -> float:
        return float(np.mean([f.depth for f in self.fold_scores]))

    @property
    def max_depth(self) -> int:
        return max(f.depth for f in self.fold_scores)

    @property
    def mean_leaves(self) -> float:
        return float(np.mean([f.leaves for f in self.fold_scores]))


@dataclass
class EvaluationReport:
    plan: CVPlan
    results: list[CriterionResult]
    # (first criterion, second criterion, mean(second) - mean(first))
    differences: list[tuple[Criterion, Criterion, float]] = field(default_factory=list)

    def result_for(self, criterion: Criterion) -> CriterionResult:
        for r in self.results:
            if r.criterion is criterion:
                return r
        raise KeyError(criterion.value)


def stratified_folds(dataset: Dataset, plan: CVPlan, repeat_index: int) -> list[np.ndarray]:
    """Class-stratified fold index sets for one CV repeat.

    Folds partition [0, n); per-class counts across folds differ by at most
    one. Output is sorted within each fold; identical (seed, repeat_index)
    always produce identical folds.
    """
    n = dataset.n
    if n < plan.k:
        raise DataError(f"cannot make {plan.k} folds from {n} rows")
    rng = stream_for_repeat(plan.seed, repeat_index)
    y = dataset.y
    folds: list[list[int]] = [[] for _ in range(plan.k)]
    cursor = 0
    for c in range(dataset.n_classes):
        members = [int(i) for i in np.flatnonzero(y == c)]
        rng.shuffle(members)
        for row in members:
            folds[cursor % plan.k].append(row)
            cursor += 1
    return [np.array(sorted(f), dtype=np.intp) for f in folds]


def _run_fold(dataset: Dataset, config: InductionConfig,
              folds: list[np.ndarray], fold_index: int) -> tuple[float, int, int]:
    test_idx = folds[fold_index]
    train_idx = np.sort(np.concatenate([f for j, f in enumerate(folds) if j != fold_index]))
    tree = induce(NodeView(dataset, train_idx), config)
    test_view = NodeView(dataset, test_idx)
    predictions = predict_view(tree, test_view)
    accuracy = 100.0 * float(np.mean(predictions == test_view.labels()))
    stats = tree_stats(tree)
    return accuracy, stats.depth, stats.leaf_count


def cross_validate(dataset: Dataset, config: InductionConfig,
                   plan: CVPlan) -> CriterionResult:
    """Score one criterion over repeats x k folds."""
    scores: list[FoldScore] = []
    started = time.perf_counter()
    for repeat in range(plan.repeats):
        folds = stratified_folds(dataset, plan, repeat)
        for fold_index in range(plan.k):
            try:
                accuracy, depth, leaves = _run_fold(dataset, config, folds, fold_index)
            except DataError as exc:
                raise DataError(f"repeat {repeat} fold {fold_index}: {exc}") from exc
            scores.append(FoldScore(repeat=repeat, fold=fold_index,
                                    accuracy=accuracy, depth=depth, leaves=leaves))
    return CriterionResult(criterion=config.criterion, fold_scores=scores,
                           wall_time_s=time.perf_counter() - started)


def compare(dataset: Dataset, criteria: list[Criterion], plan: CVPlan,
            min_samples_split: int = 2, max_depth: int | None = None,
            pruning: str = "pessimistic") -> EvaluationReport:
    """Cross-validate several criteria on shared folds and diff their means.

    The difference entry for a pair (a, b) is mean(b) - mean(a), i.e. listing
    the baseline first yields "how much the second criterion gains".
    """
    if len(criteria) < 2:
        raise DataError("compare needs at least 2 criteria")
    results = []
    for criterion in criteria:
        config = InductionConfig(criterion=criterion,
                                 min_samples_split=min_samples_split,
                                 max_depth=max_depth, pruning=pruning)
        results.append(cross_validate(dataset, config, plan))
    differences = []
    for i in range(len(criteria)):
        for j in range(i + 1, len(criteria)):
            diff = results[j].mean_accuracy - results[i].mean_accuracy
            differences.append((criteria[i], criteria[j], diff))
    return EvaluationReport(plan=plan, results=results, differences=differences)
