"""Decision-tree induction with interchangeable split-gain criteria.

The library grows C4.5-style trees (binary thresholds on numeric columns,
full fan-out on categorical ones) under any of four criteria: information
gain, gain ratio, balanced gain ratio (gain over one plus split
information), and Gini gain. A cross-validation harness and CLI benchmark
the criteria against each other on CSV datasets.
"""

__version__ = "0.1.0"

from .dataset import (
    ClassHistogram,
    Dataset,
    NodeView,
    Schema,
    class_histogram,
    infer_schema,
    load_csv,
    partition,
    read_schema_file,
)
from .errors import DataError, InvariantError
from .evaluation import CVPlan, EvaluationReport, compare, cross_validate, stratified_folds
from .impurity import (
    ContingencyTable,
    Criterion,
    Score,
    balanced_gain_ratio,
    entropy,
    gain_ratio,
    gini,
    purity_gain,
    score,
    split_information,
)
from .rules import CategoricalFanout, NumericThreshold, SplitRule
from .splitter import SplitCandidate, best_split, categorical_candidate, numeric_candidates
from .tree import (
    InductionConfig,
    Internal,
    Leaf,
    TreeNode,
    TreeStats,
    induce,
    predict,
    prune_pessimistic,
    tree_stats,
)

__all__ = [
    "__version__",
    "ClassHistogram", "Dataset", "NodeView", "Schema",
    "class_histogram", "infer_schema", "load_csv", "partition", "read_schema_file",
    "DataError", "InvariantError",
    "CVPlan", "EvaluationReport", "compare", "cross_validate", "stratified_folds",
    "ContingencyTable", "Criterion", "Score",
    "balanced_gain_ratio", "entropy", "gain_ratio", "gini", "purity_gain",
    "score", "split_information",
    "CategoricalFanout", "NumericThreshold", "SplitRule",
    "SplitCandidate", "best_split", "categorical_candidate", "numeric_candidates",
    "InductionConfig", "Internal", "Leaf", "TreeNode", "TreeStats",
    "induce", "predict", "prune_pessimistic", "tree_stats",
]
