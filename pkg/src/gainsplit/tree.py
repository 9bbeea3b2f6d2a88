"""Top-down tree induction, pessimistic pruning, prediction, statistics.

Induction is greedy: at each node the best split under the configured
criterion is taken, recursing until the node is pure, too small, at the
depth cap, or splitless. When no candidate scores above zero on an impure,
splittable node, the candidate with the highest underlying gain is tried;
if that gain is zero too the node becomes a majority leaf. Growth and all
traversals use explicit stacks so arbitrarily deep trees cannot overflow
the interpreter stack.

Pruning is pessimistic error pruning on the training counts: one top-down
pass, replacing an internal node by its majority leaf when the node's
continuity-corrected error does not exceed the subtree's by more than one
standard error. Pruned subtrees are not descended into.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import CATEGORICAL, ClassHistogram, Dataset, NodeView, class_histogram, partition
from .errors import DataError, InvariantError
from .impurity import Criterion
from .rules import CategoricalFanout, NumericThreshold, SplitRule
from .splitter import best_split, max_gain_candidate


@dataclass
class Leaf:
    label: int
    histogram: ClassHistogram

    @property
    def is_leaf(self) -> bool:
        return True


@dataclass
class Internal:
    rule: SplitRule
    children: list
    majority: int
    histogram: ClassHistogram

    @property
    def is_leaf(self) -> bool:
        return False


TreeNode = Leaf | Internal

PRUNE_NONE = "none"
PRUNE_PESSIMISTIC = "pessimistic"


@dataclass(frozen=True)
class InductionConfig:
    criterion: Criterion = Criterion.BALANCED_GAIN_RATIO
    min_samples_split: int = 2
    max_depth: int | None = None
    pruning: str = PRUNE_PESSIMISTIC

    def __post_init__(self):
        if self.min_samples_split < 2:
            raise DataError("min_samples_split must be >= 2")
        if self.max_depth is not None and self.max_depth < 0:
            raise DataError("max_depth must be >= 0")
        if self.pruning not in (PRUNE_NONE, PRUNE_PESSIMISTIC):
            raise DataError(f"unknown pruning mode {self.pruning!r}")


@dataclass(frozen=True)
class TreeStats:
    depth: int
    leaf_count: int
    node_count: int


def _as_view(train: Dataset | NodeView) -> NodeView:
    return train.full_view() if isinstance(train, Dataset) else train


def induce(train: Dataset | NodeView, config: InductionConfig) -> TreeNode:
    """Grow (and by default prune) a tree on the given training rows."""
    view = _as_view(train)
    if len(view) == 0:
        raise DataError("cannot induce a tree on an empty training set")
    root_slot: list = [None]
    stack: list[tuple[NodeView, int, list, int]] = [(view, 0, root_slot, 0)]
    while stack:
        node_view, depth, container, slot = stack.pop()
        hist = class_histogram(node_view)
        majority = hist.majority()
        candidate = None
        splittable = (not hist.is_pure()
                      and len(node_view) >= config.min_samples_split
                      and (config.max_depth is None or depth < config.max_depth))
        if splittable:
            candidate = best_split(node_view, config.criterion)
            if candidate is None:
                fallback = max_gain_candidate(node_view, config.criterion)
                if fallback is not None and fallback.score.gain > 0.0:
                    candidate = fallback
        if candidate is None:
            container[slot] = Leaf(label=majority, histogram=hist)
            continue
        children: list = [None] * candidate.arity
        container[slot] = Internal(rule=candidate.rule, children=children,
                                   majority=majority, histogram=hist)
        for j, child_view in enumerate(partition(node_view, candidate.rule)):
            if len(child_view) == 0:
                # fan-out branch with no training rows: inherit the majority
                children[j] = Leaf(label=majority, histogram=ClassHistogram(
                    np.zeros(node_view.dataset.n_classes, dtype=np.int64)))
            else:
                stack.append((child_view, depth + 1, children, j))
    root = root_slot[0]
    if config.pruning == PRUNE_PESSIMISTIC:
        root = prune_pessimistic(root)
    return root


def predict(tree: TreeNode, sample) -> int:
    """Route one encoded sample (numeric floats / categorical codes) to a class.

    A categorical value with no branch at a node falls back to that node's
    majority class.
    """
    node = tree
    while not node.is_leaf:
        value = sample[node.rule.feature]
        if isinstance(node.rule, NumericThreshold):
            node = node.children[0] if value <= node.rule.threshold else node.children[1]
        else:
            try:
                branch = node.rule.values.index(value)
            except ValueError:
                return node.majority
            node = node.children[branch]
    return node.label


def predict_view(tree: TreeNode, view: NodeView) -> np.ndarray:
    """Predicted class codes for every row of a view."""
    columns = view.dataset.columns
    idx = view.indices
    out = np.empty(len(idx), dtype=np.int64)
    for i, row in enumerate(idx):
        node = tree
        while not node.is_leaf:
            value = columns[node.rule.feature][row]
            if isinstance(node.rule, NumericThreshold):
                node = node.children[0] if value <= node.rule.threshold else node.children[1]
            else:
                try:
                    node = node.children[node.rule.values.index(value)]
                except ValueError:
                    out[i] = node.majority
                    break
        else:
            out[i] = node.label
    return out


def _check_histograms(node: Internal) -> None:
    total = np.zeros_like(node.histogram.counts)
    for child in node.children:
        total = total + child.histogram.counts
    if not np.array_equal(total, node.histogram.counts):
        raise InvariantError("child histograms do not sum to the parent's")


def _subtree_leaf_errors(root: TreeNode) -> dict[int, float]:
    """Per-node sum over subtree leaves of (misclassified + 0.5)."""
    errors: dict[int, float] = {}
    stack: list[tuple[TreeNode, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.is_leaf:
            errors[id(node)] = (node.histogram.total
                                - int(node.histogram.counts[node.label])) + 0.5
        elif expanded:
            errors[id(node)] = sum(errors[id(c)] for c in node.children)
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
    return errors


def prune_pessimistic(tree: TreeNode) -> TreeNode:
    """Pessimistic error pruning over training histograms.

    With n rows at a node, subtree error E_sub (leaf misclassifications plus
    0.5 per leaf) and node-as-leaf error E_leaf (majority misclassifications
    plus 0.5), the node is collapsed when
    ``E_leaf <= E_sub + sqrt(E_sub * (n - E_sub) / n)``. Returns a new tree
    sharing untouched subtrees with the input.
    """
    errors = _subtree_leaf_errors(tree)

    def decide(node: TreeNode) -> TreeNode | None:
        """Leaf replacement for a pruned node, None to keep and descend."""
        if node.is_leaf:
            return node
        _check_histograms(node)
        hist = node.histogram
        n = hist.total
        e_sub = errors[id(node)]
        e_leaf = (n - int(hist.counts[node.majority])) + 0.5
        std_err = math.sqrt(max(e_sub * (n - e_sub), 0.0) / n)
        if e_leaf <= e_sub + std_err:
            return Leaf(label=node.majority, histogram=hist)
        return None

    root_slot: list = [None]
    stack: list[tuple[TreeNode, list, int]] = [(tree, root_slot, 0)]
    while stack:
        node, container, slot = stack.pop()
        replacement = decide(node)
        if replacement is not None:
            container[slot] = replacement
            continue
        children: list = [None] * len(node.children)
        container[slot] = Internal(rule=node.rule, children=children,
                                   majority=node.majority, histogram=node.histogram)
        for j, child in enumerate(node.children):
            stack.append((child, children, j))
    return root_slot[0]


def tree_stats(tree: TreeNode) -> TreeStats:
    """Depth (edges on the longest root-leaf path), leaf and node counts."""
    depth = 0
    leaves = 0
    nodes = 0
    stack: list[tuple[TreeNode, int]] = [(tree, 0)]
    while stack:
        node, d = stack.pop()
        nodes += 1
        if node.is_leaf:
            leaves += 1
            depth = max(depth, d)
        else:
            stack.extend((c, d + 1) for c in node.children)
    return TreeStats(depth=depth, leaf_count=leaves, node_count=nodes)


def training_accuracy(tree: TreeNode, train: Dataset | NodeView) -> float:
    view = _as_view(train)
    predictions = predict_view(tree, view)
    return 100.0 * float(np.mean(predictions == view.labels()))


def to_text(tree: TreeNode, dataset: Dataset) -> str:
    """Human-readable indented rendering, stable across runs."""
    schema = dataset.schema
    labels = dataset.class_labels

    def hist_str(hist: ClassHistogram) -> str:
        return " ".join(f"{labels[k]}={int(c)}" for k, c in enumerate(hist.counts))

    lines: list[str] = []
    stack: list[tuple[TreeNode, int, str]] = [(tree, 0, "")]
    while stack:
        node, indent, branch = stack.pop()
        pad = "  " * indent
        prefix = f"{pad}{branch}" if branch else pad
        if node.is_leaf:
            lines.append(f"{prefix}leaf: {labels[node.label]}  [{hist_str(node.histogram)}]")
            continue
        name = schema.columns[node.rule.feature][0]
        if isinstance(node.rule, NumericThreshold):
            lines.append(f"{prefix}split {name} <= {node.rule.threshold!r}  "
                         f"[{hist_str(node.histogram)}]")
            branches = [f"{name} <= {node.rule.threshold!r}: ",
                        f"{name} > {node.rule.threshold!r}: "]
        else:
            cats = dataset.categories[node.rule.feature]
            lines.append(f"{prefix}split {name}  [{hist_str(node.histogram)}]")
            branches = [f"{name} = {cats[v]}: " for v in node.rule.values]
        for child, label in reversed(list(zip(node.children, branches))):
            stack.append((child, indent + 1, label))
    return "\n".join(lines) + "\n"


def to_node_dict(tree: TreeNode, dataset: Dataset) -> dict:
    """JSON-ready structure: node type, rule (by name/value), class counts."""
    schema = dataset.schema
    labels = dataset.class_labels

    def shell(node: TreeNode) -> dict:
        if node.is_leaf:
            return {"type": "leaf", "label": labels[node.label],
                    "counts": [int(c) for c in node.histogram.counts]}
        out = {"type": "split", "feature": schema.columns[node.rule.feature][0],
               "majority": labels[node.majority],
               "counts": [int(c) for c in node.histogram.counts]}
        if isinstance(node.rule, NumericThreshold):
            out["threshold"] = node.rule.threshold
        else:
            cats = dataset.categories[node.rule.feature]
            out["values"] = [cats[v] for v in node.rule.values]
        out["children"] = []
        return out

    root = shell(tree)
    stack: list[tuple[TreeNode, dict]] = [(tree, root)]
    while stack:
        node, out = stack.pop()
        if node.is_leaf:
            continue
        for child in node.children:
            child_out = shell(child)
            out["children"].append(child_out)
            stack.append((child, child_out))
    return root


def from_node_dict(data: dict, schema, categories: dict[int, list[str]],
                   class_labels: list[str]) -> TreeNode:
    """Rebuild a tree from its dict form against known dictionaries."""
    name_to_index = {name: i for i, (name, _) in enumerate(schema.columns)}
    label_to_code = {v: i for i, v in enumerate(class_labels)}

    def shell(d: dict) -> TreeNode:
        hist = ClassHistogram(np.asarray(d["counts"], dtype=np.int64))
        if d["type"] == "leaf":
            return Leaf(label=label_to_code[d["label"]], histogram=hist)
        feature = name_to_index[d["feature"]]
        if "threshold" in d:
            rule: SplitRule = NumericThreshold(feature, float(d["threshold"]))
        else:
            lookup = {v: i for i, v in enumerate(categories[feature])}
            rule = CategoricalFanout(feature, tuple(lookup[v] for v in d["values"]))
        return Internal(rule=rule, children=[],
                        majority=label_to_code[d["majority"]], histogram=hist)

    root = shell(data)
    stack: list[tuple[dict, TreeNode]] = [(data, root)]
    while stack:
        d, node = stack.pop()
        if node.is_leaf:
            continue
        for child_d in d["children"]:
            child = shell(child_d)
            node.children.append(child)
            stack.append((child_d, child))
    return root
