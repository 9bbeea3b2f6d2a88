"""Decision rules attached to internal tree nodes.

A rule is either a binary threshold on a numeric column or a full fan-out
over the categorical values observed at the node. ``feature`` is the column
index in the dataset schema.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericThreshold:
    """Binary rule: rows with value <= threshold go to the first branch."""

    feature: int
    threshold: float

    @property
    def arity(self) -> int:
        return 2


@dataclass(frozen=True)
class CategoricalFanout:
    """One branch per category code, in dictionary (code) order."""

    feature: int
    values: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.values)


SplitRule = NumericThreshold | CategoricalFanout
