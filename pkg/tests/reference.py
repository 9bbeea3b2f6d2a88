"""Independent reference implementations used to cross-check the library.

Everything here is written from scratch in plain Python (math / fractions /
mpmath), sharing no code with the package under test: row-by-row tallies,
loop-based impurity formulas, and an exhaustive split enumerator. Keep it
that way; these are the other side of every dual-route check.
"""

from __future__ import annotations

import math

import mpmath as mp

mp.mp.dps = 50  # plenty for 1e-12 comparisons against float64 results

TIE = 1e-12


def ref_entropy(counts) -> float:
    n = sum(counts)
    return -sum((c / n) * math.log2(c / n) for c in counts if c > 0)


def ref_gini(counts) -> float:
    n = sum(counts)
    return 1.0 - sum((c / n) ** 2 for c in counts)


def ref_split_info(row_sizes) -> float:
    return ref_entropy(row_sizes)


def ref_gain(rows, measure=ref_entropy) -> float:
    """Weighted impurity decrease of a list-of-count-rows table."""
    k = len(rows[0])
    parent = [sum(r[c] for r in rows) for c in range(k)]
    n = sum(parent)
    return measure(parent) - sum((sum(r) / n) * measure(r) for r in rows if sum(r) > 0)


def ref_criterion_value(rows, criterion: str) -> float:
    g = ref_gain(rows)
    if criterion == "information-gain":
        return g
    if criterion == "gini-gain":
        return ref_gain(rows, ref_gini)
    si = ref_split_info([sum(r) for r in rows])
    if criterion == "gain-ratio":
        return g / si if si > 0 else 0.0
    if criterion == "balanced-gain-ratio":
        return g / (1.0 + si)
    raise ValueError(criterion)


# ---------------------------------------------------------------------------
# Arbitrary-precision versions (mpmath), for the closed-form fixtures.

def mp_entropy(counts) -> mp.mpf:
    n = mp.mpf(sum(counts))
    return -sum((mp.mpf(c) / n) * mp.log(mp.mpf(c) / n, 2) for c in counts if c > 0)


def mp_gini(counts) -> mp.mpf:
    n = mp.mpf(sum(counts))
    return 1 - sum((mp.mpf(c) / n) ** 2 for c in counts)


def mp_split_info(row_sizes) -> mp.mpf:
    return mp_entropy(row_sizes)


def mp_gain(rows, measure=mp_entropy) -> mp.mpf:
    k = len(rows[0])
    parent = [sum(r[c] for r in rows) for c in range(k)]
    n = mp.mpf(sum(parent))
    return measure(parent) - sum((mp.mpf(sum(r)) / n) * measure(r)
                                 for r in rows if sum(r) > 0)


# ---------------------------------------------------------------------------
# Exhaustive best-split search over raw rows.

def _midpoint(lo: float, hi: float) -> float:
    mid = (lo + hi) / 2.0
    return lo if mid >= hi else mid


def enumerate_candidates(columns, kinds, labels, n_classes):
    """Yield (feature, kind, threshold_or_values, table_rows) canonically.

    Features in index order; numeric thresholds ascending; one categorical
    fan-out over the observed values, ascending.
    """
    n = len(labels)
    for f, (col, kind) in enumerate(zip(columns, kinds)):
        if kind == "numeric":
            order = sorted(range(n), key=lambda i: (col[i], i))
            sv = [float(col[i]) for i in order]
            sy = [labels[i] for i in order]
            left = [0] * n_classes
            for b in range(n - 1):
                left[sy[b]] += 1
                if sv[b] == sv[b + 1]:
                    continue
                right = [0] * n_classes
                for i in range(b + 1, n):
                    right[sy[i]] += 1
                yield f, "numeric", _midpoint(sv[b], sv[b + 1]), [list(left), right]
        else:
            observed = sorted(set(int(v) for v in col))
            if len(observed) < 2:
                continue
            rows = []
            for v in observed:
                counts = [0] * n_classes
                for i in range(n):
                    if int(col[i]) == v:
                        counts[labels[i]] += 1
                rows.append(counts)
            yield f, "categorical", tuple(observed), rows


def brute_force_best_split(columns, kinds, labels, n_classes, criterion):
    """The documented selection rule, recomputed from raw rows.

    Max criterion value, ties within TIE broken by higher gain, then first
    in canonical order (lower feature, lower threshold). Returns None when
    no candidate has a positive value, else
    (feature, kind, threshold_or_values, value, gain).
    """
    candidates = []
    for f, kind, where, rows in enumerate_candidates(columns, kinds, labels, n_classes):
        value = ref_criterion_value(rows, criterion)
        gain = ref_gain(rows, ref_gini if criterion == "gini-gain" else ref_entropy)
        nonempty = sum(1 for r in rows if sum(r) > 0)
        if nonempty >= 2 and value > 0.0:
            candidates.append((f, kind, where, value, gain))
    if not candidates:
        return None
    vmax = max(c[3] for c in candidates)
    stage1 = [c for c in candidates if c[3] >= vmax - TIE]
    gmax = max(c[4] for c in stage1)
    stage2 = [c for c in stage1 if c[4] >= gmax - TIE]
    return stage2[0]
