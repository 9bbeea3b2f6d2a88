import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gainsplit import (
    ClassHistogram,
    ContingencyTable,
    Criterion,
    DataError,
    balanced_gain_ratio,
    entropy,
    gain_ratio,
    gini,
    purity_gain,
    score,
    split_information,
)
from gainsplit.impurity import binary_split_scores, gini_gain, information_gain

from reference import ref_entropy, ref_gain, ref_gini, ref_split_info

TOL = 1e-12


def hist(*counts):
    return ClassHistogram(np.array(counts, dtype=np.int64))


def table(rows):
    return ContingencyTable(np.array(rows, dtype=np.int64))


# Closed-form fixture values, frozen from a 60-digit mpmath evaluation
# (see reference.mp_entropy and friends; the acceptance suite recomputes them).
ENTROPY_2_6 = 0.81127812445913286391
GINI_2_6 = 0.375
GAIN_3113_ENTROPY = 0.18872187554086713609
GAIN_10_34 = 0.13792538097002997403
SI_10_34 = 0.54356444319959640599
GR_10_34 = 0.25374246365004395669
BGR_10_34 = 0.089355116709043688357


class TestEntropy:
    def test_pure(self):
        assert entropy(hist(8, 0)) == 0.0

    def test_uniform_binary_is_one_bit(self):
        assert entropy(hist(4, 4)) == 1.0

    def test_skewed(self):
        assert abs(entropy(hist(2, 6)) - ENTROPY_2_6) < TOL

    def test_empty_errors(self):
        with pytest.raises(DataError):
            entropy(hist(0, 0))


class TestGini:
    def test_pure(self):
        assert gini(hist(8, 0)) == 0.0

    def test_uniform_binary(self):
        assert gini(hist(4, 4)) == 0.5

    def test_skewed(self):
        assert abs(gini(hist(2, 6)) - GINI_2_6) < TOL

    def test_empty_errors(self):
        with pytest.raises(DataError):
            gini(hist(0))


class TestPurityGain:
    def test_perfect_split(self):
        assert purity_gain(table([[4, 0], [0, 4]]), "entropy") == 1.0

    def test_single_partition_is_zero(self):
        assert purity_gain(table([[3, 5]]), "entropy") == 0.0

    def test_mixed(self):
        assert abs(purity_gain(table([[3, 1], [1, 3]]), "entropy")
                   - GAIN_3113_ENTROPY) < TOL

    def test_empty_errors(self):
        with pytest.raises(DataError):
            purity_gain(table([[0, 0]]), "entropy")


class TestSplitInformation:
    def test_even_binary(self):
        assert split_information(table([[2, 2], [3, 1]])) == 1.0

    def test_single_partition(self):
        assert split_information(table([[4, 2]])) == 0.0

    def test_all_singletons_hits_log2_n(self):
        rows = [[1, 0]] * 4 + [[0, 1]] * 4
        assert abs(split_information(table(rows)) - 3.0) < TOL


class TestGainRatio:
    def test_perfect_split(self):
        s = gain_ratio(table([[4, 0], [0, 4]]))
        assert s.value == 1.0 and s.gain == 1.0 and s.valid

    def test_class_independent_split(self):
        s = gain_ratio(table([[2, 2], [2, 2]]))
        assert s.value == 0.0

    def test_skewed_fixture(self):
        s = gain_ratio(table([[1, 0], [3, 4]]))
        assert abs(s.gain - GAIN_10_34) < TOL
        assert abs(s.value - GR_10_34) < TOL

    def test_zero_split_information_marked_invalid(self):
        s = gain_ratio(table([[3, 4]]))
        assert s.value == 0.0 and not s.valid
        s = gain_ratio(table([[0, 0], [3, 4]]))
        assert s.value == 0.0 and not s.valid


class TestBalancedGainRatio:
    def test_perfect_split(self):
        s = balanced_gain_ratio(table([[4, 0], [0, 4]]))
        assert s.value == 0.5 and s.gain == 1.0

    def test_single_partition(self):
        s = balanced_gain_ratio(table([[3, 4]]))
        assert s.value == 0.0 and s.valid

    def test_skewed_fixture(self):
        s = balanced_gain_ratio(table([[1, 0], [3, 4]]))
        assert abs(s.value - BGR_10_34) < TOL


class TestScoreDispatch:
    def test_perfect_split_values(self):
        t = table([[4, 0], [0, 4]])
        assert score(t, Criterion.INFORMATION_GAIN).value == 1.0
        assert score(t, Criterion.BALANCED_GAIN_RATIO).value == 0.5

    def test_matches_standalone_on_random_tables(self):
        rng = np.random.RandomState(99)
        standalone = {
            Criterion.INFORMATION_GAIN: information_gain,
            Criterion.GAIN_RATIO: gain_ratio,
            Criterion.BALANCED_GAIN_RATIO: balanced_gain_ratio,
            Criterion.GINI_GAIN: gini_gain,
        }
        for _ in range(1000):
            j, k = rng.randint(1, 7), rng.randint(1, 7)
            cells = rng.randint(0, 30, size=(j, k))
            if cells.sum() == 0:
                cells[0, 0] = 1
            t = table(cells)
            for criterion, fn in standalone.items():
                assert score(t, criterion) == fn(t)


random_tables = st.builds(
    lambda rows, k: [row[:k] for row in rows],
    rows=st.lists(st.lists(st.integers(0, 2000), min_size=6, max_size=6),
                  min_size=1, max_size=8),
    k=st.integers(1, 6),
).filter(lambda rows: sum(map(sum, rows)) > 0)


@given(rows=random_tables)
def test_rewrite_identity_for_split_information(rows):
    # -sum p_j log2 p_j must equal log2(n) - sum p_j log2(n_j)
    t = table(rows)
    n = t.grand_total
    rewritten = math.log2(n) - sum(
        (nj / n) * math.log2(nj) for nj in t.row_totals if nj > 0)
    assert abs(split_information(t) - rewritten) < 1e-10


@given(rows=random_tables)
def test_gain_is_shift_invariant(rows):
    # adding a constant to the impurity cannot change the gain: the
    # -sum p^2 and 1 - sum p^2 gini forms must agree
    def gain_with(measure):
        parent = [sum(r[c] for r in rows) for c in range(len(rows[0]))]
        n = sum(parent)
        return measure(parent) - sum(
            (sum(r) / n) * measure(r) for r in rows if sum(r) > 0)

    def gini_paper_form(counts):
        n = sum(counts)
        return -sum((c / n) ** 2 for c in counts)

    assert abs(gain_with(gini_paper_form) - gain_with(ref_gini)) < TOL
    assert abs(gain_with(ref_gini) - purity_gain(table(rows), "gini")) < 1e-10


@given(rows=random_tables)
def test_entropy_gain_nonnegative_and_in_range(rows):
    t = table(rows)
    g = purity_gain(t, "entropy")
    assert g >= 0.0  # tiny negatives are clamped
    k = t.cells.shape[1]
    parent = entropy(ClassHistogram(t.col_totals))
    assert -TOL <= parent <= math.log2(k) + TOL if k > 1 else parent == 0.0
    assert g <= parent + 1e-10
    gg = gini(ClassHistogram(t.col_totals))
    assert -TOL <= gg <= 1 - 1 / k + TOL
    si = split_information(t)
    assert -TOL <= si <= math.log2(t.grand_total) + TOL if t.grand_total > 1 \
        else si == 0.0


def test_fragmentation_penalty_on_singleton_partitions():
    # 6 singleton rows, 2 classes: both ratios sit strictly below the raw gain
    rows = [[1, 0]] * 3 + [[0, 1]] * 3
    t = table(rows)
    g = purity_gain(t, "entropy")
    n = t.grand_total
    assert abs(split_information(t) - math.log2(n)) < TOL
    gr = gain_ratio(t)
    bgr = balanced_gain_ratio(t)
    assert abs(gr.value - g / math.log2(n)) < TOL
    assert abs(bgr.value - g / (1 + math.log2(n))) < TOL
    assert gr.value < g and bgr.value < g


def test_equal_gain_larger_si_scores_strictly_lower():
    # splitting a row into two proportional halves keeps the gain but
    # raises split information, so both normalized criteria must drop
    base = [[4, 2], [2, 6]]
    split_up = [[2, 1], [2, 1], [2, 6]]
    for fn in (gain_ratio, balanced_gain_ratio):
        a, b = fn(table(base)), fn(table(split_up))
        assert abs(a.gain - b.gain) < 1e-10
        assert split_information(table(split_up)) > split_information(table(base))
        assert b.value < a.value


@given(rows_a=random_tables, rows_b=random_tables)
def test_balanced_preference_implies_ratio_preference(rows_a, rows_b):
    # if the lower-SI split wins under the damped ratio it must also win
    # under the plain ratio (the damping only softens the SI penalty)
    ta, tb = table(rows_a), table(rows_b)
    sa, sb = split_information(ta), split_information(tb)
    if sa == sb or min(sa, sb) <= 0:
        return
    if sa > sb:  # make A the low-SI split
        ta, tb, sa, sb = tb, ta, sb, sa
    ga, gb = purity_gain(ta, "entropy"), purity_gain(tb, "entropy")
    if ga <= 0 or gb <= 0:
        return
    if ga / (1 + sa) > gb / (1 + sb):
        assert ga / sa > gb / sb


def test_gain_matches_independent_reference():
    rng = np.random.RandomState(5)
    for _ in range(200):
        rows = rng.randint(0, 50, size=(rng.randint(1, 5), rng.randint(1, 5)))
        if rows.sum() == 0:
            continue
        t = table(rows)
        assert abs(purity_gain(t, "entropy") - ref_gain(rows.tolist())) < 1e-10
        assert abs(split_information(t) - ref_split_info(t.row_totals.tolist())) < 1e-10
        assert abs(gini(ClassHistogram(t.col_totals))
                   - ref_gini(t.col_totals.tolist())) < 1e-10


def test_binary_split_scores_match_scalar_path():
    rng = np.random.RandomState(17)
    for _ in range(50):
        k = rng.randint(2, 6)
        parent = rng.randint(1, 40, size=k)
        b = rng.randint(1, 20)
        left = np.array([[rng.randint(0, parent[c] + 1) for c in range(k)]
                         for _ in range(b)])
        for criterion in Criterion:
            values, gains = binary_split_scores(left, parent, criterion)
            for i in range(b):
                cells = np.stack([left[i], parent - left[i]])
                s = score(ContingencyTable(cells), criterion)
                assert values[i] == s.value
                assert gains[i] == s.gain


def test_contingency_table_totals():
    t = table([[1, 2], [3, 4]])
    assert t.row_totals.tolist() == [3, 7]
    assert t.col_totals.tolist() == [4, 6]
    assert t.grand_total == 10
    assert t.nonempty_children() == 2
    with pytest.raises(DataError):
        table([[1, -1]])


def test_criterion_parsing():
    assert Criterion.from_name("balanced_gain_ratio") is Criterion.BALANCED_GAIN_RATIO
    assert Criterion.from_name("Gini-Gain") is Criterion.GINI_GAIN
    with pytest.raises(DataError) as err:
        Criterion.from_name("nonsense")
    for name in ("information-gain", "gain-ratio", "balanced-gain-ratio", "gini-gain"):
        assert name in str(err.value)
