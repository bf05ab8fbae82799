import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from tirair.errors import DegenerateInputError, DomainError
from tirair.series import TimeSeries
from tirair.stats import mann_whitney_u, summarize, wilcoxon_signed_rank

samples = st.lists(st.integers(-20, 20), min_size=1, max_size=30)


def test_mwu_separated():
    r = mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert r.statistic == 0
    assert r.method == "mann_whitney_u"
    assert (r.n1, r.n2) == (3, 3)


def test_mwu_identical_samples():
    r = mann_whitney_u([1, 2, 3, 4], [1, 2, 3, 4])
    assert r.p_value > 0.9
    assert r.tie_correction_applied


def test_mwu_all_equal():
    r = mann_whitney_u([2, 2], [2, 2, 2])
    assert r.p_value == 1.0


def test_mwu_empty():
    with pytest.raises(DomainError):
        mann_whitney_u([], [1.0])


@settings(max_examples=60)
@given(samples, samples)
def test_mwu_matches_scipy(a, b):
    r = mann_whitney_u(a, b)
    if len(set(a + b)) == 1:
        return
    ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
    assert r.p_value == pytest.approx(ref.pvalue, rel=1e-9, abs=1e-12)
    assert r.statistic == min(ref.statistic, len(a) * len(b) - ref.statistic)
    assert 0 <= r.statistic <= len(a) * len(b)
    assert 0 <= r.p_value <= 1


@given(samples, samples)
def test_mwu_swap_symmetry(a, b):
    assert mann_whitney_u(a, b).p_value == pytest.approx(mann_whitney_u(b, a).p_value, rel=1e-12)


@given(samples, samples)
def test_mwu_monotone_invariance(a, b):
    f = lambda v: np.exp(np.asarray(v, float) / 10.0) * 3 - 1
    r1, r2 = mann_whitney_u(a, b), mann_whitney_u(f(a), f(b))
    assert r1.statistic == r2.statistic
    assert r1.p_value == pytest.approx(r2.p_value, rel=1e-12)


@given(samples)
def test_mwu_identical_never_small(a):
    assert mann_whitney_u(a, a).p_value >= 0.5


def test_wilcoxon_all_negative():
    r = wilcoxon_signed_rank([1, 2, 3, 4, 5, 6], [2, 3, 4, 5, 6, 7])
    assert r.statistic == 0
    assert r.method == "wilcoxon_signed_rank"
    assert r.tie_correction_applied  # six tied |d| = 1


def test_wilcoxon_degenerate():
    with pytest.raises(DegenerateInputError):
        wilcoxon_signed_rank([1, 2, 3], [1, 2, 3])


def test_wilcoxon_length_mismatch():
    with pytest.raises(DomainError):
        wilcoxon_signed_rank([1, 2], [1, 2, 3])


paired = st.lists(st.tuples(st.integers(-10, 10), st.integers(-10, 10)), min_size=1, max_size=30)


@settings(max_examples=60)
@given(paired)
def test_wilcoxon_matches_scipy(pairs):
    a = [p[0] for p in pairs]
    b = [p[1] for p in pairs]
    if all(x == y for x, y in pairs):
        return
    r = wilcoxon_signed_rank(a, b)
    ref = scipy.stats.wilcoxon(a, b, zero_method="wilcox", correction=False, method="approx")
    assert r.statistic == ref.statistic
    assert r.p_value == pytest.approx(ref.pvalue, rel=1e-9, abs=1e-12)


@given(paired)
def test_wilcoxon_sign_symmetry(pairs):
    a = [p[0] for p in pairs]
    b = [p[1] for p in pairs]
    if a == b:
        return
    assert wilcoxon_signed_rank(a, b).p_value == pytest.approx(wilcoxon_signed_rank(b, a).p_value, rel=1e-12)


def test_summarize_examples():
    assert summarize([1, 2, 3]) == pytest.approx((2.0, 0.57735), abs=1e-5)
    assert summarize([5, 5, 5]) == (5.0, 0.0)
    assert summarize([0, 0, 0, 4]) == pytest.approx((1.0, 1.0))
    with pytest.raises(DomainError):
        summarize([1.0])


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=50))
def test_summarize_mean_matches_series_mean(values):
    mean, se = summarize(values)
    assert mean == pytest.approx(TimeSeries(values).mean, abs=1e-12 * max(1.0, max(map(abs, values))))
    assert se >= 0
