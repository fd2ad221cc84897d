import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from ranktest.stats import (
    Correction,
    DegeneratePooledProportion,
    SignificanceConfig,
    bonferroni_adjust,
    bonferroni_p_value,
    pooled_proportion,
    significance_decision,
    standard_normal_cdf,
    top_count,
    two_sided_p_value,
    z_two_proportions,
    z_vs_expected,
)

proportions = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_subnormal=False)
sizes = st.integers(min_value=1, max_value=10**6)


# -- top_count ---------------------------------------------------------------

@pytest.mark.parametrize("p, n, expected", [
    (0.0, 1000, 0.0),
    (1.0, 737, 737.0),
    (0.123, 2000, 246.0),
])
def test_top_count(p, n, expected):
    assert top_count(p, n) == expected


def test_top_count_is_not_rounded():
    assert top_count(0.1234, 1000) == pytest.approx(123.4)


@pytest.mark.parametrize("p, n", [(-0.1, 10), (1.5, 10), (0.1, 0), (0.1, 2.5)])
def test_top_count_rejects_bad_input(p, n):
    with pytest.raises((ValueError, TypeError)):
        top_count(p, n)


# -- pooled_proportion -------------------------------------------------------

@pytest.mark.parametrize("t1, t2, n1, n2, expected", [
    (0, 0, 10, 10, 0.0),
    (100, 200, 1000, 1000, 0.15),
    (50, 50, 500, 500, 0.1),
])
def test_pooled_proportion(t1, t2, n1, n2, expected):
    assert pooled_proportion(t1, t2, n1, n2) == pytest.approx(expected, abs=1e-15)


def test_pooled_proportion_rejects_count_above_size():
    with pytest.raises(ValueError):
        pooled_proportion(11, 0, 10, 10)


@given(proportions, sizes, proportions, sizes)
def test_pooled_between_inputs(p1, n1, p2, n2):
    pooled = pooled_proportion(p1 * n1, p2 * n2, n1, n2)
    lo, hi = sorted((p1 * n1 / n1, p2 * n2 / n2))
    assert lo <= pooled <= hi


# -- normal distribution -----------------------------------------------------

def test_cdf_at_zero():
    assert standard_normal_cdf(0.0) == 0.5


@pytest.mark.parametrize("x, expected", [
    (1.96, oracles.PHI_1_96),
    (-1.96, 1 - oracles.PHI_1_96),
    (2.576, oracles.PHI_2_576),
])
def test_cdf_reference_values(x, expected):
    assert standard_normal_cdf(x) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("x", [-37.5, -20.0, -8.0, -3.3, -0.7, 0.01, 0.5, 1.0, 4.2, 9.0])
def test_cdf_against_mpmath(x):
    assert abs(standard_normal_cdf(x) - float(oracles.phi(x))) <= 1e-15


@given(st.floats(min_value=-40, max_value=40))
def test_cdf_symmetry(x):
    assert abs(standard_normal_cdf(x) + standard_normal_cdf(-x) - 1.0) <= 1e-12


@given(st.floats(min_value=-40, max_value=40), st.floats(min_value=-40, max_value=40))
def test_cdf_monotone(a, b):
    a, b = sorted((a, b))
    assert standard_normal_cdf(a) <= standard_normal_cdf(b)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_cdf_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        standard_normal_cdf(bad)


# -- p-values and decisions --------------------------------------------------

@pytest.mark.parametrize("z, expected", [
    (0.0, 1.0),
    (1.96, oracles.P_1_96),
    (-1.96, oracles.P_1_96),
    (2.576, oracles.P_2_576),
    (2.0, oracles.P_2_0),
])
def test_two_sided_p_value(z, expected):
    assert two_sided_p_value(z) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_p_value_rounded_thresholds():
    assert two_sided_p_value(1.96) == pytest.approx(0.05, abs=1e-4)
    assert two_sided_p_value(2.576) == pytest.approx(0.01, abs=1e-4)


@given(st.floats(min_value=-1e6, max_value=1e6))
def test_p_value_bounds(z):
    assert 0.0 <= two_sided_p_value(z) <= 1.0


@given(st.floats(min_value=0, max_value=37), st.floats(min_value=0, max_value=37))
def test_p_value_decreasing_in_abs_z(a, b):
    assume(a != b)
    a, b = sorted((a, b))
    assert two_sided_p_value(b) <= two_sided_p_value(a)
    if b - a > 1e-6 * max(1.0, b):
        assert two_sided_p_value(b) < two_sided_p_value(a)


@pytest.mark.parametrize("p, alpha, expected", [
    (0.049, 0.05, True),
    (0.05, 0.05, False),
    (oracles.P_2_0, 0.05, True),
])
def test_significance_decision(p, alpha, expected):
    assert significance_decision(p, alpha) is expected


@pytest.mark.parametrize("alpha, crit", [(0.05, oracles.CRIT_05), (0.01, oracles.CRIT_01)])
def test_decision_matches_exact_critical_value(alpha, crit):
    for offset in (-1e-3, -1e-5, -1e-7, 1e-7, 1e-5, 1e-3):
        z = crit + offset
        for sign in (1, -1):
            assert significance_decision(two_sided_p_value(sign * z), alpha) is (z > crit)


# -- Bonferroni --------------------------------------------------------------

@pytest.mark.parametrize("alpha, m, expected", [
    (0.05, 1, 0.05),
    (0.05, 10, 0.005),
    (0.05, 124750, 4.00801603206413e-7),
])
def test_bonferroni_adjust(alpha, m, expected):
    assert bonferroni_adjust(alpha, m) == pytest.approx(expected, rel=1e-14)


def test_bonferroni_p_value_caps_at_one():
    assert bonferroni_p_value(0.03, 10) == pytest.approx(0.3)
    assert bonferroni_p_value(0.2, 10) == 1.0


@pytest.mark.parametrize("alpha, m", [(0.0, 1), (1.0, 1), (0.05, 0)])
def test_bonferroni_rejects_bad_input(alpha, m):
    with pytest.raises(ValueError):
        bonferroni_adjust(alpha, m)


# -- the z statistic ---------------------------------------------------------

def test_identical_proportions():
    r = z_two_proportions(0.1, 1000, 0.1, 1000)
    assert r.z == 0.0
    assert r.p_value == 1.0
    assert r.significant_at == {0.05: False, 0.01: False}


def test_worked_example_two_sample():
    r = z_two_proportions(0.2, 1000, 0.1, 1000)
    assert r.z == pytest.approx(oracles.Z_20_VS_10_N1000, rel=1e-12)
    assert r.pooled_p == pytest.approx(0.15)
    assert (r.t1, r.t2) == (200.0, 100.0)
    assert r.significant_at == {0.05: True, 0.01: True}
    assert not r.approximation_warning
    assert r.direction == 1


def test_degenerate_pooled_proportion():
    with pytest.raises(DegeneratePooledProportion):
        z_two_proportions(0.0, 100, 0.0, 100)
    with pytest.raises(DegeneratePooledProportion):
        z_two_proportions(1.0, 100, 1.0, 50)


def test_degenerate_is_a_value_error():
    assert issubclass(DegeneratePooledProportion, ValueError)


@pytest.mark.parametrize("p1, n, expected, z", [
    (0.10, 5000, 0.10, 0.0),
    (0.12, 10000, 0.10, oracles.Z_12_VS_10_N10000),
    (0.08, 10000, 0.10, oracles.Z_08_VS_10_N10000),
    (0.2, 1000, 0.1, oracles.Z_20_VS_10_N1000),
])
def test_vs_expected(p1, n, expected, z):
    assert z_vs_expected(p1, n, expected).z == pytest.approx(z, rel=1e-12, abs=0)


def test_vs_expected_default_is_ten_percent():
    assert z_vs_expected(0.12, 10000) == z_two_proportions(0.12, 10000, 0.10, 10000)


def test_approximation_warning_small_sets():
    assert z_two_proportions(0.2, 20, 0.1, 20).approximation_warning
    assert not z_two_proportions(0.2, 200, 0.1, 200).approximation_warning


def test_custom_levels():
    r = z_two_proportions(0.12, 10000, 0.1, 10000, levels=(0.01, 0.001, 1e-6))
    assert r.significant_at == {0.01: True, 0.001: True, 1e-6: False}


def test_levels_must_decrease():
    with pytest.raises(ValueError):
        z_two_proportions(0.2, 100, 0.1, 100, levels=(0.01, 0.05))


@settings(max_examples=500)
@given(proportions, sizes, proportions, sizes)
def test_antisymmetry(p1, n1, p2, n2):
    try:
        a = z_two_proportions(p1, n1, p2, n2)
    except DegeneratePooledProportion:
        return
    b = z_two_proportions(p2, n2, p1, n1)
    assert a.z == -b.z
    assert a.p_value == b.p_value


@settings(max_examples=500)
@given(proportions, sizes, proportions, sizes)
def test_zero_law(p1, n1, p2, n2):
    try:
        r = z_two_proportions(p1, n1, p2, n2)
    except DegeneratePooledProportion:
        return
    assert (r.z == 0.0) == (p1 == p2)


@settings(max_examples=500)
@given(proportions, st.integers(1, 10**5), proportions, st.integers(1, 10**5),
       st.integers(2, 1000))
def test_scaling_law(p1, n1, p2, n2, c):
    try:
        base = z_two_proportions(p1, n1, p2, n2)
    except DegeneratePooledProportion:
        return
    scaled = z_two_proportions(p1, n1 * c, p2, n2 * c)
    assert scaled.z == pytest.approx(base.z * math.sqrt(c), rel=1e-12, abs=0)


@settings(max_examples=500)
@given(proportions, proportions, sizes, proportions, sizes)
def test_monotone_in_p1(a, b, n1, p2, n2):
    assume(a != b)
    lo, hi = sorted((a, b))
    try:
        z_lo = z_two_proportions(lo, n1, p2, n2).z
        z_hi = z_two_proportions(hi, n1, p2, n2).z
    except DegeneratePooledProportion:
        return
    assert z_lo <= z_hi
    if hi - lo > 1e-9:
        assert z_lo < z_hi


@settings(max_examples=500)
@given(proportions, sizes, proportions, sizes)
def test_result_invariants(p1, n1, p2, n2):
    try:
        r = z_two_proportions(p1, n1, p2, n2)
    except DegeneratePooledProportion:
        return
    assert min(p1, p2) <= r.pooled_p <= max(p1, p2)
    assert 0.0 <= r.p_value <= 1.0
    assert math.isfinite(r.z)
    for alpha, flag in r.significant_at.items():
        assert flag == (r.p_value < alpha)
    assert r.direction == (p1 > p2) - (p1 < p2)


@settings(max_examples=300)
@given(proportions, sizes, proportions)
def test_vs_expected_consistency(p, n, e):
    try:
        a = z_vs_expected(p, n, e)
    except DegeneratePooledProportion:
        with pytest.raises(DegeneratePooledProportion):
            z_two_proportions(p, n, e, n)
        return
    assert a == z_two_proportions(p, n, e, n)


# -- SignificanceConfig ------------------------------------------------------

def test_config_defaults():
    cfg = SignificanceConfig()
    assert cfg.levels == (0.05, 0.01)
    assert cfg.expected_proportion == 0.10
    assert cfg.correction is Correction.NONE
    assert cfg.adjusted_levels() == {0.05: 0.05, 0.01: 0.01}


def test_config_bonferroni_levels():
    cfg = SignificanceConfig(correction="bonferroni", comparisons=10)
    assert cfg.adjusted_levels() == pytest.approx({0.05: 0.005, 0.01: 0.001})
    assert cfg.adjusted_levels(5) == pytest.approx({0.05: 0.01, 0.01: 0.002})


def test_config_from_levels_sorts():
    assert SignificanceConfig.from_levels([0.01, 0.05, 0.01]).levels == (0.05, 0.01)


@pytest.mark.parametrize("kwargs", [
    {"levels": (0.01, 0.05)},
    {"levels": (0.05, 0.05)},
    {"levels": (1.0,)},
    {"levels": ()},
    {"comparisons": 0},
    {"expected_proportion": 1.2},
    {"correction": "holm"},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SignificanceConfig(**kwargs)
