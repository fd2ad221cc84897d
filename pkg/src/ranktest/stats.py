"""Two-proportion z-test for ranking indicators such as PP_top10%.

The statistic compares two institutions' shares of highly cited papers,

    z = (p1 - p2) / sqrt(p (1 - p) (1/n1 + 1/n2)),    p = (t1 + t2) / (n1 + n2)

where n is the publication count, p_i the indicator value and t_i = p_i n_i
the implied number of top papers.  Testing one institution against the
expected share (10% for a top-decile indicator) is the same test with the
expectation standing in as a second set of equal size.

Everything here is pure and deterministic.
"""
from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

DEFAULT_LEVELS: Tuple[float, ...] = (0.05, 0.01)
DEFAULT_EXPECTED = 0.10

# rule-of-thumb floor on n*p and n*(1-p) for the normal approximation
MIN_EXPECTED_CELL = 5.0

_SQRT2 = math.sqrt(2.0)


class DegeneratePooledProportion(ValueError):
    """The pooled proportion is 0 or 1, so the test statistic is undefined."""

    def __init__(self, message, pooled=None):
        super().__init__(message)
        self.pooled = pooled


class Correction(str, enum.Enum):
    NONE = "none"
    BONFERRONI = "bonferroni"


def _check_proportion(value, name="proportion"):
    value = float(value)
    if not 0.0 <= value <= 1.0:  # also rejects nan
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def _check_sample_size(value, name="sample size"):
    try:
        value = operator.index(value)
    except TypeError:
        raise TypeError(f"{name} must be an integer, got {value!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def _check_levels(levels):
    levels = tuple(float(a) for a in levels)
    if not levels:
        raise ValueError("at least one significance level is required")
    for a in levels:
        if not 0.0 < a < 1.0:
            raise ValueError(f"significance level must lie in (0, 1), got {a!r}")
    if any(b >= a for a, b in zip(levels, levels[1:])):
        raise ValueError(f"significance levels must be strictly decreasing, got {levels}")
    return levels


@dataclass(frozen=True)
class SignificanceConfig:
    """Significance levels, expectation and multiple-testing correction.

    ``comparisons`` is the Bonferroni family size m; it is ignored when
    ``correction`` is ``"none"``.
    """

    levels: Tuple[float, ...] = DEFAULT_LEVELS
    expected_proportion: float = DEFAULT_EXPECTED
    correction: Correction = Correction.NONE
    comparisons: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", _check_levels(self.levels))
        object.__setattr__(
            self, "expected_proportion",
            _check_proportion(self.expected_proportion, "expected proportion"))
        object.__setattr__(self, "correction", Correction(self.correction))
        object.__setattr__(
            self, "comparisons", _check_sample_size(self.comparisons, "comparisons"))

    @classmethod
    def from_levels(cls, levels, **kwargs):
        """Build a config from levels given in any order (duplicates dropped)."""
        return cls(levels=tuple(sorted(set(float(a) for a in levels), reverse=True)), **kwargs)

    def adjusted_levels(self, comparisons=None):
        """Per-level thresholds after correction, keyed by the nominal level."""
        if self.correction is Correction.NONE:
            return {a: a for a in self.levels}
        m = self.comparisons if comparisons is None else comparisons
        return {a: bonferroni_adjust(a, m) for a in self.levels}


@dataclass(frozen=True, slots=True)
class TestResult:
    """Outcome of one two-proportion z-test.

    ``significant_at`` maps each configured level to ``p_value < level``.
    ``t1``/``t2`` are the reconstructed (real-valued) top-paper counts.
    """

    z: float
    p_value: float
    pooled_p: float
    p1: float
    n1: int
    p2: float
    n2: int
    t1: float
    t2: float
    significant_at: Dict[float, bool] = field(default_factory=dict)
    approximation_warning: bool = False

    __test__ = False  # keep pytest from collecting it

    @property
    def direction(self):
        """+1 if the first proportion is higher, -1 if lower, 0 if equal."""
        return (self.z > 0) - (self.z < 0)


def top_count(p, n):
    """Number of top papers implied by proportion `p` of `n` publications.

    Kept real-valued: published indicator values are already rounded, so
    rounding the count again would only add error.
    """
    return _check_proportion(p) * _check_sample_size(n)


def pooled_proportion(t1, t2, n1, n2):
    """Combined share ``(t1 + t2) / (n1 + n2)`` of two sets.

    The result is clamped into the closed interval spanned by ``t1/n1`` and
    ``t2/n2`` so that floating-point rounding cannot push it outside.
    """
    n1 = _check_sample_size(n1, "n1")
    n2 = _check_sample_size(n2, "n2")
    t1, t2 = float(t1), float(t2)
    if not (0.0 <= t1 <= n1 and 0.0 <= t2 <= n2):
        raise ValueError(f"top counts must lie in [0, n]: t1={t1}, n1={n1}, t2={t2}, n2={n2}")
    pooled = (t1 + t2) / (n1 + n2)
    r1, r2 = t1 / n1, t2 / n2
    return min(max(pooled, min(r1, r2)), max(r1, r2))


def standard_normal_cdf(x):
    """Standard normal distribution function.

    Computed as ``erfc(-x / sqrt(2)) / 2`` using the C library's
    complementary error function (relative error of a few ulp), which keeps
    full accuracy in the lower tail.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    return 0.5 * math.erfc(-x / _SQRT2)


def two_sided_p_value(z):
    """Two-sided p-value ``2 (1 - Phi(|z|))``, clamped to [0, 1]."""
    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"z must be finite, got {z!r}")
    # erfc(|z|/sqrt2) == 2*(1 - Phi(|z|)) without the cancellation
    return min(1.0, max(0.0, math.erfc(abs(z) / _SQRT2)))


def significance_decision(p_value, alpha):
    """True when ``p_value < alpha`` (strict)."""
    return p_value < alpha


def bonferroni_adjust(alpha, m):
    """Per-test level ``alpha / m`` for a family of `m` tests."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha / _check_sample_size(m, "m")


def bonferroni_p_value(p_value, m):
    """Bonferroni-adjusted p-value ``min(1, m * p)``."""
    return min(1.0, _check_sample_size(m, "m") * float(p_value))


def approximation_dubious(pooled, n1, n2):
    """True when any of n*p, n*(1-p) for either set falls below 5."""
    q = 1.0 - pooled
    return min(n1 * pooled, n1 * q, n2 * pooled, n2 * q) < MIN_EXPECTED_CELL


def z_two_proportions(p1, n1, p2, n2, levels: Sequence[float] = DEFAULT_LEVELS) -> TestResult:
    """Test whether two proportions differ.

    Parameters
    ----------
    p1, p2 : float in [0, 1]
        Indicator values (e.g. PP_top10% as a fraction).
    n1, n2 : int >= 1
        Publication counts.
    levels : sequence of float
        Significance levels, strictly decreasing.

    Returns
    -------
    TestResult

    Raises
    ------
    DegeneratePooledProportion
        If the pooled proportion is exactly 0 or 1.
    """
    levels = _check_levels(levels)
    p1 = _check_proportion(p1, "p1")
    p2 = _check_proportion(p2, "p2")
    n1 = _check_sample_size(n1, "n1")
    n2 = _check_sample_size(n2, "n2")
    return _z_checked(p1, n1, p2, n2, levels)


def _z_checked(p1, n1, p2, n2, levels):
    # arguments already validated; shared by the batch paths
    t1 = p1 * n1
    t2 = p2 * n2
    pooled = (t1 + t2) / (n1 + n2)
    # keep the pooled share between the two inputs despite rounding
    if p1 <= p2:
        pooled = min(max(pooled, p1), p2)
    else:
        pooled = min(max(pooled, p2), p1)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    if pooled <= 0.0 or pooled >= 1.0 or se == 0.0:
        # se == 0 only when pooled underflows (subnormal inputs)
        raise DegeneratePooledProportion(
            f"pooled proportion is {pooled:g}; the z-test is undefined when "
            "no paper or every paper is in the top class", pooled)
    z = (p1 - p2) / se
    p_value = min(1.0, math.erfc(abs(z) / _SQRT2))
    return TestResult(
        z, p_value, pooled, p1, n1, p2, n2, t1, t2,
        {a: p_value < a for a in levels},
        approximation_dubious(pooled, n1, n2),
    )


def z_vs_expected(p1, n, expected=DEFAULT_EXPECTED, levels=DEFAULT_LEVELS):
    """Test an observed proportion against its expectation.

    The expectation is treated as a second set of the same size `n`.
    """
    return z_two_proportions(p1, n, expected, n, levels)
