"""Pairwise and observed-vs-expected comparisons over ranking datasets."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .stats import (
    Correction,
    DegeneratePooledProportion,
    SignificanceConfig,
    TestResult,
    _z_checked,
    z_two_proportions,
    z_vs_expected,
)


class TooFewInstitutions(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PairComparison:
    """One test between `left` and `right`.

    For a degenerate pair `result` is None and `error` explains why; the
    decision maps are then empty.
    """

    left: str
    right: str
    result: Optional[TestResult]
    adjusted_significant_at: Dict[float, bool]
    error: Optional[str] = None

    @property
    def ok(self):
        return self.result is not None


@dataclass(frozen=True)
class ComparisonMatrix:
    institutions: Tuple[str, ...]
    comparisons: Tuple[PairComparison, ...]
    family_size: int
    config: SignificanceConfig

    def adjusted_levels(self):
        return self.config.adjusted_levels(self.family_size)

    def errors(self):
        return [c for c in self.comparisons if not c.ok]

    def lookup(self, a, b):
        """Return the comparison for names `a`, `b` in either order."""
        left, right = sorted((a, b))
        for c in self.comparisons:
            if c.left == left and c.right == right:
                return c
        raise KeyError((a, b))


def expected_label(proportion):
    """Label used for the expectation side, e.g. ``EXPECTED(10%)``."""
    return f"EXPECTED({proportion * 100:g}%)"


def _adjusted(result, thresholds):
    p = result.p_value
    return {a: p < thr for a, thr in thresholds.items()}


def compare_pair(a, b, config=None):
    """Test institution `a` against institution `b`.

    Adjusted decisions use ``config.comparisons`` as the family size.

    Raises
    ------
    DegeneratePooledProportion
        With both institution names in the message.
    """
    config = config or SignificanceConfig()
    try:
        result = z_two_proportions(a.pp_top10, a.publications, b.pp_top10, b.publications,
                                   config.levels)
    except DegeneratePooledProportion as exc:
        raise DegeneratePooledProportion(f"{a.name} vs {b.name}: {exc}", exc.pooled) from None
    return PairComparison(a.name, b.name, result, _adjusted(result, config.adjusted_levels()))


def compare_to_expected(a, config=None):
    """Test institution `a` against ``config.expected_proportion``."""
    config = config or SignificanceConfig()
    label = expected_label(config.expected_proportion)
    try:
        result = z_vs_expected(a.pp_top10, a.publications, config.expected_proportion,
                               config.levels)
    except DegeneratePooledProportion as exc:
        raise DegeneratePooledProportion(f"{a.name} vs {label}: {exc}", exc.pooled) from None
    return PairComparison(a.name, label, result, _adjusted(result, config.adjusted_levels()))


def pairwise_matrix(records, config=None, comparisons=None) -> ComparisonMatrix:
    """All k(k-1)/2 unordered comparisons between `records`.

    Pairs are ordered lexicographically by name, the alphabetically first
    name on the left.  The family size defaults to the number of pairs and
    can be overridden with `comparisons`; ``config.comparisons`` is not used
    here.  Degenerate pairs are kept with an error message instead of a
    result.
    """
    config = config or SignificanceConfig()
    records = list(records)
    k = len(records)
    if k < 2:
        raise TooFewInstitutions(f"need at least two institutions, got {k}")
    n_pairs = k * (k - 1) // 2
    m = n_pairs if comparisons is None else comparisons
    thresholds = config.adjusted_levels(m)
    levels = config.levels
    ordered = sorted(records, key=lambda r: r.name)
    out: List[PairComparison] = []
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            try:
                result = _z_checked(a.pp_top10, a.publications,
                                    b.pp_top10, b.publications, levels)
            except DegeneratePooledProportion as exc:
                out.append(PairComparison(a.name, b.name, None, {}, str(exc)))
                continue
            out.append(PairComparison(a.name, b.name, result, _adjusted(result, thresholds)))
    if config.correction is Correction.BONFERRONI:
        config = SignificanceConfig(config.levels, config.expected_proportion,
                                    config.correction, m)
    return ComparisonMatrix(tuple(r.name for r in records), tuple(out), m, config)
