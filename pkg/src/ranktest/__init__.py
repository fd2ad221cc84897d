"""Statistical tests for differences between proportion-based ranking indicators.

Leiden Ranking PP_top10% and SCImago's Excellence Indicator are shares of an
institution's papers in the top 10% most cited.  Two such shares, or one
share and its 10% expectation, can be compared with a z-test for
independent proportions.
"""
from .analysis import (
    ComparisonMatrix,
    PairComparison,
    TooFewInstitutions,
    compare_pair,
    compare_to_expected,
    pairwise_matrix,
)
from .ingest import (
    DuplicateInstitution,
    IngestConfig,
    IngestError,
    InstitutionRecord,
    MalformedRow,
    MissingColumn,
    OutOfRange,
    parse_ranking,
    read_ranking,
    validate_dataset,
    write_ranking,
)
from .simulate import CalibrationReport, CalibrationSpec, simulate_family, simulate_two_sample
from .stats import (
    Correction,
    DegeneratePooledProportion,
    SignificanceConfig,
    TestResult,
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

__version__ = "0.1.0"
