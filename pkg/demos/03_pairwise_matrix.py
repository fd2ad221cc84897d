"""
All pairs with family-wise correction
=====================================

With k institutions there are k(k-1)/2 pairwise tests.  Testing each at 5%
makes some false positives likely, so the per-test level is divided by the
number of tests.
"""
import sys
from pathlib import Path

from ranktest import SignificanceConfig, pairwise_matrix, read_ranking
from ranktest.report import write_comparisons_csv

DATA = Path(__file__).parent / "data" / "sample_ranking.csv"
records = read_ranking(DATA)
matrix = pairwise_matrix(records, SignificanceConfig(correction="bonferroni"))

print(f"{len(records)} institutions -> {matrix.family_size} comparisons")
print("per-test level at 5%:", matrix.adjusted_levels()[0.05])

raw = sum(c.result.significant_at[0.05] for c in matrix.comparisons)
adj = sum(c.adjusted_significant_at[0.05] for c in matrix.comparisons)
print(f"significant pairs: {raw} uncorrected, {adj} after Bonferroni")

###############################################################################
# The same rows in the machine-readable CSV layout used by the CLI.
write_comparisons_csv(matrix.comparisons[:5], matrix.config.levels, sys.stdout)
