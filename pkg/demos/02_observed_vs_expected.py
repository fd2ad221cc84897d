"""
Observed versus expected
========================

By construction 10% of all papers are in the top 10%, so an institution can
be tested against that expectation.  The expectation enters the test as a
second set of the same size.
"""
from pathlib import Path

from ranktest import SignificanceConfig, compare_to_expected, read_ranking

DATA = Path(__file__).parent / "data" / "sample_ranking.csv"
records = read_ranking(DATA)
config = SignificanceConfig.from_levels([0.05, 0.01, 0.001])

for rec in records:
    c = compare_to_expected(rec, config)
    r = c.result
    side = "above" if r.z > 0 else "below"
    stars = sum(r.significant_at.values())
    label = f"{side} expectation" if stars else "consistent with expectation"
    print(f"{rec.name:28s} PP={rec.pp_top10:.3f}  z={r.z:7.3f}  {'*' * stars:3s} {label}")

###############################################################################
# Testing every institution is itself a family of tests.  Bonferroni with
# m = number of institutions makes each test stricter.
strict = SignificanceConfig(correction="bonferroni", comparisons=len(records))
kept = [rec.name for rec in records
        if compare_to_expected(rec, strict).adjusted_significant_at[0.05]]
print("still significant after correction:", ", ".join(kept))
