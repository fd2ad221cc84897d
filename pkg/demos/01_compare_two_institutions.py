"""
Comparing two institutions
==========================

Two universities with similar PP_top10% values may or may not differ
significantly.  The answer depends on how many papers each published.
"""
from pathlib import Path

from ranktest import compare_pair, read_ranking

DATA = Path(__file__).parent / "data" / "sample_ranking.csv"
records = {r.name: r for r in read_ranking(DATA)}

###############################################################################
# Alpha and Beta are 0.6 percentage points apart.
alpha, beta = records["Univ Alpha"], records["Univ Beta"]
c = compare_pair(alpha, beta)
print(f"{c.left} vs {c.right}: z = {c.result.z:.3f}, p = {c.result.p_value:.3f}")
print("significant at 5%:", c.result.significant_at[0.05])

###############################################################################
# The implied numbers of top-10% papers are kept as real numbers.
print("top papers:", round(c.result.t1, 1), round(c.result.t2, 1))

###############################################################################
# Alpha against Eta is a much larger gap.
c = compare_pair(alpha, records["Univ Eta"])
print(f"{c.left} vs {c.right}: z = {c.result.z:.3f}, p = {c.result.p_value:.2e}")
