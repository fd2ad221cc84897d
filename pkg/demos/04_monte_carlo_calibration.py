"""
Checking the test by simulation
===============================

Under the null hypothesis the z-test should reject about 5% of the time at
the 5% level.  Drawing top-paper counts from a binomial distribution shows
how close it gets, and how quickly errors pile up across many pairs.
"""
from ranktest import CalibrationSpec, simulate_family, simulate_two_sample

###############################################################################
# Two institutions with identical true shares.
spec = CalibrationSpec(0.1, 0.1, 5000, 5000, trials=20000, levels=(0.05, 0.01), seed=42)
rep = simulate_two_sample(spec)
for level, rate in rep.rejection_rate.items():
    print(f"level {level}: rejection rate {rate:.4f} +- {rep.binomial_std_error[level]:.4f}")

###############################################################################
# Power against a real difference of 2 percentage points.
for n in (500, 2000, 8000):
    rep = simulate_two_sample(CalibrationSpec(0.12, 0.1, n, n, 4000, levels=(0.05,), seed=1))
    print(f"n = {n:5d}: power {rep.rejection_rate[0.05]:.3f}")

###############################################################################
# Ten identical institutions, 45 pairs: chance of at least one false alarm.
for correction in ("none", "bonferroni"):
    rep = simulate_family(10, 5000, 0.1, trials=2000, level=0.05, seed=7,
                          correction=correction)
    print(f"{correction:10s} family-wise error rate {rep.rejection_rate[0.05]:.3f}")
