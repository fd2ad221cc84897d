"""Monte Carlo checks of the z-test's Type-I error and power.

Top-paper counts are drawn with numpy's ``Generator.binomial`` on a PCG64
bit generator seeded from the user's seed.  numpy samples the binomial
exactly (inversion for small ``n*p``, BTPE otherwise), so the normal
approximation is never used to test itself.  All draws for a run are taken
up front in one call, which makes a report a pure function of its inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .analysis import pairwise_matrix
from .ingest import InstitutionRecord
from .stats import (
    DEFAULT_LEVELS,
    Correction,
    DegeneratePooledProportion,
    SignificanceConfig,
    _check_levels,
    _check_proportion,
    _check_sample_size,
    z_two_proportions,
)


@dataclass(frozen=True)
class CalibrationSpec:
    true_p1: float
    true_p2: float
    n1: int
    n2: int
    trials: int
    levels: Tuple[float, ...] = DEFAULT_LEVELS
    seed: int = 0

    def __post_init__(self):
        _check_proportion(self.true_p1, "true_p1")
        _check_proportion(self.true_p2, "true_p2")
        _check_sample_size(self.n1, "n1")
        _check_sample_size(self.n2, "n2")
        _check_sample_size(self.trials, "trials")
        object.__setattr__(self, "levels", _check_levels(self.levels))
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class CalibrationReport:
    """Rejection rates per level.

    `valid_trials` is the denominator of each rate; trials with a degenerate
    pooled proportion are counted in `degenerate` and left out.
    """

    rejection_rate: Dict[float, float]
    trials: int
    valid_trials: int
    degenerate: int
    binomial_std_error: Dict[float, float]
    spec: dict = field(default_factory=dict)


def _std_errors(levels, trials):
    return {a: math.sqrt(a * (1 - a) / trials) for a in levels}


def _report(rejections, levels, trials, degenerate, spec):
    valid = trials - degenerate
    rates = {a: (rejections[a] / valid if valid else float("nan")) for a in levels}
    return CalibrationReport(rates, trials, valid, degenerate,
                             _std_errors(levels, trials), spec)


def simulate_two_sample(spec: CalibrationSpec) -> CalibrationReport:
    """Rejection rate of the two-sample test under binomial sampling."""
    rng = np.random.default_rng(spec.seed)
    counts = rng.binomial([spec.n1, spec.n2], [spec.true_p1, spec.true_p2],
                          size=(spec.trials, 2))
    rejections = dict.fromkeys(spec.levels, 0)
    degenerate = 0
    for t1, t2 in counts.tolist():
        try:
            res = z_two_proportions(t1 / spec.n1, spec.n1, t2 / spec.n2, spec.n2, spec.levels)
        except DegeneratePooledProportion:
            degenerate += 1
            continue
        for a, hit in res.significant_at.items():
            rejections[a] += hit
    echo = {"kind": "two-sample", "true_p1": spec.true_p1, "true_p2": spec.true_p2,
            "n1": spec.n1, "n2": spec.n2, "trials": spec.trials,
            "levels": list(spec.levels), "seed": spec.seed}
    return _report(rejections, spec.levels, spec.trials, degenerate, echo)


def simulate_family(k, n, true_p, trials, level=0.05, seed=0,
                    correction: Correction | str = Correction.NONE) -> CalibrationReport:
    """Family-wise error rate over all pairs of `k` identical institutions.

    A trial counts as a rejection when any pair is significant, after
    Bonferroni adjustment with m = k(k-1)/2 if requested.  A trial in which
    any pair is degenerate is excluded.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    _check_sample_size(n, "n")
    _check_proportion(true_p, "true_p")
    _check_sample_size(trials, "trials")
    correction = Correction(correction)
    config = SignificanceConfig(levels=(level,), correction=correction)
    names = [f"I{i:0{len(str(k - 1))}d}" for i in range(k)]

    rng = np.random.default_rng(seed)
    counts = rng.binomial(n, true_p, size=(trials, k))
    hits = 0
    degenerate = 0
    for row in counts.tolist():
        records = [InstitutionRecord(name, n, t / n) for name, t in zip(names, row)]
        matrix = pairwise_matrix(records, config)
        if any(not c.ok for c in matrix.comparisons):
            degenerate += 1
            continue
        hits += any(c.adjusted_significant_at[level] for c in matrix.comparisons)
    echo = {"kind": "family", "k": k, "n": n, "true_p": true_p, "trials": trials,
            "levels": [level], "seed": seed, "correction": correction.value,
            "family_size": k * (k - 1) // 2}
    return _report({level: hits}, (level,), trials, degenerate, echo)
