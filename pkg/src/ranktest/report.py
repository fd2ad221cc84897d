"""Rendering comparisons and calibration reports as text, CSV or JSON.

Machine formats print numbers with 10 significant digits; tables use four
decimals.  Nothing here writes diagnostics; callers route warnings to
stderr themselves.
"""
from __future__ import annotations

import csv
import functools
import json
from typing import List, Sequence

from .analysis import PairComparison

FORMATS = ("table", "csv", "json")


@functools.lru_cache(maxsize=None)
def level_label(alpha):
    return format(alpha, "g")


def num(x):
    """Canonical machine rendering: 10 significant digits."""
    return format(x, ".10g")


def _json_num(x):
    return float(num(x))


def comparison_fields(levels: Sequence[float]) -> List[str]:
    labels = [level_label(a) for a in levels]
    return (["left", "right", "z", "p_value", "pooled_p", "t_left", "t_right"]
            + [f"significant_{s}" for s in labels]
            + [f"adjusted_significant_{s}" for s in labels]
            + ["warning", "error"])


def comparison_record(c: PairComparison, levels):
    """Field-name -> JSON value mapping for one comparison."""
    rec = {"left": c.left, "right": c.right}
    r = c.result
    if r is None:
        rec.update(z=None, p_value=None, pooled_p=None, t_left=None, t_right=None)
    else:
        rec.update(z=_json_num(r.z), p_value=_json_num(r.p_value),
                   pooled_p=_json_num(r.pooled_p),
                   t_left=_json_num(r.t1), t_right=_json_num(r.t2))
    for a in levels:
        rec[f"significant_{level_label(a)}"] = None if r is None else r.significant_at[a]
    for a in levels:
        rec[f"adjusted_significant_{level_label(a)}"] = (
            None if r is None else c.adjusted_significant_at[a])
    rec["warning"] = None if r is None else r.approximation_warning
    rec["error"] = c.error
    return rec


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return num(value)
    return value


def write_comparisons_csv(comparisons, levels, stream):
    fields = comparison_fields(levels)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for c in comparisons:
        rec = comparison_record(c, levels)
        writer.writerow([_csv_cell(rec[f]) for f in fields])


def config_record(config, family_size):
    return {
        "levels": [_json_num(a) for a in config.levels],
        "expected_proportion": _json_num(config.expected_proportion),
        "correction": config.correction.value,
        "comparisons": family_size,
        "adjusted_levels": {level_label(a): _json_num(v)
                            for a, v in config.adjusted_levels(family_size).items()},
    }


def write_comparisons_json(comparisons, config, family_size, stream):
    """Top-level object with `config`, `family_size` and `comparisons`.

    Comparisons are written one compact object per line; with ``indent``
    the json module falls back to its slow pure-Python encoder.
    """
    write = stream.write
    write('{\n  "config": ')
    write(json.dumps(config_record(config, family_size)))
    write(f',\n  "family_size": {family_size},\n  "comparisons": [')
    sep = "\n    "
    for c in comparisons:
        write(sep)
        write(json.dumps(comparison_record(c, config.levels)))
        sep = ",\n    "
    write("\n  ]\n}\n")


def fmt_p(p):
    return "<1e-15" if p < 1e-15 else f"{p:.4f}"


def verdict(c: PairComparison, levels, expected=False):
    """Short wording such as ``significant (p < 0.01)``.

    Uses the adjusted decisions, which equal the raw ones when no correction
    is applied.
    """
    if c.result is None:
        return "undefined (degenerate)"
    passed = [a for a in levels if c.adjusted_significant_at[a]]
    if not passed:
        if expected:
            return "consistent with expectation"
        return f"not significant (p >= {level_label(levels[0])})"
    strongest = level_label(min(passed))
    if expected:
        side = "above" if c.result.z > 0 else "below"
        return f"{side} expectation (p < {strongest})"
    return f"significant (p < {strongest})"


def _yn(flag):
    return "yes" if flag else "no"


def format_detail(c: PairComparison, config, family_size, expected=False):
    """Multi-line block for a single comparison."""
    lines = [f"{c.left} vs {c.right}"]
    r = c.result
    if r is None:
        lines.append(f"  error: {c.error}")
        return "\n".join(lines)
    w = max(len(c.left), 12)
    lines += [
        f"  {'':14}{c.left:>{w}}  {c.right:>{w}}",
        f"  {'P':14}{r.n1:>{w}}  {r.n2:>{w}}",
        f"  {'PP_top10':14}{r.p1:>{w}.4f}  {r.p2:>{w}.4f}",
        f"  {'t (top)':14}{r.t1:>{w}.2f}  {r.t2:>{w}.2f}",
        f"  {'pooled p':14}{r.pooled_p:.4f}",
        f"  {'z':14}{r.z:.4f}",
        f"  {'p (2-sided)':14}{fmt_p(r.p_value)}",
    ]
    adj = config.adjusted_levels(family_size)
    lines.append(f"  {'level':10}{'raw':>5}  {'adjusted':>8}  threshold (m={family_size})")
    for a in config.levels:
        lines.append(f"  {level_label(a):10}{_yn(r.significant_at[a]):>5}  "
                     f"{_yn(c.adjusted_significant_at[a]):>8}  {adj[a]:.6g}")
    if r.approximation_warning:
        lines.append("  note: normal approximation is dubious (n*p or n*(1-p) < 5)")
    lines.append(f"  verdict: {verdict(c, config.levels, expected)}")
    return "\n".join(lines)


def format_table(comparisons, config, family_size, expected=False):
    """One row per comparison plus a header describing the family."""
    adj = config.adjusted_levels(family_size)
    head = [f"family size m = {family_size}; correction = {config.correction.value}"]
    head.append("adjusted alpha: " + ", ".join(
        f"{level_label(a)} -> {adj[a]:.6g}" for a in config.levels))
    lw = max([4] + [len(c.left) for c in comparisons])
    rw = max([5] + [len(c.right) for c in comparisons])
    cols = "".join(f"  {'sig ' + level_label(a):>9}" for a in config.levels)
    cols += "".join(f"  {'adj ' + level_label(a):>9}" for a in config.levels)
    rows = [f"{'left':<{lw}}  {'right':<{rw}}  {'z':>9}  {'p':>8}{cols}  verdict"]
    for c in comparisons:
        r = c.result
        if r is None:
            rows.append(f"{c.left:<{lw}}  {c.right:<{rw}}  ERROR: {c.error}")
            continue
        flags = "".join(f"  {_yn(r.significant_at[a]):>9}" for a in config.levels)
        flags += "".join(f"  {_yn(c.adjusted_significant_at[a]):>9}" for a in config.levels)
        mark = " *" if r.approximation_warning else ""
        rows.append(f"{c.left:<{lw}}  {c.right:<{rw}}  {r.z:>9.4f}  {fmt_p(r.p_value):>8}"
                    f"{flags}  {verdict(c, config.levels, expected)}{mark}")
    return "\n".join(head + rows)


CALIBRATION_FIELDS = ["level", "rejection_rate", "std_error", "trials", "valid_trials",
                      "degenerate"]


def calibration_rows(reports):
    rows = []
    for rep in reports:
        for a, rate in rep.rejection_rate.items():
            rows.append({"level": _json_num(a), "rejection_rate": _json_num(rate),
                         "std_error": _json_num(rep.binomial_std_error[a]),
                         "trials": rep.trials, "valid_trials": rep.valid_trials,
                         "degenerate": rep.degenerate})
    return rows


def write_calibration(reports, fmt, stream):
    rows = calibration_rows(reports)
    if fmt == "json":
        json.dump({"spec": [r.spec for r in reports], "results": rows}, stream, indent=2)
        stream.write("\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CALIBRATION_FIELDS)
        for row in rows:
            writer.writerow([_csv_cell(row[f]) for f in CALIBRATION_FIELDS])
    else:
        spec = reports[0].spec
        desc = ", ".join(f"{k}={v}" for k, v in spec.items() if k not in ("levels",))
        stream.write(f"Monte Carlo calibration ({desc})\n")
        stream.write(f"{'level':>8}  {'rate':>8}  {'std err':>8}  {'valid':>7}  {'degenerate':>10}\n")
        for row in rows:
            stream.write(f"{row['level']:>8g}  {row['rejection_rate']:>8.4f}  "
                         f"{row['std_error']:>8.4f}  {row['valid_trials']:>7}  "
                         f"{row['degenerate']:>10}\n")
