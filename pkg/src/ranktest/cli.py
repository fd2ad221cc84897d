"""Command-line interface: ``ranktest {compare,expected,matrix,calibrate}``.

Exit codes: 0 success, 2 bad input file or invalid options, 3 unknown
institution, 4 degenerate test, 5 fewer than two institutions.
"""
from __future__ import annotations

import argparse
import sys

from . import report
from .analysis import (
    TooFewInstitutions,
    compare_pair,
    compare_to_expected,
    pairwise_matrix,
)
from .ingest import IngestConfig, IngestError, read_ranking, validate_dataset
from .simulate import CalibrationSpec, simulate_family, simulate_two_sample
from .stats import DEFAULT_EXPECTED, DEFAULT_LEVELS, Correction, DegeneratePooledProportion, SignificanceConfig

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNKNOWN = 3
EXIT_DEGENERATE = 4
EXIT_TOO_FEW = 5

AUTO = -1  # --bonferroni given without a value


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _level(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"significance level must lie in (0, 1): {text}")
    return value


def _proportion(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"proportion must lie in [0, 1]: {text}")
    return value


def _family_size(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"family size must be >= 1: {text}")
    return value


def _add_test_options(p, bonferroni_help):
    p.add_argument("--alpha", type=_level, action="append", metavar="LEVEL",
                   help="significance level; repeatable (default: 0.05 and 0.01)")
    p.add_argument("--bonferroni", type=_family_size, nargs="?", const=AUTO, metavar="M",
                   help=bonferroni_help)
    p.add_argument("--format", choices=report.FORMATS, default="table")


def _add_file_options(p):
    p.add_argument("file", help="ranking table (CSV with a header row)")
    p.add_argument("--pp-unit", choices=["percent", "proportion"], default="percent",
                   help="encoding of the PP_top10 column (default: percent)")
    p.add_argument("--delimiter", default=",", help="field delimiter (default: ',')")
    p.add_argument("--name-column", default="institution")
    p.add_argument("--p-column", default="P")
    p.add_argument("--pp-column", default="PP_top10")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ranktest",
        description="Two-proportion z-tests for PP_top10%-style ranking indicators. "
                    "|z| > 1.96 is significant at 5%, |z| > 2.576 at 1% (two-sided).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="test two institutions against each other")
    _add_file_options(p)
    p.add_argument("left")
    p.add_argument("right")
    _add_test_options(p, "Bonferroni family size M for this test (default without M: 1)")

    p = sub.add_parser("expected", help="test institutions against the expected share")
    _add_file_options(p)
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true", help="test every institution in the file")
    p.add_argument("--expected", type=_proportion, default=DEFAULT_EXPECTED,
                   help="expected proportion (default: 0.10)")
    _add_test_options(p, "apply Bonferroni with family size M "
                         "(default without M: number of institutions tested)")

    p = sub.add_parser("matrix", help="all pairwise tests with family-wise correction")
    _add_file_options(p)
    _add_test_options(p, "override the family size M (default: k(k-1)/2)")
    p.add_argument("--no-correction", action="store_true",
                   help="report adjusted decisions without Bonferroni correction")

    p = sub.add_parser("calibrate", help="Monte Carlo check of Type-I error and power")
    p.add_argument("--null", action="store_true", help="use --p1 for both sides")
    p.add_argument("--p1", type=_proportion, default=0.1)
    p.add_argument("--p2", type=_proportion, default=0.1)
    p.add_argument("--n", type=int, default=None, help="publications per institution")
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--n2", type=int, default=None)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=_level, action="append", metavar="LEVEL")
    p.add_argument("--family", type=int, metavar="K",
                   help="simulate K null institutions and report the family-wise error rate")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bonferroni", action="store_true")
    group.add_argument("--no-correction", action="store_true")
    p.add_argument("--format", choices=report.FORMATS, default="table")
    return parser


def _load(args, err):
    try:
        config = IngestConfig(pp_unit=args.pp_unit, institution_column=args.name_column,
                              publications_column=args.p_column, pp_column=args.pp_column,
                              delimiter=args.delimiter)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_INPUT) from None
    try:
        records = read_ranking(args.file, config)
    except IngestError as exc:
        raise CLIError(f"{args.file}: {exc}", EXIT_INPUT) from None
    except OSError as exc:
        raise CLIError(f"{args.file}: {exc.strerror or exc}", EXIT_INPUT) from None
    for w in validate_dataset(records, getattr(args, "expected", DEFAULT_EXPECTED)):
        print(f"warning: {w}", file=err)
    return records


def _config(args, m, **kwargs):
    levels = args.alpha or DEFAULT_LEVELS
    correction = Correction.NONE if m is None else Correction.BONFERRONI
    return SignificanceConfig.from_levels(levels, correction=correction,
                                          comparisons=m or 1, **kwargs)


def _emit(comparisons, config, family_size, fmt, out, err, expected=False, detail=True):
    for c in comparisons:
        if c.result is not None and c.result.approximation_warning:
            print(f"warning: {c.left} vs {c.right}: normal approximation is dubious",
                  file=err)
    if fmt == "csv":
        report.write_comparisons_csv(comparisons, config.levels, out)
    elif fmt == "json":
        report.write_comparisons_json(comparisons, config, family_size, out)
    elif detail and len(comparisons) == 1:
        out.write(report.format_detail(comparisons[0], config, family_size, expected) + "\n")
    else:
        out.write(report.format_table(comparisons, config, family_size, expected) + "\n")


def _find(records, name):
    for r in records:
        if r.name == name:
            return r
    raise CLIError(f"unknown institution: {name!r}", EXIT_UNKNOWN)


def cmd_compare(args, out, err):
    records = _load(args, err)
    a, b = _find(records, args.left), _find(records, args.right)
    m = None if args.bonferroni is None else (1 if args.bonferroni == AUTO else args.bonferroni)
    config = _config(args, m)
    try:
        c = compare_pair(a, b, config)
    except DegeneratePooledProportion as exc:
        raise CLIError(str(exc), EXIT_DEGENERATE) from None
    _emit([c], config, config.comparisons, args.format, out, err)


def cmd_expected(args, out, err):
    records = _load(args, err)
    if args.all == (args.name is not None):
        raise CLIError("give exactly one of an institution name or --all", EXIT_INPUT)
    targets = records if args.all else [_find(records, args.name)]
    if args.bonferroni is None:
        m = None
    else:
        m = len(targets) if args.bonferroni == AUTO else args.bonferroni
    config = _config(args, m, expected_proportion=args.expected)
    comparisons = []
    for rec in targets:
        try:
            comparisons.append(compare_to_expected(rec, config))
        except DegeneratePooledProportion as exc:
            raise CLIError(str(exc), EXIT_DEGENERATE) from None
    _emit(comparisons, config, config.comparisons, args.format, out, err, expected=True)


def cmd_matrix(args, out, err):
    records = _load(args, err)
    override = None if args.bonferroni in (None, AUTO) else args.bonferroni
    config = SignificanceConfig.from_levels(
        args.alpha or DEFAULT_LEVELS,
        correction=Correction.NONE if args.no_correction else Correction.BONFERRONI)
    try:
        matrix = pairwise_matrix(records, config, comparisons=override)
    except TooFewInstitutions as exc:
        raise CLIError(f"{args.file}: {exc}", EXIT_TOO_FEW) from None
    for c in matrix.errors():
        print(f"warning: {c.left} vs {c.right}: {c.error}", file=err)
    _emit(list(matrix.comparisons), matrix.config, matrix.family_size, args.format, out, err,
          detail=False)


def cmd_calibrate(args, out, err):
    levels = tuple(sorted(set(args.alpha or DEFAULT_LEVELS), reverse=True))
    n = 5000 if args.n is None else args.n
    n1 = n if args.n1 is None else args.n1
    n2 = n if args.n2 is None else args.n2
    try:
        if args.trials < 1:
            raise ValueError(f"--trials must be >= 1, got {args.trials}")
        if args.family is not None:
            if args.family < 2:
                raise ValueError(f"--family must be >= 2, got {args.family}")
            correction = Correction.BONFERRONI if args.bonferroni else Correction.NONE
            reports = [simulate_family(args.family, n1, args.p1, args.trials, a, args.seed,
                                       correction) for a in levels]
        else:
            p2 = args.p1 if args.null else args.p2
            spec = CalibrationSpec(args.p1, p2, n1, n2, args.trials, levels, args.seed)
            reports = [simulate_two_sample(spec)]
    except (ValueError, TypeError) as exc:
        raise CLIError(f"invalid calibration settings: {exc}", EXIT_INPUT) from None
    report.write_calibration(reports, args.format, out)


COMMANDS = {
    "compare": cmd_compare,
    "expected": cmd_expected,
    "matrix": cmd_matrix,
    "calibrate": cmd_calibrate,
}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out, err)
    except CLIError as exc:
        print(f"ranktest: error: {exc}", file=err)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
