"""Reading and writing ranking tables (one institution per row).

The input is UTF-8 delimited text with a header row.  Blank lines and lines
starting with ``#`` are skipped.  Indicator values may carry a trailing
``%``; whether they are percentages or fractions is set explicitly through
:class:`IngestConfig` and never guessed.
"""
from __future__ import annotations

import csv
import decimal
import enum
import io
from dataclasses import dataclass
from typing import Iterable, List, TextIO

from .stats import DEFAULT_EXPECTED, MIN_EXPECTED_CELL


class PPUnit(str, enum.Enum):
    PERCENT = "percent"
    PROPORTION = "proportion"


class IngestError(ValueError):
    """Base class for problems in a ranking file; `line` is 1-based or None."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingColumn(IngestError):
    pass


class MalformedRow(IngestError):
    pass


class DuplicateInstitution(IngestError):
    pass


class OutOfRange(IngestError):
    pass


@dataclass(frozen=True)
class InstitutionRecord:
    name: str
    publications: int
    pp_top10: float

    def __post_init__(self):
        if not self.name:
            raise ValueError("institution name must be non-empty")
        if self.publications < 1:
            raise ValueError(f"{self.name}: publications must be >= 1")
        if not 0.0 <= self.pp_top10 <= 1.0:
            raise ValueError(f"{self.name}: pp_top10 must lie in [0, 1]")


@dataclass(frozen=True)
class IngestConfig:
    pp_unit: PPUnit = PPUnit.PERCENT
    institution_column: str = "institution"
    publications_column: str = "P"
    pp_column: str = "PP_top10"
    delimiter: str = ","

    def __post_init__(self):
        object.__setattr__(self, "pp_unit", PPUnit(self.pp_unit))
        cols = self.columns
        if any(not c for c in cols) or len(set(cols)) != len(cols):
            raise ValueError(f"column names must be distinct and non-empty: {cols}")
        if len(self.delimiter) != 1:
            raise ValueError(f"delimiter must be a single character, got {self.delimiter!r}")

    @property
    def columns(self):
        return (self.institution_column, self.publications_column, self.pp_column)


@dataclass(frozen=True)
class DatasetWarning:
    name: str
    kind: str  # "small-sample" or "degenerate-proportion"
    message: str

    def __str__(self):
        return self.message


def _split(line, delimiter):
    return next(csv.reader([line], delimiter=delimiter, quotechar='"', strict=True))


def _parse_publications(text, lineno):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(f"publication count {text!r} is not a number", lineno) from None
    if not value.is_integer():
        raise MalformedRow(f"publication count {text!r} is not a whole number", lineno)
    return int(value)


def _parse_pp(text, lineno):
    text = text.strip()
    if text.endswith("%"):
        text = text[:-1].rstrip()
    try:
        value = decimal.Decimal(text)
    except decimal.InvalidOperation:
        raise MalformedRow(f"indicator value {text!r} is not a number", lineno) from None
    if not value.is_finite():
        raise MalformedRow(f"indicator value {text!r} is not finite", lineno)
    return value


_HUNDRED = decimal.Decimal(100)


def parse_ranking(data: TextIO | Iterable[str], config: IngestConfig | None = None) -> List[InstitutionRecord]:
    """Parse a ranking table into records, preserving row order.

    Raises
    ------
    MissingColumn, MalformedRow, DuplicateInstitution, OutOfRange
        Row-level errors carry the 1-based physical line number.
    """
    config = config or IngestConfig()
    if isinstance(data, str):
        data = io.StringIO(data)
    header = None
    index = None
    records = []
    seen = {}
    for lineno, raw in enumerate(data, start=1):
        line = raw.rstrip("\r\n")
        if lineno == 1:
            line = line.lstrip("\ufeff")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            fields = _split(line, config.delimiter)
        except csv.Error as exc:
            raise MalformedRow(f"cannot split row: {exc}", lineno) from None
        if header is None:
            header = [f.strip() for f in fields]
            missing = [c for c in config.columns if c not in header]
            if missing:
                raise MissingColumn(
                    f"header lacks column(s) {', '.join(map(repr, missing))}; "
                    f"found {', '.join(map(repr, header))}", lineno)
            index = [header.index(c) for c in config.columns]
            continue
        if len(fields) != len(header):
            raise MalformedRow(
                f"expected {len(header)} fields, found {len(fields)}", lineno)
        name = fields[index[0]].strip()
        if not name:
            raise MalformedRow("institution name is empty", lineno)
        publications = _parse_publications(fields[index[1]], lineno)
        pp = _parse_pp(fields[index[2]], lineno)
        if publications < 1:
            raise OutOfRange(f"publication count must be >= 1, got {publications}", lineno)
        if config.pp_unit is PPUnit.PERCENT:
            if not 0 <= pp <= _HUNDRED:
                raise OutOfRange(f"percentage {pp} outside [0, 100]", lineno)
            # 12.3 -> 0.123 exactly, not 0.12300000000000001
            pp = float(pp / _HUNDRED)
        elif not 0 <= pp <= 1:
            raise OutOfRange(f"proportion {pp} outside [0, 1]", lineno)
        else:
            pp = float(pp)
        if name in seen:
            raise DuplicateInstitution(
                f"institution {name!r} already defined on line {seen[name]}", lineno)
        seen[name] = lineno
        records.append(InstitutionRecord(name, publications, pp))
    if header is None:
        raise MissingColumn("file has no header row")
    return records


def read_ranking(path, config=None):
    """Parse the ranking file at `path`."""
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_ranking(fh, config)


def write_ranking(records, stream, config=None):
    """Write records in the format :func:`parse_ranking` reads."""
    config = config or IngestConfig()
    writer = csv.writer(stream, delimiter=config.delimiter, lineterminator="\n")
    writer.writerow(config.columns)
    scale = 100.0 if config.pp_unit is PPUnit.PERCENT else 1.0
    for rec in records:
        writer.writerow([rec.name, rec.publications, repr(rec.pp_top10 * scale)])


def validate_dataset(records, expected=DEFAULT_EXPECTED):
    """Flag rows the z-test will handle poorly.  Never raises."""
    warnings = []
    for rec in records:
        if rec.publications * expected < MIN_EXPECTED_CELL:
            warnings.append(DatasetWarning(
                rec.name, "small-sample",
                f"{rec.name}: P = {rec.publications} is too small for the normal "
                f"approximation (P x {expected:g} < {MIN_EXPECTED_CELL:g})"))
        if rec.pp_top10 in (0.0, 1.0):
            warnings.append(DatasetWarning(
                rec.name, "degenerate-proportion",
                f"{rec.name}: PP_top10 = {rec.pp_top10:g}; tests against similar "
                "rows will be undefined"))
    return warnings
