"""Daily OHLC bar ingestion, validation, and dividend/split adjustment.

Input files are Yahoo-style daily bar CSVs with the exact header
``Date,Open,High,Low,Close,Adj Close,Volume``.  The adjustment step scales
each day's open by that day's ``adj_close/close`` factor, so compounding
overnight and intraday returns reproduces the total adjusted return.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, CsvFormatError, InsufficientDataError

CSV_HEADER = ("Date", "Open", "High", "Low", "Close", "Adj Close", "Volume")


@dataclass(frozen=True)
class Bar:
    """One instrument-day of OHLC data, unadjusted except for adj_close."""

    date: dt.date
    open: float
    high: float | None
    low: float | None
    close: float
    adj_close: float
    volume: float

    def is_valid(self) -> bool:
        if not (self.open > 0 and self.close > 0 and self.adj_close > 0):
            return False
        if self.volume < 0:
            return False
        if self.low is not None and self.low > min(self.open, self.close):
            return False
        if self.high is not None and self.high < max(self.open, self.close):
            return False
        return True


@dataclass(frozen=True)
class RowIssue:
    """A data row that could not be turned into a Bar."""

    line: int  # 1-based physical line number, header is line 1
    message: str


@dataclass
class ParseResult:
    instrument_id: str
    bars: list[Bar]
    issues: list[RowIssue]


@dataclass(frozen=True)
class AdjustedSeries:
    """Per-instrument series of dividend/split-adjusted open/close prices.

    Dates are strictly increasing and all prices strictly positive; the
    constructor enforces both.  By construction adj_open/adj_close equals
    the raw open/close ratio of the same day.
    """

    instrument_id: str
    dates: tuple[dt.date, ...]
    adj_open: np.ndarray
    adj_close: np.ndarray

    def __post_init__(self) -> None:
        if not (len(self.dates) == len(self.adj_open) == len(self.adj_close)):
            raise ValueError("dates and price arrays must have equal length")
        for i in range(1, len(self.dates)):
            if self.dates[i] <= self.dates[i - 1]:
                raise ValueError(f"dates not strictly increasing at {self.dates[i]}")
        if len(self.adj_open) and (
            np.min(self.adj_open) <= 0 or np.min(self.adj_close) <= 0
        ):
            raise ValueError("adjusted prices must be strictly positive")

    def __len__(self) -> int:
        return len(self.dates)


def _parse_price(raw: str, column: str) -> float | None:
    """Parse one price/volume cell; None for an empty optional cell."""
    raw = raw.strip()
    if raw == "":
        if column in ("High", "Low"):
            return None
        raise ValueError(f"empty {column}")
    if raw.lower() == "null":
        raise ValueError(f"{column} is null")
    return float(raw)


def parse_csv(source: str | bytes | io.TextIOBase, instrument_id: str) -> ParseResult:
    """Parse a daily-bar CSV into Bars, reporting bad rows instead of dropping
    them silently.

    Raises CsvFormatError when the header does not match CSV_HEADER; bad data
    rows (the literal token ``null``, unparsable numbers or dates) become
    RowIssue entries with their line number while the remaining rows still
    parse.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("empty file: missing header row") from None
    header = [column.strip() for column in header]
    if tuple(header) != CSV_HEADER:
        missing = [column for column in CSV_HEADER if column not in header]
        extra = [column for column in header if column not in CSV_HEADER]
        parts = []
        if missing:
            parts.append(f"missing column(s): {', '.join(missing)}")
        if extra:
            parts.append(f"unexpected column(s): {', '.join(extra)}")
        if not parts:
            parts.append("columns out of order")
        raise CsvFormatError(f"bad header ({'; '.join(parts)})")

    bars: list[Bar] = []
    issues: list[RowIssue] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) != len(CSV_HEADER):
            issues.append(RowIssue(line_no, f"expected {len(CSV_HEADER)} fields, got {len(row)}"))
            continue
        try:
            bar_date = dt.date.fromisoformat(row[0].strip())
        except ValueError:
            issues.append(RowIssue(line_no, f"bad date {row[0]!r}"))
            continue
        try:
            open_ = _parse_price(row[1], "Open")
            high = _parse_price(row[2], "High")
            low = _parse_price(row[3], "Low")
            close = _parse_price(row[4], "Close")
            adj_close = _parse_price(row[5], "Adj Close")
            volume = _parse_price(row[6], "Volume")
        except ValueError as exc:
            issues.append(RowIssue(line_no, str(exc)))
            continue
        assert open_ is not None and close is not None
        assert adj_close is not None and volume is not None
        bars.append(Bar(bar_date, open_, high, low, close, adj_close, volume))
    return ParseResult(instrument_id, bars, issues)


def validate_and_sort(bars: Iterable[Bar]) -> tuple[list[Bar], list[str]]:
    """Sort bars by date, drop invalid ones, and collapse duplicate dates.

    Duplicate dates keep the last occurrence in input order (data providers
    append corrections at file end).  Every removal is recorded as a warning.
    Raises InsufficientDataError when fewer than 2 bars survive.
    """
    warnings: list[str] = []
    by_date: dict[dt.date, Bar] = {}
    for bar in bars:
        if not bar.is_valid():
            warnings.append(f"{bar.date}: dropped bar violating price/volume invariants")
            continue
        if bar.date in by_date:
            warnings.append(f"{bar.date}: duplicate date, keeping last occurrence")
        by_date[bar.date] = bar
    clean = [by_date[d] for d in sorted(by_date)]
    if len(clean) < 2:
        raise InsufficientDataError(
            f"only {len(clean)} valid bar(s); need at least 2 to form a return pair"
        )
    return clean, warnings


def adjust(bars: Sequence[Bar], instrument_id: str) -> AdjustedSeries:
    """Build the adjusted series: adj_open = open * (adj_close / close).

    Scaling the open by the same-day adj_close/close factor is the unique
    choice that makes compounded overnight and intraday returns reproduce the
    adjusted close-to-close total return.
    """
    dates = tuple(bar.date for bar in bars)
    close = np.array([bar.close for bar in bars], dtype=np.float64)
    adj_close = np.array([bar.adj_close for bar in bars], dtype=np.float64)
    open_ = np.array([bar.open for bar in bars], dtype=np.float64)
    adj_open = open_ * (adj_close / close)
    return AdjustedSeries(instrument_id, dates, adj_open, adj_close)


def load_series(path: str | Path, instrument_id: str | None = None) -> tuple[AdjustedSeries, list[str]]:
    """Parse, validate, and adjust one CSV file; returns (series, diagnostics).

    The file name stem is used as the instrument id unless overridden.
    """
    path = Path(path)
    if instrument_id is None:
        instrument_id = path.stem
    result = parse_csv(path.read_text(encoding="utf-8"), instrument_id)
    diagnostics = [f"line {issue.line}: {issue.message}" for issue in result.issues]
    bars, warnings = validate_and_sort(result.bars)
    diagnostics.extend(warnings)
    return adjust(bars, instrument_id), diagnostics


def write_bars_csv(bars: Sequence[Bar], path: str | Path) -> None:
    """Serialize bars back to the input CSV schema (full double precision)."""
    lines = [",".join(CSV_HEADER)]
    for bar in bars:
        lines.append(
            ",".join(
                [
                    bar.date.isoformat(),
                    repr(bar.open),
                    "" if bar.high is None else repr(bar.high),
                    "" if bar.low is None else repr(bar.low),
                    repr(bar.close),
                    repr(bar.adj_close),
                    repr(bar.volume),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ManifestEntry:
    instrument_id: str
    path: Path
    start: dt.date | None = None
    end: dt.date | None = None


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a batch manifest: one ``ID PATH [START [END]]`` line per instrument.

    Blank lines and ``#`` comments are skipped; relative paths resolve
    against the manifest's own directory.
    """
    path = Path(path)
    entries: list[ManifestEntry] = []
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 2 or len(fields) > 4:
            raise ConfigError(f"{path}:{line_no}: expected 'ID PATH [START [END]]'")
        start = end = None
        try:
            if len(fields) >= 3:
                start = dt.date.fromisoformat(fields[2])
            if len(fields) == 4:
                end = dt.date.fromisoformat(fields[3])
        except ValueError as exc:
            raise ConfigError(f"{path}:{line_no}: {exc}") from None
        csv_path = Path(fields[1])
        if not csv_path.is_absolute():
            csv_path = path.parent / csv_path
        entries.append(ManifestEntry(fields[0], csv_path, start, end))
    return entries


@lru_cache(maxsize=32)
def weekday_calendar(start: dt.date, n_days: int) -> tuple[dt.date, ...]:
    """First n_days Monday-to-Friday dates on or after start."""
    days: list[dt.date] = []
    current = start
    while len(days) < n_days:
        if current.weekday() < 5:
            days.append(current)
        current += dt.timedelta(days=1)
    return tuple(days)
