"""Overnight/intraday return decomposition and cumulative compounding.

The overnight return of day t is adj_open_t / adj_close_{t-1} - 1 (market
close to the next day's market open, so weekend and holiday gaps land in the
overnight leg).  The intraday return is adj_close_t / adj_open_t - 1.  Both
are simple returns compounded multiplicatively, so

    (1 + r_overnight) * (1 + r_intraday) == adj_close_t / adj_close_{t-1}

holds exactly for every consecutive bar pair.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import DataError, InsufficientDataError
from .market_data import AdjustedSeries

Leg = Literal["overnight", "intraday", "total"]

LEGS: tuple[Leg, ...] = ("overnight", "intraday", "total")


@dataclass(frozen=True)
class ReturnSplit:
    """Per-day (overnight, intraday) simple returns for one instrument.

    ``start_date`` is the day the cumulative curves are anchored at zero
    (the bar before the first return pair); ``dates[k]`` is the day whose
    open/close produced pair k.
    """

    instrument_id: str
    start_date: dt.date
    dates: tuple[dt.date, ...]
    overnight: np.ndarray
    intraday: np.ndarray

    def __post_init__(self) -> None:
        if not (len(self.dates) == len(self.overnight) == len(self.intraday)):
            raise ValueError("dates and return arrays must have equal length")

    def __len__(self) -> int:
        return len(self.dates)

    def total(self) -> np.ndarray:
        """Close-to-close return per day: (1+r_o)(1+r_i) - 1."""
        return (1.0 + self.overnight) * (1.0 + self.intraday) - 1.0

    def leg(self, leg: Leg) -> np.ndarray:
        if leg == "overnight":
            return self.overnight
        if leg == "intraday":
            return self.intraday
        if leg == "total":
            return self.total()
        raise ValueError(f"unknown leg {leg!r}")


@dataclass(frozen=True)
class CumulativeCurves:
    """Compounded overnight/intraday/total curves, all starting at 0.

    Each array has one more entry than the underlying return pairs; index 0
    is the zero anchor on ``dates[0]``.
    """

    instrument_id: str
    dates: tuple[dt.date, ...]
    overnight: np.ndarray
    intraday: np.ndarray
    total: np.ndarray

    def __len__(self) -> int:
        return len(self.dates)


def split_returns(series: AdjustedSeries) -> ReturnSplit:
    """Decompose an adjusted series into per-day overnight/intraday returns."""
    if len(series) < 2:
        raise InsufficientDataError(
            f"{series.instrument_id}: need at least 2 bars, have {len(series)}"
        )
    overnight = series.adj_open[1:] / series.adj_close[:-1] - 1.0
    intraday = series.adj_close[1:] / series.adj_open[1:] - 1.0
    for name, leg in (("overnight", overnight), ("intraday", intraday)):
        bad = np.nonzero(leg <= -1.0)[0]
        if bad.size:
            raise DataError(
                f"{series.instrument_id}: nonpositive {name} price ratio on "
                f"{series.dates[bad[0] + 1]}"
            )
    return ReturnSplit(
        series.instrument_id, series.dates[0], series.dates[1:], overnight, intraday
    )


def cumulate(returns: np.ndarray) -> np.ndarray:
    """Compound simple returns: c_t = (1+c_{t-1})(1+r_t) - 1, no leading zero."""
    return np.cumprod(1.0 + np.asarray(returns, dtype=np.float64)) - 1.0


def compound(split: ReturnSplit, leg: Leg) -> np.ndarray:
    """Cumulative returns of one leg, one value per pair."""
    return cumulate(split.leg(leg))


def cumulative_curves(split: ReturnSplit) -> CumulativeCurves:
    """All three compounded curves with the zero anchor prepended."""
    zero = np.zeros(1)
    return CumulativeCurves(
        split.instrument_id,
        (split.start_date,) + split.dates,
        np.concatenate([zero, compound(split, "overnight")]),
        np.concatenate([zero, compound(split, "intraday")]),
        np.concatenate([zero, compound(split, "total")]),
    )


def slice_range(
    series: AdjustedSeries,
    start: dt.date | None = None,
    end: dt.date | None = None,
) -> AdjustedSeries:
    """Bars with start <= date <= end; None leaves that side unbounded."""
    if start is not None and end is not None and start > end:
        raise ValueError(f"start {start} is after end {end}")
    lo = 0
    hi = len(series)
    if start is not None:
        while lo < hi and series.dates[lo] < start:
            lo += 1
    if end is not None:
        while hi > lo and series.dates[hi - 1] > end:
            hi -= 1
    if hi - lo < 2:
        raise InsufficientDataError(
            f"{series.instrument_id}: {hi - lo} bar(s) in [{start}, {end}]"
        )
    return AdjustedSeries(
        series.instrument_id,
        series.dates[lo:hi],
        series.adj_open[lo:hi],
        series.adj_close[lo:hi],
    )


@dataclass(frozen=True)
class ReturnStats:
    instrument_id: str
    count: int
    mean_overnight: float
    mean_intraday: float
    var_overnight: float
    var_intraday: float
    std_overnight: float
    std_intraday: float
    variance_ratio: float  # var_intraday / var_overnight
    overnight_variance_share: float  # var_o / (var_o + var_i)
    cum_overnight_final: float
    cum_intraday_final: float
    cum_total_final: float


def summary_stats(split: ReturnSplit, min_count: int = 30) -> ReturnStats:
    """Per-leg moments plus the paper-style variance split diagnostics.

    Variances use the n-1 denominator.  The variance ratio and overnight
    share are NaN when a denominator is zero.
    """
    n = len(split)
    if n < min_count:
        raise InsufficientDataError(
            f"{split.instrument_id}: {n} pairs < minimum {min_count}"
        )
    var_o = float(np.var(split.overnight, ddof=1))
    var_i = float(np.var(split.intraday, ddof=1))
    return ReturnStats(
        instrument_id=split.instrument_id,
        count=n,
        mean_overnight=float(np.mean(split.overnight)),
        mean_intraday=float(np.mean(split.intraday)),
        var_overnight=var_o,
        var_intraday=var_i,
        std_overnight=math.sqrt(var_o),
        std_intraday=math.sqrt(var_i),
        variance_ratio=var_i / var_o if var_o > 0 else math.nan,
        overnight_variance_share=var_o / (var_o + var_i) if var_o + var_i > 0 else math.nan,
        cum_overnight_final=float(compound(split, "overnight")[-1]),
        cum_intraday_final=float(compound(split, "intraday")[-1]),
        cum_total_final=float(compound(split, "total")[-1]),
    )


CURVES_HEADER = ("date", "cum_overnight", "cum_intraday", "cum_total")


def write_curves_csv(curves: CumulativeCurves, path: str | Path) -> None:
    """Curve CSV with full double precision (repr round-trips exactly)."""
    lines = [",".join(CURVES_HEADER)]
    for k in range(len(curves)):
        lines.append(
            f"{curves.dates[k].isoformat()},{float(curves.overnight[k])!r},"
            f"{float(curves.intraday[k])!r},{float(curves.total[k])!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_curves_csv(path: str | Path, instrument_id: str | None = None) -> CumulativeCurves:
    path = Path(path)
    if instrument_id is None:
        instrument_id = path.stem
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = tuple(next(reader))
        if header != CURVES_HEADER:
            raise DataError(f"{path}: expected curve header {CURVES_HEADER}, got {header}")
        dates: list[dt.date] = []
        columns: list[list[float]] = [[], [], []]
        for row in reader:
            if not row:
                continue
            dates.append(dt.date.fromisoformat(row[0]))
            for k in range(3):
                columns[k].append(float(row[k + 1]))
    return CumulativeCurves(
        instrument_id,
        tuple(dates),
        np.array(columns[0]),
        np.array(columns[1]),
        np.array(columns[2]),
    )
