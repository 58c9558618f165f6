import datetime as dt

import numpy as np
import pytest

from gapsplit.market_data import AdjustedSeries, Bar


@pytest.fixture
def simple_csv() -> str:
    return (
        "Date,Open,High,Low,Close,Adj Close,Volume\n"
        "2020-01-02,100.0,101.0,99.0,100.5,100.5,1000\n"
        "2020-01-03,100.5,103.0,100.0,102.0,102.0,1500\n"
        "2020-01-06,101.0,102.0,98.0,99.0,49.5,2000\n"
    )


def make_bar(
    day: dt.date,
    open_: float,
    close: float,
    adj_close: float | None = None,
    volume: float = 1000.0,
) -> Bar:
    high = max(open_, close)
    low = min(open_, close)
    return Bar(day, open_, high, low, close, adj_close if adj_close is not None else close, volume)


def make_series(
    prices: list[tuple[float, float]],
    instrument_id: str = "test",
    start: dt.date = dt.date(2020, 1, 1),
) -> AdjustedSeries:
    """Series from (adj_open, adj_close) pairs on consecutive days."""
    dates = tuple(start + dt.timedelta(days=k) for k in range(len(prices)))
    return AdjustedSeries(
        instrument_id,
        dates,
        np.array([p[0] for p in prices], dtype=np.float64),
        np.array([p[1] for p in prices], dtype=np.float64),
    )
