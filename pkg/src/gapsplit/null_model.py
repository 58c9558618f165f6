"""Random-walk toy world: what decomposed return plots should look like.

Each synthetic path draws one Gaussian overnight return and one Gaussian
intraday return per trading day.  With an annual drift mu, volatility sigma,
n trading days per year, and a fraction f of each day's variance realized
overnight, the per-period parameters are

    mu_o = f * mu / n        sigma_o = sigma * sqrt(f / n)
    mu_i = (1 - f) * mu / n  sigma_i = sigma * sqrt((1 - f) / n)

(drift splits in proportion to variance: expected return is compensation for
risk borne).  Survivorship is modeled crudely by discarding paths whose total
compounded return falls below a threshold.

Reproducibility contract: path ``k`` of a run is a pure function of
``(params.seed, k)``.  Each path gets its own numpy PCG64 generator seeded
with ``SeedSequence((seed, k))``; the overnight vector is drawn first, then
the intraday vector, then any out-of-range entries are redrawn in array
order.  Re-running with the same seed reproduces every path bit for bit
regardless of how many paths are drawn or in what order.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigError
from .market_data import weekday_calendar
from .returns import ReturnSplit, compound


@dataclass(frozen=True)
class NullModelParams:
    mu_annual: float = 0.07
    sigma_annual: float = 0.20
    trading_days_per_year: int = 261
    overnight_variance_fraction: float = 1.0 / 3.0
    years: int = 32
    survivorship_threshold: float = 3.0  # discard paths with total return below
    panel_count: int = 50
    seed: int = 0
    start_date: dt.date = dt.date(1990, 1, 1)

    def __post_init__(self) -> None:
        if not 0.0 < self.overnight_variance_fraction < 1.0:
            raise ConfigError("overnight_variance_fraction must be in (0, 1)")
        if self.sigma_annual < 0:
            raise ConfigError("sigma_annual must be nonnegative")
        if self.trading_days_per_year < 1 or self.years < 1:
            raise ConfigError("trading_days_per_year and years must be >= 1")
        if self.panel_count < 1:
            raise ConfigError("panel_count must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")

    @property
    def days_total(self) -> int:
        return self.trading_days_per_year * self.years


@dataclass(frozen=True)
class PeriodParams:
    mu_overnight: float
    mu_intraday: float
    sigma_overnight: float
    sigma_intraday: float


def per_period_params(p: NullModelParams) -> PeriodParams:
    """Per-overnight and per-intraday Gaussian parameters."""
    n = p.trading_days_per_year
    f = p.overnight_variance_fraction
    return PeriodParams(
        mu_overnight=f * p.mu_annual / n,
        mu_intraday=(1.0 - f) * p.mu_annual / n,
        sigma_overnight=p.sigma_annual * math.sqrt(f / n),
        sigma_intraday=p.sigma_annual * math.sqrt((1.0 - f) / n),
    )


@dataclass(frozen=True)
class PathSample:
    """One simulated multi-year path and its survivorship verdict."""

    path_seed: int
    split: ReturnSplit
    total_return: float
    accepted: bool
    redraws: int  # Gaussian draws <= -1 that were redrawn (expected 0)


def _draw_leg(rng: np.random.Generator, mu: float, sigma: float, n: int) -> tuple[np.ndarray, int]:
    values = rng.normal(mu, sigma, n)
    redraws = 0
    bad = values <= -1.0
    while bad.any():
        count = int(bad.sum())
        values[bad] = rng.normal(mu, sigma, count)
        redraws += count
        bad = values <= -1.0
    return values, redraws


def draw_path(p: NullModelParams, path_seed: int) -> PathSample:
    """Simulate one path; deterministic given (p.seed, path_seed)."""
    period = per_period_params(p)
    n = p.days_total
    rng = np.random.default_rng(np.random.SeedSequence((p.seed, path_seed)))
    overnight, redraws_o = _draw_leg(rng, period.mu_overnight, period.sigma_overnight, n)
    intraday, redraws_i = _draw_leg(rng, period.mu_intraday, period.sigma_intraday, n)
    calendar = weekday_calendar(p.start_date, n + 1)
    split = ReturnSplit(
        instrument_id=f"rw-{path_seed:05d}",
        start_date=calendar[0],
        dates=calendar[1:],
        overnight=overnight,
        intraday=intraday,
    )
    total_return = float(compound(split, "total")[-1])
    return PathSample(
        path_seed=path_seed,
        split=split,
        total_return=total_return,
        accepted=total_return >= p.survivorship_threshold,
        redraws=redraws_o + redraws_i,
    )


def iter_paths(p: NullModelParams, count: int, first_seed: int = 0) -> Iterator[PathSample]:
    """Unfiltered paths with sequential path seeds (moment checks, baselines)."""
    for path_seed in range(first_seed, first_seed + count):
        yield draw_path(p, path_seed)


@dataclass(frozen=True)
class Panel:
    """The accepted paths of one panel run plus draw accounting."""

    params: NullModelParams
    paths: tuple[PathSample, ...]
    draws_total: int
    acceptance_rate: float


_PARAM_PARSERS = {
    "mu_annual": float,
    "sigma_annual": float,
    "trading_days_per_year": int,
    "overnight_variance_fraction": float,
    "years": int,
    "survivorship_threshold": float,
    "panel_count": int,
    "seed": int,
    "start_date": dt.date.fromisoformat,
}


def parse_null_params(path) -> NullModelParams:
    """Read a plain-text ``key = value`` file of NullModelParams overrides."""
    from pathlib import Path

    kwargs = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARAM_PARSERS:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        try:
            kwargs[key] = _PARAM_PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{line_no}: bad value for {key}: {exc}") from None
    return NullModelParams(**kwargs)


def generate_panel(p: NullModelParams, max_draws: int = 1_000_000) -> Panel:
    """Draw sequential paths until panel_count pass the survivorship filter.

    Paths are drawn with path seeds 0, 1, 2, ... so acceptance order equals
    path-seed order.  Raises ConfigError when the acceptance rate is below
    1e-4 after max_draws draws (threshold effectively unreachable).
    """
    accepted: list[PathSample] = []
    draws = 0
    path_seed = 0
    while len(accepted) < p.panel_count:
        if draws >= max_draws and len(accepted) / draws < 1e-4:
            raise ConfigError(
                f"acceptance rate {len(accepted) / draws:.2e} after {draws} draws; "
                f"survivorship threshold {p.survivorship_threshold} looks unreachable"
            )
        sample = draw_path(p, path_seed)
        draws += 1
        path_seed += 1
        if sample.accepted:
            accepted.append(sample)
    return Panel(p, tuple(accepted), draws, len(accepted) / draws)
