"""Single-instrument market with time-of-day liquidity asymmetry and one
large agent running a daily expand-early/contract-late round trip.

Price convention
----------------
Prices are abstract currency units.  The print at any moment is

    price = base + transient

where ``base`` carries the fundamental price, permanent impact, and noise,
and ``transient`` is a decaying displacement.  A trade of ``x`` signed shares
at a liquidity slope ``kappa`` displaces the price by ``(x / trade_shares) *
kappa * p0`` currency units: ``kappa_open`` is the fractional displacement a
full trade of ``trade_shares`` causes at the open, ``kappa_close`` the same
at the close.  ``kappa_open > kappa_close`` encodes wide spreads and thin
depth early in the session.  A fraction ``permanent_fraction`` of each
displacement sticks to ``base`` forever; the rest joins ``transient``, which
decays by ``2**(-1/transient_half_life)`` at the start of each following day.
Displacements are additive (scaled by the fixed ``p0``), so flipping the
agent's side negates every impact displacement exactly.

Daily sequence
--------------
1. transient decays;
2. the agent expands by ``side * trade_shares`` at the open (impact lands in
   the opening print unless ``expand_at="open"``, which books the print
   first and the impact just after it -- the agent still pays its own
   impact);
3. Gaussian noise multiplies ``base`` intraday;
4. the agent contracts at the close, impact landing in the closing print.

Under ``t_plus_one`` a long-book agent cannot sell shares bought the same
day: the contraction is deferred to the next open, where it nets against
that day's expansion.  The ledger then records each round trip on the day it
completes; the final still-open trip is not booked.

The ledger marks the standing book to market on close-to-close moves and
charges the round trip at executed prices, including the agent's own impact.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError, SimulationBlowUpError
from .market_data import Bar, weekday_calendar


@dataclass(frozen=True)
class ImpactParams:
    kappa_open: float  # fractional displacement per full trade at the open
    kappa_close: float  # same at the close
    permanent_fraction: float  # in [0, 1]
    transient_half_life: float = 5.0  # days; "slow" relative to the daily trip
    noise_sigma_daily: float = 0.0
    p0: float = 100.0

    def __post_init__(self) -> None:
        if self.kappa_open < 0 or self.kappa_close < 0:
            raise ConfigError("kappa_open and kappa_close must be nonnegative")
        if not 0.0 <= self.permanent_fraction <= 1.0:
            raise ConfigError("permanent_fraction must be in [0, 1]")
        if self.transient_half_life <= 0:
            raise ConfigError("transient_half_life must be positive")
        if self.noise_sigma_daily < 0:
            raise ConfigError("noise_sigma_daily must be nonnegative")
        if self.p0 <= 0:
            raise ConfigError("p0 must be positive")

    @property
    def decay(self) -> float:
        return 2.0 ** (-1.0 / self.transient_half_life)


class Side(str, Enum):
    LONG = "long"
    SHORT = "short"

    @property
    def sign(self) -> int:
        return 1 if self is Side.LONG else -1


@dataclass(frozen=True)
class ManipulatorConfig:
    book_shares: float  # standing position marked to market, never traded
    trade_shares: float  # round-trip leg size, > 0
    side: Side
    n_days: int
    t_plus_one: bool = False
    expand_at: str = "pre-open"  # or "open": impact lands after the print
    contract_at: str = "close"
    start_date: dt.date = dt.date(1990, 1, 1)

    def __post_init__(self) -> None:
        if self.trade_shares <= 0:
            raise ConfigError("trade_shares must be positive")
        if self.n_days < 1:
            raise ConfigError("n_days must be >= 1")
        if self.side is Side.LONG and self.book_shares < 0:
            raise ConfigError("long-book side requires book_shares >= 0")
        if self.side is Side.SHORT and self.book_shares > 0:
            raise ConfigError("short-book side requires book_shares <= 0")
        if self.expand_at not in ("pre-open", "open"):
            raise ConfigError("expand_at must be 'pre-open' or 'open'")
        if self.contract_at != "close":
            raise ConfigError("contract_at must be 'close'")


@dataclass(frozen=True)
class SimState:
    base: float
    transient: float
    prev_close: float
    pending_buy_price: float | None  # t_plus_one: open exec price awaiting unwind
    day: int  # 1-based index of the next day to simulate


def initial_state(impact: ImpactParams) -> SimState:
    return SimState(impact.p0, 0.0, impact.p0, None, 1)


@dataclass(frozen=True)
class DayRecord:
    open: float
    close: float
    volume: float
    mtm_gain: float
    round_trip_cost: float
    net: float


def step_day(
    state: SimState, impact: ImpactParams, m: ManipulatorConfig, noise: float
) -> tuple[SimState, DayRecord]:
    """Advance one trading day; pure function of (state, params, noise)."""
    s = m.side.sign
    q = m.trade_shares
    phi = impact.permanent_fraction
    base = state.base
    transient = state.transient * impact.decay
    defer = m.t_plus_one and m.side is Side.LONG

    def displacement(shares: float, kappa: float) -> float:
        return (shares / q) * kappa * impact.p0

    # open phase: expansion, netted against a deferred unwind if one exists
    open_trade = s * q
    volume = abs(open_trade)
    if state.pending_buy_price is not None:
        open_trade -= s * q
        volume = abs(open_trade)
    delta = displacement(open_trade, impact.kappa_open)
    if m.expand_at == "pre-open":
        base += phi * delta
        transient += (1.0 - phi) * delta
        open_price = base + transient
        open_exec = open_price
    else:
        open_price = base + transient
        base += phi * delta
        transient += (1.0 - phi) * delta
        open_exec = base + transient
    if open_price <= 0 or open_exec <= 0:
        raise SimulationBlowUpError(f"nonpositive open price on day {state.day}")

    # intraday fundamental noise
    base *= 1.0 + noise

    # close phase
    pending_buy_price = state.pending_buy_price
    if defer:
        round_trip_cost = 0.0
        if pending_buy_price is not None:
            # trip opened yesterday completed at today's open
            round_trip_cost = s * q * (pending_buy_price - open_exec)
        pending_buy_price = open_exec
        close_price = base + transient
    else:
        delta = displacement(-s * q, impact.kappa_close)
        base += phi * delta
        transient += (1.0 - phi) * delta
        volume += q
        close_price = base + transient
        round_trip_cost = s * q * (open_exec - close_price)
    if close_price <= 0:
        raise SimulationBlowUpError(f"nonpositive close price on day {state.day}")

    mtm_gain = m.book_shares * (close_price - state.prev_close)
    record = DayRecord(
        open=open_price,
        close=close_price,
        volume=volume,
        mtm_gain=mtm_gain,
        round_trip_cost=round_trip_cost,
        net=mtm_gain - round_trip_cost,
    )
    new_state = SimState(base, transient, close_price, pending_buy_price, state.day + 1)
    return new_state, record


@dataclass(frozen=True)
class SimLedger:
    day: np.ndarray  # 1-based
    mtm_gain: np.ndarray
    round_trip_cost: np.ndarray
    net: np.ndarray

    def __len__(self) -> int:
        return len(self.day)


@dataclass(frozen=True)
class SimResult:
    bars: list[Bar]
    ledger: SimLedger
    cumulative_net: float


def run_sim(impact: ImpactParams, m: ManipulatorConfig, seed: int = 0) -> SimResult:
    """Run the full simulation; deterministic given (impact, m, seed).

    Daily noise is pre-drawn as one Gaussian vector from a PCG64 generator
    seeded with ``seed``, so day t's noise is a pure function of (seed, t).
    """
    n = m.n_days
    if impact.noise_sigma_daily > 0:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        noise = rng.normal(0.0, impact.noise_sigma_daily, n)
    else:
        noise = np.zeros(n)
    calendar = weekday_calendar(m.start_date, n)

    state = initial_state(impact)
    bars: list[Bar] = []
    mtm = np.empty(n)
    cost = np.empty(n)
    net = np.empty(n)
    for t in range(n):
        state, record = step_day(state, impact, m, float(noise[t]))
        bars.append(
            Bar(
                date=calendar[t],
                open=record.open,
                high=max(record.open, record.close),
                low=min(record.open, record.close),
                close=record.close,
                adj_close=record.close,
                volume=record.volume,
            )
        )
        mtm[t] = record.mtm_gain
        cost[t] = record.round_trip_cost
        net[t] = record.net
    ledger = SimLedger(np.arange(1, n + 1), mtm, cost, net)
    return SimResult(bars, ledger, float(net.sum()))


def profitability_threshold(impact: ImpactParams, m: ManipulatorConfig) -> float:
    """Smallest book for which expected daily net turns positive.

    Noise is ignored (expectation); prices do not depend on the book size, so
    net(W) = (W * price_gain - total_cost) / n_days is affine in W and the
    bisection root is exact up to float resolution.
    """
    quiet = replace(impact, noise_sigma_daily=0.0)
    result = run_sim(quiet, m, seed=0)
    price_gain = result.bars[-1].close - quiet.p0  # mtm telescopes to this per share
    total_cost = float(result.ledger.round_trip_cost.sum())
    if price_gain <= 0:
        raise ConfigError(
            "no finite profitability threshold: the agent's trading produces no "
            "positive close-to-close drift (symmetric or zero liquidity asymmetry)"
        )

    def net(book: float) -> float:
        return book * price_gain - total_cost

    lo, hi = 0.0, 1.0
    doublings = 0
    while net(hi) <= 0:
        hi *= 2.0
        doublings += 1
        if doublings > 200:
            raise ConfigError("profitability threshold did not bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if net(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


SCENARIO_IMPACT_KEYS = {
    "kappa_open": float,
    "kappa_close": float,
    "permanent_fraction": float,
    "transient_half_life": float,
    "noise_sigma_daily": float,
    "p0": float,
}

SCENARIO_AGENT_KEYS = {
    "book_shares": float,
    "trade_shares": float,
    "side": Side,
    "n_days": int,
    "t_plus_one": bool,
    "expand_at": str,
    "contract_at": str,
    "start_date": dt.date.fromisoformat,
}


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def parse_scenario(path: str | Path) -> tuple[ImpactParams, ManipulatorConfig, int]:
    """Read a plain-text ``key = value`` scenario file.

    Returns (impact params, agent config, seed).  Unknown keys are errors so
    a typo cannot silently fall back to a default.
    """
    path = Path(path)
    impact_kwargs: dict[str, Any] = {}
    agent_kwargs: dict[str, Any] = {}
    seed = 0
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in SCENARIO_IMPACT_KEYS:
                impact_kwargs[key] = SCENARIO_IMPACT_KEYS[key](value)
            elif key == "t_plus_one":
                agent_kwargs[key] = _parse_bool(value)
            elif key in SCENARIO_AGENT_KEYS:
                agent_kwargs[key] = SCENARIO_AGENT_KEYS[key](value)
            elif key == "seed":
                seed = int(value)
            else:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}:{line_no}: bad value for {key}: {exc}") from None
    try:
        impact = ImpactParams(**impact_kwargs)
        agent = ManipulatorConfig(**agent_kwargs)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return impact, agent, seed
