"""Headline-number formatting: cumulative returns as unity fractions and
percent strings (large magnitudes as thousands-separated integers, small
ones with up to four significant digits)."""

from __future__ import annotations


def _signed(value: float, magnitude: str) -> str:
    return ("-" if value < 0 else "+") + magnitude


def format_unity(c: float) -> str:
    """Cumulative return as a fraction of unity, e.g. 12171.3 -> '+12,171'."""
    a = abs(c)
    if a >= 10:
        return _signed(c, f"{a:,.0f}")
    return _signed(c, f"{a:.4g}")


def format_percent(c: float) -> str:
    """Cumulative return as a percent string, e.g. -0.9989 -> '-99.89%'."""
    pct = 100.0 * c
    a = abs(pct)
    if a >= 1000:
        return _signed(pct, f"{a:,.0f}%")
    return _signed(pct, f"{a:.4g}%")


def parse_percent(text: str) -> float:
    """Inverse of format_percent, back to a fraction of unity."""
    cleaned = text.strip().rstrip("%").replace(",", "")
    return float(cleaned) / 100.0
