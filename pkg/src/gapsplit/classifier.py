"""Long/Short/None labeling of an instrument's overnight/intraday signature.

A "Long" signature is a significantly positive mean overnight return paired
with a significantly negative mean intraday return (consistent with an agent
expanding long positions around the open and contracting them late in the
day); "Short" is the mirror image; everything else is "None".  Significance
is a per-leg t-statistic against a threshold theta, which makes the label
scale-free, mirror-symmetric, and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateDataError, InsufficientDataError
from .returns import ReturnSplit, compound


class Label(str, Enum):
    LONG = "Long"
    SHORT = "Short"
    NONE = "None"


@dataclass(frozen=True)
class Classification:
    instrument_id: str
    label: Label
    t_overnight: float
    t_intraday: float
    cum_overnight_final: float
    cum_intraday_final: float


def _t_stat(values: np.ndarray) -> float:
    n = len(values)
    std = float(np.std(values, ddof=1))
    # exact-constancy check: accumulation error can make std of a constant
    # array a nonzero denormal instead of 0.0
    if std == 0.0 or bool(np.all(values == values[0])):
        raise DegenerateDataError("zero variance in a return leg")
    return float(np.mean(values)) / (std / math.sqrt(n))


def classify(split: ReturnSplit, theta: float = 2.0, min_count: int = 250) -> Classification:
    """Label one instrument from its decomposed returns.

    Requires at least min_count pairs (about one trading year by default).
    """
    if len(split) < min_count:
        raise InsufficientDataError(
            f"{split.instrument_id}: {len(split)} pairs < minimum {min_count}"
        )
    t_o = _t_stat(split.overnight)
    t_i = _t_stat(split.intraday)
    if t_o >= theta and t_i <= -theta:
        label = Label.LONG
    elif t_o <= -theta and t_i >= theta:
        label = Label.SHORT
    else:
        label = Label.NONE
    return Classification(
        instrument_id=split.instrument_id,
        label=label,
        t_overnight=t_o,
        t_intraday=t_i,
        cum_overnight_final=float(compound(split, "overnight")[-1]),
        cum_intraday_final=float(compound(split, "intraday")[-1]),
    )


def label_fractions(labels: Iterable[Classification | Label]) -> tuple[float, float, float]:
    """(frac_long, frac_short, frac_none) over a panel; fractions sum to 1."""
    counts = {Label.LONG: 0, Label.SHORT: 0, Label.NONE: 0}
    total = 0
    for item in labels:
        label = item.label if isinstance(item, Classification) else item
        counts[label] += 1
        total += 1
    if total == 0:
        raise ValueError("no labels given")
    return counts[Label.LONG] / total, counts[Label.SHORT] / total, counts[Label.NONE] / total


LABELS_HEADER = ("instrument", "label", "t_overnight", "t_intraday", "cum_overnight", "cum_intraday")


def write_labels_csv(classifications: Sequence[Classification], path: str | Path) -> None:
    lines = [",".join(LABELS_HEADER)]
    for c in classifications:
        lines.append(
            f"{c.instrument_id},{c.label.value},{c.t_overnight!r},{c.t_intraday!r},"
            f"{c.cum_overnight_final!r},{c.cum_intraday_final!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
