"""gapsplit: overnight/intraday return decomposition and simulation toolkit.

Splits daily OHLC series into overnight (close to next open) and intraday
(open to close) return legs, compounds them into the familiar blue/green
cumulative curves, generates random-walk null panels with a survivorship
filter, labels per-instrument signatures Long/Short/None, and simulates a
market where one large agent expands its portfolio at the (illiquid) open
and contracts at the (liquid) close every day.
"""

from .classifier import Classification, Label, classify, label_fractions
from .errors import (
    ConfigError,
    CsvFormatError,
    DataError,
    DegenerateDataError,
    GapsplitError,
    InsufficientDataError,
    RenderError,
    SimulationBlowUpError,
)
from .impact_sim import (
    ImpactParams,
    ManipulatorConfig,
    Side,
    SimResult,
    profitability_threshold,
    run_sim,
    step_day,
)
from .market_data import (
    AdjustedSeries,
    Bar,
    adjust,
    load_series,
    parse_csv,
    read_manifest,
    validate_and_sort,
)
from .null_model import (
    NullModelParams,
    Panel,
    PathSample,
    draw_path,
    generate_panel,
    per_period_params,
)
from .report import headline_numbers, run_manifest
from .returns import (
    CumulativeCurves,
    ReturnSplit,
    compound,
    cumulative_curves,
    slice_range,
    split_returns,
    summary_stats,
)
from .svg_grid import PlotSpec, render_grid

__version__ = "0.1.0"

__all__ = [
    "AdjustedSeries",
    "Bar",
    "Classification",
    "ConfigError",
    "CsvFormatError",
    "CumulativeCurves",
    "DataError",
    "DegenerateDataError",
    "GapsplitError",
    "ImpactParams",
    "InsufficientDataError",
    "Label",
    "ManipulatorConfig",
    "NullModelParams",
    "Panel",
    "PathSample",
    "PlotSpec",
    "RenderError",
    "ReturnSplit",
    "Side",
    "SimResult",
    "SimulationBlowUpError",
    "adjust",
    "classify",
    "compound",
    "cumulative_curves",
    "draw_path",
    "generate_panel",
    "headline_numbers",
    "label_fractions",
    "load_series",
    "parse_csv",
    "per_period_params",
    "profitability_threshold",
    "read_manifest",
    "render_grid",
    "run_manifest",
    "run_sim",
    "slice_range",
    "split_returns",
    "step_day",
    "summary_stats",
    "validate_and_sort",
]
