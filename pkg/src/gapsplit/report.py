"""Batch driver: run a manifest through the pipeline and write curve CSVs,
labels, figure-style SVG grids, and a machine-readable summary.

Every output is deterministic: runs with identical inputs and seed produce
byte-identical output trees (floats are written with repr, JSON keys are
sorted, instruments keep manifest order, and nothing timestamps itself).
"""

from __future__ import annotations

import dataclasses
import datetime as dt
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import classifier, impact_sim, market_data, null_model, returns
from .errors import ConfigError, GapsplitError
from .formatting import format_percent, format_unity
from .svg_grid import PlotSpec, grid_shape, render_grid

MODES = ("real-data", "null-model", "strategy-sim")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


@dataclass(frozen=True)
class HeadlineNumbers:
    """Final cumulative returns per leg, as numbers and formatted strings."""

    instrument_id: str
    cum_overnight: float
    cum_intraday: float
    cum_total: float

    def as_dict(self) -> dict:
        return {
            "cum_overnight": self.cum_overnight,
            "cum_intraday": self.cum_intraday,
            "cum_total": self.cum_total,
            "overnight_unity": format_unity(self.cum_overnight),
            "intraday_unity": format_unity(self.cum_intraday),
            "total_unity": format_unity(self.cum_total),
            "overnight_pct": format_percent(self.cum_overnight),
            "intraday_pct": format_percent(self.cum_intraday),
            "total_pct": format_percent(self.cum_total),
        }


def headline_numbers(curves: returns.CumulativeCurves) -> HeadlineNumbers:
    return HeadlineNumbers(
        instrument_id=curves.instrument_id,
        cum_overnight=float(curves.overnight[-1]),
        cum_intraday=float(curves.intraday[-1]),
        cum_total=float(curves.total[-1]),
    )


def _write_json(payload: dict, path: Path) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_grid(curve_list: Sequence[returns.CumulativeCurves], scale: str, path: Path) -> None:
    rows, cols = grid_shape(len(curve_list))
    spec = PlotSpec(rows=rows, cols=cols, y_scale=scale)
    path.write_text(render_grid(curve_list, spec), encoding="utf-8")


def _run_real_data(
    entries: Sequence[market_data.ManifestEntry],
    out_dir: Path,
    *,
    start: dt.date | None,
    end: dt.date | None,
    theta: float,
    scale: str,
    outputs: frozenset[str],
) -> int:
    curves_dir = out_dir / "curves"
    if "curves" in outputs:
        curves_dir.mkdir(parents=True, exist_ok=True)

    records: list[dict] = []
    failures: list[dict] = []
    labeled: list[classifier.Classification] = []
    rendered: list[returns.CumulativeCurves] = []

    for entry in entries:
        try:
            series, diagnostics = market_data.load_series(entry.path, entry.instrument_id)
            series = returns.slice_range(
                series, entry.start if entry.start else start, entry.end if entry.end else end
            )
            split = returns.split_returns(series)
            curves = returns.cumulative_curves(split)
        except (GapsplitError, OSError) as exc:
            failures.append({"instrument": entry.instrument_id, "error": str(exc)})
            continue

        if "curves" in outputs:
            returns.write_curves_csv(curves, curves_dir / f"{entry.instrument_id}.csv")
        rendered.append(curves)

        record: dict = {
            "instrument": entry.instrument_id,
            "first_date": curves.dates[0].isoformat(),
            "last_date": curves.dates[-1].isoformat(),
            "pairs": len(split),
            "headline": headline_numbers(curves).as_dict(),
            "diagnostics": diagnostics,
        }
        try:
            stats = returns.summary_stats(split)
            record["stats"] = {
                k: v for k, v in dataclasses.asdict(stats).items() if k != "instrument_id"
            }
        except GapsplitError as exc:
            record["stats"] = None
            record["stats_error"] = str(exc)
        try:
            label = classifier.classify(split, theta=theta)
            labeled.append(label)
            record["label"] = {
                "label": label.label.value,
                "t_overnight": label.t_overnight,
                "t_intraday": label.t_intraday,
            }
        except GapsplitError as exc:
            record["label"] = None
            record["label_error"] = str(exc)
        records.append(record)

    if "labels" in outputs:
        classifier.write_labels_csv(labeled, out_dir / "labels.csv")
    if "grid" in outputs and rendered:
        _write_grid(rendered, scale, out_dir / "grid.svg")
    if "summary" in outputs:
        _write_json(
            {"mode": "real-data", "instruments": records, "failures": failures},
            out_dir / "summary.json",
        )
    if failures:
        for failure in failures:
            print(f"error: {failure['instrument']}: {failure['error']}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def write_panel(panel: null_model.Panel, out_dir: Path, scale: str = "linear") -> None:
    """One curve CSV per accepted path, panel_meta.json, and the grid SVG."""
    out_dir.mkdir(parents=True, exist_ok=True)
    curve_list = []
    for sample in panel.paths:
        curves = returns.cumulative_curves(sample.split)
        returns.write_curves_csv(curves, out_dir / f"{curves.instrument_id}.csv")
        curve_list.append(curves)
    params = dataclasses.asdict(panel.params)
    params["start_date"] = panel.params.start_date.isoformat()
    _write_json(
        {
            "seed": panel.params.seed,
            "panel_count": panel.params.panel_count,
            "draws_total": panel.draws_total,
            "acceptance_rate": panel.acceptance_rate,
            "redraws": sum(sample.redraws for sample in panel.paths),
            "params": params,
        },
        out_dir / "panel_meta.json",
    )
    _write_grid(curve_list, scale, out_dir / "grid.svg")


def _run_null_model(
    params_path: Path | None, out_dir: Path, seed: int | None, scale: str
) -> int:
    if params_path is None:
        params = null_model.NullModelParams()
    else:
        params = null_model.parse_null_params(params_path)
    if seed is not None:
        params = dataclasses.replace(params, seed=seed)
    panel = null_model.generate_panel(params)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_panel(panel, out_dir, scale)
    return EXIT_OK


LEDGER_HEADER = ("day", "mtm_gain", "round_trip_cost", "net", "cum_net")


def write_ledger_csv(ledger: impact_sim.SimLedger, path: Path) -> None:
    lines = [",".join(LEDGER_HEADER)]
    cum = 0.0
    for k in range(len(ledger)):
        cum += float(ledger.net[k])
        lines.append(
            f"{int(ledger.day[k])},{float(ledger.mtm_gain[k])!r},"
            f"{float(ledger.round_trip_cost[k])!r},{float(ledger.net[k])!r},{cum!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_strategy_sim(
    scenario_path: Path, out_dir: Path, seed: int | None, scale: str, theta: float
) -> int:
    impact, agent, file_seed = impact_sim.parse_scenario(scenario_path)
    run_seed = file_seed if seed is None else seed
    result = impact_sim.run_sim(impact, agent, run_seed)
    out_dir.mkdir(parents=True, exist_ok=True)

    market_data.write_bars_csv(result.bars, out_dir / "bars.csv")
    write_ledger_csv(result.ledger, out_dir / "ledger.csv")

    instrument_id = scenario_path.stem
    bars, _ = market_data.validate_and_sort(result.bars)
    series = market_data.adjust(bars, instrument_id)
    split = returns.split_returns(series)
    curves = returns.cumulative_curves(split)
    returns.write_curves_csv(curves, out_dir / f"{instrument_id}.curves.csv")
    _write_grid([curves], scale, out_dir / "grid.svg")

    record: dict = {
        "instrument": instrument_id,
        "seed": run_seed,
        "n_days": agent.n_days,
        "cumulative_net": result.cumulative_net,
        "headline": headline_numbers(curves).as_dict(),
    }
    try:
        label = classifier.classify(split, theta=theta)
        record["label"] = {
            "label": label.label.value,
            "t_overnight": label.t_overnight,
            "t_intraday": label.t_intraday,
        }
    except GapsplitError as exc:
        record["label"] = None
        record["label_error"] = str(exc)
    _write_json({"mode": "strategy-sim", "instruments": [record]}, out_dir / "summary.json")
    return EXIT_OK


def run_manifest(
    manifest_path: str | Path | None,
    mode: str,
    out_dir: str | Path,
    *,
    seed: int | None = None,
    start: dt.date | None = None,
    end: dt.date | None = None,
    theta: float = 2.0,
    scale: str = "linear",
    outputs: frozenset[str] = frozenset({"curves", "labels", "grid", "summary"}),
) -> int:
    """Run one batch job; returns a process exit status.

    0 = success, 1 = partial failure (some instruments failed, the rest were
    processed), 2 = configuration error (bad manifest, params, or mode).
    """
    out_dir = Path(out_dir)
    try:
        if mode == "real-data":
            if manifest_path is None:
                raise ConfigError("real-data mode requires a manifest")
            entries = market_data.read_manifest(manifest_path)
            if not entries:
                raise ConfigError(f"no instruments in manifest {manifest_path}")
            out_dir.mkdir(parents=True, exist_ok=True)
            return _run_real_data(
                entries, out_dir, start=start, end=end, theta=theta, scale=scale,
                outputs=outputs,
            )
        if mode == "null-model":
            path = Path(manifest_path) if manifest_path is not None else None
            return _run_null_model(path, out_dir, seed, scale)
        if mode == "strategy-sim":
            if manifest_path is None:
                raise ConfigError("strategy-sim mode requires a scenario file")
            return _run_strategy_sim(Path(manifest_path), out_dir, seed, scale, theta)
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
