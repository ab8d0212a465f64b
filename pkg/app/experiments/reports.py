"""
Report persistence.

Every run is stored as `{dataset}_{scenario}_{optimizer}_s{seed}.json`
(schema version 1) next to a `.timing.json` sidecar holding the wall-clock
time, which stays out of the report itself so reruns produce identical bytes.
"""
import itertools
import json
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import pandas as pd
from pydantic import ValidationError

from app import logger
from app.data.dataset import DatasetName
from app.exceptions import DataError
from app.experiments.runner import summarize_cell
from app.models.experiment import SCHEMA_VERSION, CellSummary, RunReport, Scenario
from app.models.optimizer import OptimizerName
from app.utils.helpers import percent

TIMING_SUFFIX = ".timing.json"
SUMMARY_FILE = "summary.csv"


class Statistic(str, Enum):
    best = "best"
    mean = "mean"


class GridFormat(str, Enum):
    csv = "csv"
    md = "md"


def write_report(report: RunReport, directory: Union[str, Path]) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    path = directory / f"{report.stem}.json"
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    (directory / f"{report.stem}{TIMING_SUFFIX}").write_text(
        json.dumps({"wall_clock_seconds": report.wall_clock_seconds}) + "\n", encoding="utf-8"
    )
    return path


def load_reports(directory: Union[str, Path]) -> List[RunReport]:
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"{directory} is not a directory")

    reports = []
    for path in sorted(directory.glob("*.json")):
        if path.name.endswith(TIMING_SUFFIX):
            continue
        try:
            report = RunReport.model_validate_json(path.read_text(encoding="utf-8"))
        except ValidationError as exc:
            logger.warning(f"Skipping {path.name}: not a run report ({exc.error_count()} errors)")
            continue
        if report.schema_version != SCHEMA_VERSION:
            logger.warning(f"Skipping {path.name}: schema version {report.schema_version}")
            continue

        timing = path.with_name(f"{path.stem}{TIMING_SUFFIX}")
        if timing.exists():
            report.wall_clock_seconds = json.loads(timing.read_text())["wall_clock_seconds"]
        reports.append(report)

    logger.debug(f"Loaded {len(reports)} reports from {directory}")
    return reports


def summarize(reports: Iterable[RunReport]) -> List[CellSummary]:
    cells: Dict[tuple, List[RunReport]] = {}
    for report in sorted(reports, key=lambda r: (r.dataset.value, r.scenario.value, r.optimizer.value, r.seed)):
        cells.setdefault(report.cell, []).append(report)
    return [summarize_cell(cell) for cell in cells.values()]


def summary_frame(summaries: Sequence[CellSummary]) -> pd.DataFrame:
    rows = [
        {
            "dataset": s.dataset.value,
            "scenario": s.scenario.value,
            "optimizer": s.optimizer.value,
            "seeds": len(s.seeds),
            "mean": percent(s.mean),
            "stddev": percent(s.stddev),
            "best": percent(s.best),
            "error": s.error or "",
        }
        for s in summaries
    ]
    return pd.DataFrame(rows, columns=["dataset", "scenario", "optimizer", "seeds", "mean", "stddev", "best", "error"])


def write_summary(summaries: Sequence[CellSummary], directory: Union[str, Path]) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / SUMMARY_FILE
    summary_frame(summaries).to_csv(path, index=False)
    return path


def accuracy_grid(summaries: Sequence[CellSummary], statistic: Statistic = Statistic.best) -> pd.DataFrame:
    """
    One row per (dataset, scenario) that has at least one summary and one
    column per optimizer, holding accuracy percentages. The `best` column
    names the winning optimizers of the row.
    """
    statistic = Statistic(statistic)
    values = {(s.dataset, s.scenario, s.optimizer): getattr(s, statistic.value) for s in summaries}
    optimizers = [name for name in OptimizerName if any(key[2] == name for key in values)]

    rows = []
    for dataset, scenario in itertools.product(DatasetName, Scenario):
        cells = {name: round(values[(dataset, scenario, name)] * 100, 1) for name in optimizers
                 if (dataset, scenario, name) in values}
        if not cells:
            continue

        top = max(cells.values())
        row = {"dataset": dataset.value, "scenario": scenario.label}
        row.update({name.value: cells.get(name) for name in optimizers})
        row["best"] = "|".join(name.value for name in optimizers if cells.get(name) == top)
        rows.append(row)

    return pd.DataFrame(rows, columns=["dataset", "scenario", *[n.value for n in optimizers], "best"])


def render_grid(grid: pd.DataFrame, fmt: GridFormat = GridFormat.csv) -> str:
    if GridFormat(fmt) == GridFormat.csv:
        return grid.to_csv(index=False, float_format="%.1f")

    optimizers = [column for column in grid.columns if column not in ("dataset", "scenario", "best")]
    lines = [
        "| Dataset | Scenario | " + " | ".join(name.upper() for name in optimizers) + " |",
        "|---|---|" + "---|" * len(optimizers),
    ]
    for _, row in grid.iterrows():
        winners = set(row["best"].split("|"))
        cells = []
        for name in optimizers:
            value = row[name]
            if pd.isna(value):
                cells.append("-")
            elif name in winners:
                cells.append(f"**{value:.1f}**")
            else:
                cells.append(f"{value:.1f}")
        lines.append(f"| {row['dataset']} | {row['scenario']} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def write_trace_files(reports: Iterable[RunReport], directory: Union[str, Path]) -> List[Path]:
    """Writes one `iteration,best_loss` CSV per report for external plotting."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    paths = []
    for report in reports:
        path = directory / f"{report.stem}.trace.csv"
        pd.DataFrame({
            "iteration": range(1, len(report.convergence_trace) + 1),
            "best_loss": report.convergence_trace,
        }).to_csv(path, index=False)
        paths.append(path)
    return paths
