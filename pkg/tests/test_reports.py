import json

import pandas as pd
import pytest

from app.data import DatasetName
from app.experiments import (GridFormat, Statistic, accuracy_grid, load_reports,
                             render_grid, run_scenario, summarize, write_report,
                             write_summary, write_trace_files)
from app.models.experiment import Scenario
from app.models.optimizer import OptimizerName

from .test_runner import fake_report


def full_matrix():
    return [
        fake_report(0.9 + 0.01 * i, optimizer=optimizer, scenario=scenario, dataset=dataset)
        for dataset in DatasetName
        for scenario in Scenario
        for i, optimizer in enumerate(OptimizerName)
    ]


def test_report_round_trip(tmp_path, quick_config):
    report = run_scenario(quick_config, seed=2)
    path = write_report(report, tmp_path)
    assert path.name == "original_a_mtocl_s2.json"
    assert (tmp_path / "original_a_mtocl_s2.timing.json").exists()

    payload = json.loads(path.read_text())
    assert payload["schema_version"] == 1
    assert "wall_clock_seconds" not in payload
    assert payload["fold_accuracies"] == [fold.accuracy for fold in report.folds]

    loaded, = load_reports(tmp_path)
    assert loaded.model_dump() == report.model_dump()
    assert loaded.wall_clock_seconds == pytest.approx(report.wall_clock_seconds)


def test_rerun_writes_identical_bytes(tmp_path, quick_config):
    first = write_report(run_scenario(quick_config, seed=3), tmp_path / "first")
    second = write_report(run_scenario(quick_config, seed=3), tmp_path / "second")
    assert first.read_bytes() == second.read_bytes()


def test_load_reports_skips_foreign_json(tmp_path):
    write_report(fake_report(0.9), tmp_path)
    (tmp_path / "notes.json").write_text('{"hello": "world"}')
    assert len(load_reports(tmp_path)) == 1


def test_full_matrix_grid_has_twelve_rows():
    grid = accuracy_grid(summarize(full_matrix()))
    assert len(grid) == 12
    assert list(grid.columns) == ["dataset", "scenario", "pso", "mto", "mtocl", "best"]
    assert set(grid["best"]) == {"mtocl"}
    assert grid.iloc[0]["scenario"] == "No-CV and No-PCA"


def test_single_report_grid():
    grid = accuracy_grid(summarize([fake_report(0.993)]))
    assert len(grid) == 1
    assert list(grid.columns) == ["dataset", "scenario", "mtocl", "best"]
    assert grid.iloc[0]["mtocl"] == 99.3


def test_best_and_mean_statistics():
    reports = [fake_report(0.90, seed=1), fake_report(0.96, seed=2)]
    assert accuracy_grid(summarize(reports), Statistic.best).iloc[0]["mtocl"] == 96.0
    assert accuracy_grid(summarize(reports), Statistic.mean).iloc[0]["mtocl"] == 93.0


def test_csv_and_markdown_hold_the_same_numbers():
    grid = accuracy_grid(summarize(full_matrix()))
    csv = render_grid(grid, GridFormat.csv)
    md = render_grid(grid, GridFormat.md)

    csv_rows = [line.split(",")[2:5] for line in csv.strip().splitlines()[1:]]
    md_rows = [[cell.strip().strip("*") for cell in line.split("|")[3:6]] for line in md.strip().splitlines()[2:]]
    assert csv_rows == md_rows
    assert md.count("**") == 2 * 12


def test_summary_csv(tmp_path):
    reports = [fake_report(0.9, seed=1), fake_report(1.0, seed=2)]
    path = write_summary(summarize(reports), tmp_path)
    frame = pd.read_csv(path)
    assert frame.loc[0, "mean"] == 95.0
    assert frame.loc[0, "stddev"] == 5.0
    assert frame.loc[0, "seeds"] == 2


def test_trace_files(tmp_path):
    path, = write_trace_files([fake_report(0.9)], tmp_path)
    assert path.read_text().splitlines() == ["iteration,best_loss", "1,0.2", "2,0.1"]
