from pathlib import Path
from typing import Optional

import typer

from app.experiments import (GridFormat, Statistic, accuracy_grid,
                             compare_optimizers, load_reports, render_grid,
                             summarize, write_trace_files)
from config import WBCD_REPORTS_DIR

from . import utils


def report(
    input_dir: Path = typer.Option(WBCD_REPORTS_DIR, "--in", help="Directory of run reports"),
    fmt: GridFormat = typer.Option(GridFormat.csv, *utils.FLAGS["format"]),
    statistic: Statistic = typer.Option(Statistic.best, "--statistic", help="Seed aggregate shown per cell"),
    plot_dir: Optional[Path] = typer.Option(
        None, "--plot-dir", help="Writes an iteration,best_loss CSV per report here"),
):
    """
    Prints the dataset x scenario accuracy grid of a report directory

    The best optimizer of every row is named in the "best" column (csv)
    or shown in bold (md).
    """
    with utils.handle_errors():
        reports = load_reports(input_dir)
    if not reports:
        utils.error(f"No run reports found in {input_dir}")

    grid = accuracy_grid(summarize(reports), statistic)
    typer.echo(render_grid(grid, fmt), nl=False)

    for ranking in compare_optimizers(reports):
        if ranking.ties:
            tied = ", ".join("=".join(name.value for name in group) for group in ranking.ties)
            typer.echo(f"Tie in {ranking.dataset.value}/{ranking.scenario.value}: {tied}", err=True)

    if plot_dir:
        paths = write_trace_files(reports, plot_dir)
        typer.echo(f"{len(paths)} trace file(s) written to {plot_dir}", err=True)
