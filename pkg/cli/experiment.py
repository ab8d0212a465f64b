from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from app import logger
from app.data import LAYOUTS, DatasetName
from app.experiments import (GridFormat, accuracy_grid, render_grid,
                             run_matrix, run_scenario, write_report,
                             write_summary, write_trace_files)
from app.models.experiment import Scenario
from app.models.optimizer import OptimizerName
from app.utils.helpers import percent, readable_duration
from config import (WBCD_DATA_DIR, WBCD_MATRIX_WORKERS, WBCD_REPORTS_DIR,
                    WBCD_ROOT_SEED, WBCD_SEED_COUNT)

from . import utils


def _iteration_budget(iters: Optional[int]):
    if iters is None:
        return None
    return {"pso": {"iters": iters}, "mto": {"iters": iters}}


def run(
    dataset: Optional[DatasetName] = typer.Option(None, *utils.FLAGS["dataset"], help="[default: original]"),
    optimizer: Optional[OptimizerName] = typer.Option(None, *utils.FLAGS["optimizer"], help="[default: mtocl]"),
    scenario: Optional[Scenario] = typer.Option(
        None, *utils.FLAGS["scenario"], help="a: no CV/no PCA, b: CV, c: PCA, d: CV and PCA [default: a]"),
    cv: Optional[bool] = typer.Option(None, "--cv/--no-cv", help="k-fold cross validation, overrides --scenario"),
    pca: Optional[bool] = typer.Option(None, "--pca/--no-pca", help="PCA feature reduction, overrides --scenario"),
    smote: Optional[bool] = typer.Option(
        None, "--smote/--no-smote", help="[default: on for the prognostic dataset only]"),
    seed: Optional[int] = typer.Option(None, *utils.FLAGS["seed"], help=f"[default: {WBCD_ROOT_SEED}]"),
    iters: Optional[int] = typer.Option(None, *utils.FLAGS["iters"], help="Iteration budget of the optimizer"),
    folds: Optional[int] = typer.Option(None, "--folds", help="Fold count for CV scenarios [default: 10]"),
    components: Optional[int] = typer.Option(None, "--components", help="PCA component count"),
    hidden: Optional[List[int]] = typer.Option(None, "--hidden", help="Hidden layer size, repeat per layer"),
    paper_compat: Optional[bool] = typer.Option(
        None, "--paper-compat/--no-paper-compat", help="Fit scaling and PCA on every row"),
    input_path: Optional[Path] = typer.Option(None, *utils.FLAGS["input"], help="Raw dataset file"),
    output_dir: Path = typer.Option(WBCD_REPORTS_DIR, *utils.FLAGS["output_dir"]),
    config_file: Optional[Path] = typer.Option(None, *utils.FLAGS["config"], help="key=value experiment file"),
):
    """
    Runs one (dataset, optimizer, scenario) cell and writes its report

    Flags win over the --config file, which wins over the built-in defaults.
    """
    with utils.handle_errors():
        cfg = utils.build_config(
            config_file,
            dataset=dataset,
            optimizer=optimizer,
            cv=cv if cv is not None else (scenario.cv if scenario else None),
            pca=pca if pca is not None else (scenario.pca if scenario else None),
            smote=smote,
            seeds=[seed] if seed is not None else None,
            folds=folds,
            pca_components=components,
            hidden_sizes=list(hidden or []) or None,
            paper_compat=paper_compat,
            data_path=str(input_path) if input_path else None,
            optimizers=_iteration_budget(iters),
        )
        report = run_scenario(cfg)

    path = write_report(report, output_dir)
    trace = write_trace_files([report], output_dir)[0]

    utils.print_table(
        table=Table("Fold", "Train", "Test", "Synthetic", "Accuracy", "Sensitivity", "Specificity", "Final loss"),
        rows=[
            (
                str(fold.fold),
                str(fold.train_size),
                str(fold.test_size),
                str(fold.synthetic_rows),
                f"{percent(fold.accuracy)}%",
                f"{percent(fold.sensitivity)}%",
                f"{percent(fold.specificity)}%",
                f"{fold.final_loss:.6f}",
            )
            for fold in report.folds
        ]
    )
    typer.echo(f"Accuracy: {percent(report.mean_accuracy)}% "
               f"({report.dataset.value}, {report.scenario.label}, {report.optimizer.value}, seed {report.seed})")
    typer.echo(f"Trace: {trace}")
    utils.success(f"Report written to {path} in {readable_duration(report.wall_clock_seconds)}")


def matrix(
    datasets: Optional[List[DatasetName]] = typer.Option(
        None, *utils.FLAGS["dataset"], help="Repeat to select datasets [default: all]"),
    optimizers: Optional[List[OptimizerName]] = typer.Option(
        None, *utils.FLAGS["optimizer"], help="Repeat to select optimizers [default: all]"),
    scenarios: Optional[List[Scenario]] = typer.Option(
        None, *utils.FLAGS["scenario"], help="Repeat to select scenarios [default: all]"),
    seeds: int = typer.Option(WBCD_SEED_COUNT, *utils.FLAGS["seeds"], min=1, help="Seeds per cell"),
    root_seed: int = typer.Option(WBCD_ROOT_SEED, *utils.FLAGS["seed"], min=0, help="First seed, the others follow it"),
    iters: Optional[int] = typer.Option(None, *utils.FLAGS["iters"], help="Iteration budget of every optimizer"),
    workers: int = typer.Option(WBCD_MATRIX_WORKERS, *utils.FLAGS["workers"], min=1),
    paper_compat: Optional[bool] = typer.Option(None, "--paper-compat/--no-paper-compat"),
    data_dir: Path = typer.Option(WBCD_DATA_DIR, "--data-dir", help="Directory holding the raw UCI files"),
    output_dir: Path = typer.Option(WBCD_REPORTS_DIR, *utils.FLAGS["output_dir"]),
    config_file: Optional[Path] = typer.Option(None, *utils.FLAGS["config"], help="key=value experiment file"),
):
    """
    Runs every (dataset, optimizer, scenario, seed) combination

    With no flags this is the full 3 x 3 x 4 study. A failing cell is
    reported and the remaining cells still run.
    """
    with utils.handle_errors():
        base = utils.build_config(config_file, paper_compat=paper_compat, optimizers=_iteration_budget(iters))

    datasets = list(datasets or []) or list(DatasetName)
    result = run_matrix(
        datasets=datasets,
        optimizers=list(optimizers or []) or list(OptimizerName),
        scenarios=list(scenarios or []) or list(Scenario),
        seeds=[root_seed + i for i in range(seeds)],
        base=base,
        workers=workers,
        data_paths={name: str(data_dir / LAYOUTS[name].file_name) for name in datasets},
        on_report=lambda report: write_report(report, output_dir),
    )

    for name, (before, after) in result.checksums.items():
        if before != after:
            logger.error(f"The cached {name.value} dataset changed during the run")

    if result.summaries:
        write_summary(result.summaries, output_dir)
        grid = render_grid(accuracy_grid(result.summaries), GridFormat.md)
        typer.echo(grid)

    for (dataset, scenario, optimizer), reason in result.failures.items():
        typer.echo(typer.style(f"{dataset.value}/{scenario.value}/{optimizer.value}: {reason}", fg=typer.colors.RED),
                   err=True)

    if result.failures:
        utils.error(f"{len(result.failures)} cell(s) failed, {len(result.reports)} report(s) written to {output_dir}")
    utils.success(f"{len(result.reports)} report(s) written to {output_dir}")
