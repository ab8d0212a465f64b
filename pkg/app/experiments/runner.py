import itertools
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app import logger
from app.data.dataset import Dataset, DatasetName
from app.data.loader import default_path, load_wbcd
from app.data.splits import SplitPlan, make_splits
from app.exceptions import ConfigurationError, ScenarioError, WbcdError
from app.experiments.pipeline import prepare_fold
from app.models.experiment import (CellRanking, CellSummary, ExperimentConfig,
                                   FoldReport, RunReport, Scenario)
from app.models.network import NetworkTopology
from app.models.optimizer import OptimizerName
from app.nn.network import accuracy, as_objective, confusion
from app.optim import run_optimizer
from app.optim.core import RngStream
from app.utils.concurrency import run_concurrently
from app.utils.helpers import mean, population_stddev
from app.utils.store import raw_datasets

TIE_TOLERANCE = 1e-12


def data_path(cfg: ExperimentConfig) -> Path:
    return Path(cfg.data_path) if cfg.data_path else default_path(cfg.dataset)


def load_raw(cfg: ExperimentConfig) -> Dataset:
    path = data_path(cfg)
    return raw_datasets.get_or_load(
        (cfg.dataset, str(path.resolve())),
        lambda: load_wbcd(path, cfg.dataset),
    )


def split_plan(cfg: ExperimentConfig) -> SplitPlan:
    return SplitPlan.kfold(cfg.folds) if cfg.cv else SplitPlan.holdout(cfg.holdout_fraction)


def _run_fold(raw: Dataset, fold: int, train_idx, test_idx, cfg: ExperimentConfig,
              rng: RngStream) -> Tuple[FoldReport, NetworkTopology]:
    prepare_rng, optimizer_rng = rng.spawn(2)
    prepared = prepare_fold(raw, train_idx, test_idx, cfg, prepare_rng)

    topology = NetworkTopology.default_for(prepared.train.n_features, cfg.hidden_sizes)
    objective = as_objective(prepared.train, topology)
    result = run_optimizer(cfg.optimizer, objective, cfg.optimizers, optimizer_rng)

    weights = result.best_position
    counts = confusion(weights, prepared.test, topology)
    report = FoldReport(
        fold=fold,
        train_size=len(prepared.train),
        test_size=len(prepared.test),
        synthetic_rows=prepared.synthetic_rows,
        accuracy=accuracy(weights, prepared.test, topology),
        train_accuracy=accuracy(weights, prepared.train, topology),
        sensitivity=counts.sensitivity,
        specificity=counts.specificity,
        final_loss=result.best_loss,
        evaluations=result.evaluations,
        climate_events=result.climate_events,
        trace=result.trace,
    )
    return report, topology


def run_scenario(cfg: ExperimentConfig, seed: Optional[int] = None, raw: Optional[Dataset] = None) -> RunReport:
    """
    Runs one (dataset, optimizer, scenario) cell for one seed: every fold
    (or the single holdout split) is preprocessed, optimized on its training
    rows and scored on its test rows.
    """
    cfg = cfg.resolved()
    seed = cfg.seeds[0] if seed is None else seed
    if seed < 0:
        raise ConfigurationError(f"seed must be non-negative, got {seed}")
    cell = (cfg.dataset.value, cfg.scenario.value, cfg.optimizer.value, seed)
    started = time.perf_counter()

    try:
        raw = raw if raw is not None else load_raw(cfg)
        checksum = raw.checksum()

        split_rng, folds_rng = RngStream(seed).spawn(2)
        splits = make_splits(raw, split_plan(cfg), split_rng)
        fold_rngs = folds_rng.spawn(len(splits))

        folds: List[FoldReport] = []
        topology = None
        for fold, ((train_idx, test_idx), rng) in enumerate(zip(splits, fold_rngs)):
            report, topology = _run_fold(raw, fold, train_idx, test_idx, cfg, rng)
            folds.append(report)
            logger.debug(f"Fold {fold} of {'/'.join(map(str, cell))}: accuracy {report.accuracy:.4f}")
    except ScenarioError:
        raise
    except (WbcdError, ValueError) as exc:
        raise ScenarioError(getattr(exc, "details", str(exc)), cell) from exc

    traces = [fold.trace for fold in folds]
    convergence = np.mean(np.asarray(traces), axis=0).tolist() if traces and traces[0] else []

    report = RunReport(
        dataset=cfg.dataset,
        optimizer=cfg.optimizer,
        scenario=cfg.scenario,
        seed=seed,
        experiment=cfg.model_copy(update={"seeds": [seed]}),
        topology=topology,
        dataset_checksum=checksum,
        folds=folds,
        mean_accuracy=mean([fold.accuracy for fold in folds]),
        best_final_loss=min(fold.final_loss for fold in folds),
        convergence_trace=convergence,
        wall_clock_seconds=time.perf_counter() - started,
    )
    logger.info(f"Cell {'/'.join(map(str, cell))} finished: mean accuracy {report.mean_accuracy:.4f} "
                f"in {report.wall_clock_seconds:.1f}s")
    return report


def summarize_cell(reports: Sequence[RunReport]) -> CellSummary:
    first = reports[0]
    accuracies = [report.mean_accuracy for report in reports]
    return CellSummary(
        dataset=first.dataset,
        scenario=first.scenario,
        optimizer=first.optimizer,
        seeds=[report.seed for report in reports],
        accuracies=accuracies,
        mean=mean(accuracies),
        stddev=population_stddev(accuracies),
        best=max(accuracies),
    )


@dataclass
class MatrixResult:
    reports: List[RunReport] = field(default_factory=list)
    summaries: List[CellSummary] = field(default_factory=list)
    failures: Dict[Tuple, str] = field(default_factory=dict)
    # raw dataset checksums taken before and after the run
    checksums: Dict[DatasetName, Tuple[str, str]] = field(default_factory=dict)


def run_matrix(
    datasets: Iterable[DatasetName],
    optimizers: Iterable[OptimizerName],
    scenarios: Iterable[Scenario],
    seeds: Sequence[int],
    base: Optional[ExperimentConfig] = None,
    workers: int = 1,
    data_paths: Optional[Dict[DatasetName, str]] = None,
    on_report=None,
) -> MatrixResult:
    """
    One report per (dataset, optimizer, scenario, seed). A failing cell is
    recorded in `failures` and the remaining cells still run.
    """
    base = base or ExperimentConfig()
    datasets, optimizers, scenarios = list(datasets), list(optimizers), list(scenarios)
    data_paths = data_paths or {}
    result = MatrixResult()

    raws: Dict[DatasetName, Dataset] = {}
    for dataset in datasets:
        cfg = base.model_copy(update={"dataset": dataset, "data_path": data_paths.get(dataset, base.data_path)})
        try:
            raws[dataset] = load_raw(cfg)
        except WbcdError as exc:
            logger.error(f"Could not load the {dataset.value} dataset: {exc.details}")
            for optimizer, scenario in itertools.product(optimizers, scenarios):
                result.failures[(dataset, scenario, optimizer)] = str(exc.details)

    checksums_before = {dataset: raw.checksum() for dataset, raw in raws.items()}

    units = [
        (dataset, optimizer, scenario, seed)
        for dataset, scenario, optimizer in itertools.product(datasets, scenarios, optimizers)
        if dataset in raws
        for seed in seeds
    ]

    def run_unit(unit):
        dataset, optimizer, scenario, seed = unit
        cfg = ExperimentConfig.for_scenario(
            dataset, optimizer, scenario,
            data_path=data_paths.get(dataset, base.data_path),
            **base.model_dump(exclude={"dataset", "optimizer", "cv", "pca", "seeds", "data_path"}),
        )
        try:
            report = run_scenario(cfg, seed=seed, raw=raws[dataset])
        except ScenarioError as exc:
            logger.error(str(exc))
            logger.debug("Cell failure", exc_info=True)
            return unit, None, str(exc.details)
        if on_report is not None:
            on_report(report)
        return unit, report, None

    logger.info(f"Running {len(units)} runs over {len(datasets) * len(scenarios) * len(optimizers)} cells "
                f"with {workers} worker(s)")

    by_cell: Dict[Tuple, List[RunReport]] = {}
    for (dataset, optimizer, scenario, seed), report, error in run_concurrently(run_unit, units, workers):
        key = (dataset, scenario, optimizer)
        if report is None:
            result.failures[key] = error
            continue
        result.reports.append(report)
        by_cell.setdefault(key, []).append(report)

    for key, reports in by_cell.items():
        summary = summarize_cell(reports)
        if key in result.failures:
            summary.error = result.failures[key]
        result.summaries.append(summary)

    result.checksums = {dataset: (checksums_before[dataset], raws[dataset].checksum()) for dataset in raws}
    return result


def compare_optimizers(reports: Sequence[RunReport]) -> List[CellRanking]:
    """
    Orders the optimizers of every (dataset, scenario) cell by mean accuracy
    over seeds. Cells with fewer than two optimizers are skipped.
    """
    scores: Dict[Tuple[DatasetName, Scenario], Dict[OptimizerName, List[float]]] = {}
    for report in reports:
        scores.setdefault((report.dataset, report.scenario), {}) \
            .setdefault(report.optimizer, []).append(report.mean_accuracy)

    optimizer_order = list(OptimizerName)
    rankings = []
    for (dataset, scenario) in sorted(scores, key=lambda k: (k[0].value, k[1].value)):
        cell_scores = {name: mean(values) for name, values in scores[(dataset, scenario)].items()}
        if len(cell_scores) < 2:
            continue

        order = sorted(cell_scores, key=lambda name: (-cell_scores[name], optimizer_order.index(name)))
        ties = []
        for _, group in itertools.groupby(order, key=lambda name: round(cell_scores[name] / TIE_TOLERANCE)):
            group = list(group)
            if len(group) > 1:
                ties.append(group)

        rankings.append(CellRanking(dataset=dataset, scenario=scenario, order=order,
                                    scores=cell_scores, ties=ties))
    return rankings
