from typing import List, Optional

import typer
from rich.table import Table

from app.models.optimizer import MtoConfig, OptimizerName, OptimizerSettings, PsoConfig
from app.optim import RngStream, run_optimizer
from app.optim.benchmarks import BENCHMARKS, benchmark_objective
from app.utils.helpers import median
from config import WBCD_ROOT_SEED

from . import utils


def bench(
    function: str = typer.Option("sphere", "--function", help=f"One of {', '.join(BENCHMARKS)}"),
    optimizers: Optional[List[OptimizerName]] = typer.Option(
        None, *utils.FLAGS["optimizer"], help="Repeat to select optimizers [default: all]"),
    dim: int = typer.Option(10, "--dim", min=1, help="Search space dimension"),
    seeds: int = typer.Option(5, *utils.FLAGS["seeds"], min=1, help="Number of seeded runs per optimizer"),
    root_seed: int = typer.Option(WBCD_ROOT_SEED, *utils.FLAGS["seed"], help="First seed, the others follow it"),
    iters: int = typer.Option(500, *utils.FLAGS["iters"], min=0),
):
    """
    Runs the optimizers on a benchmark function with a known minimum of 0
    """
    if function not in BENCHMARKS:
        utils.error(f'Unknown function "{function}", expected one of {", ".join(BENCHMARKS)}', utils.EXIT_USAGE)

    settings = OptimizerSettings(pso=PsoConfig(iters=iters), mto=MtoConfig(iters=iters))
    names = list(optimizers or []) or list(OptimizerName)

    runs = []
    with utils.handle_errors():
        for name in names:
            for seed in range(root_seed, root_seed + seeds):
                result = run_optimizer(name, benchmark_objective(function, dim), settings, RngStream(seed))
                runs.append((name, seed, result))

    utils.print_table(
        table=Table("Optimizer", "Seed", "Initial loss", "Final loss", "Evaluations"),
        rows=[
            (name.value, str(seed), f"{result.initial_best_loss:.6g}", f"{result.best_loss:.6g}",
             str(result.evaluations))
            for name, seed, result in runs
        ]
    )

    finals = {name: [result.best_loss for n, _, result in runs if n == name] for name in names}
    utils.print_table(
        table=Table("Optimizer", "Median", "Best", "Worst"),
        rows=[
            (name.value, f"{median(losses):.6g}", f"{min(losses):.6g}", f"{max(losses):.6g}")
            for name, losses in finals.items()
        ]
    )
