import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import typer
from decouple import Csv, RepositoryEnv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from app import logger
from app.exceptions import USAGE_ERRORS, ConfigurationError, WbcdError
from app.models.experiment import ExperimentConfig
from config import LOG_LEVEL

rich_console = Console()

EXIT_FAILURE = 1
EXIT_USAGE = 2

FLAGS: Dict[str, tuple] = {
    "dataset": ("--dataset", "-d"),
    "optimizer": ("--optimizer", "-o"),
    "scenario": ("--scenario", "-s"),
    "input": ("--input", "-i"),
    "output_file": ("--output",),
    "output_dir": ("--output-dir",),
    "config": ("--config", "-c"),
    "seed": ("--seed",),
    "seeds": ("--seeds",),
    "iters": ("--iters", "-n"),
    "workers": ("--workers", "-w"),
    "format": ("--format", "-f"),
    "verbose": ("--verbose", "-v"),
}

# config file keys holding comma separated integer lists
LIST_KEYS = {"seeds", "hidden_sizes"}
NESTED_PREFIXES = ("pso", "mto")


def success(text: str, auto_exit: bool = True):
    typer.echo(typer.style(text, fg=typer.colors.GREEN))
    if auto_exit:
        raise typer.Exit(0)


def error(text: str, code: int = EXIT_FAILURE, auto_exit: bool = True):
    typer.echo(typer.style(text, fg=typer.colors.RED), err=True)
    if auto_exit:
        raise typer.Exit(code)


def print_table(
    table: Table,
    rows: Iterable[Iterable[Any]],
    console: Optional[Console] = None
):
    for row in rows:
        table.add_row(*row)

    (console or rich_console).print(table)


@contextmanager
def handle_errors():
    """Turns library errors into a message and the matching exit code."""
    try:
        yield
    except WbcdError as exc:
        logger.debug("Command failed", exc_info=True)
        usage = isinstance(exc, USAGE_ERRORS) or isinstance(exc.__cause__, USAGE_ERRORS)
        error(f"Error: {exc}", EXIT_USAGE if usage else EXIT_FAILURE)


def setup_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else LOG_LEVEL
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=verbose)
    handler.setFormatter(logging.Formatter("%(message)s"))

    logger.handlers.clear()
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    Reads a key=value file into ExperimentConfig fields. Keys starting with
    PSO_ or MTO_ go to the matching optimizer settings.
    """
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist")

    values: Dict[str, Any] = {}
    for key, raw in RepositoryEnv(str(path)).data.items():
        key = key.lower()
        prefix, _, name = key.partition("_")
        if prefix in NESTED_PREFIXES and name:
            values.setdefault("optimizers", {}).setdefault(prefix, {})[name] = raw
        elif key in LIST_KEYS:
            values[key] = Csv(cast=int)(raw)
        elif key in ExperimentConfig.model_fields:
            values[key] = raw
        else:
            raise ConfigurationError(f"unknown key {key.upper()} in {path}")
    return values


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            merged[key] = _merge(merged.get(key, {}), value)
        else:
            merged[key] = value
    return merged


def build_config(config_file: Optional[Path] = None, **flags) -> ExperimentConfig:
    """Flags win over the config file, which wins over the model defaults."""
    values = read_config_file(config_file) if config_file else {}
    try:
        return ExperimentConfig.model_validate(_merge(values, flags))
    except ValidationError as exc:
        raise ConfigurationError(_describe(exc)) from exc


def _describe(exc: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in exc.errors()
    )
