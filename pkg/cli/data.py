import sys
from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from app.data import DatasetName, default_path, normalize, read_wbcd
from app.data.dataset import NEGATIVE, POSITIVE

from . import utils


def prepare(
    dataset: DatasetName = typer.Option(DatasetName.original, *utils.FLAGS["dataset"]),
    input_path: Optional[Path] = typer.Option(
        None, *utils.FLAGS["input"], help="Raw UCI file [default: the dataset's file in WBCD_DATA_DIR]"),
    output: Optional[str] = typer.Option(
        None, *utils.FLAGS["output_file"], help='Writes the cleaned rows as CSV, "-" for stdout'),
    scale: bool = typer.Option(True, "--normalize/--raw", help="Min-max scale the features before writing"),
):
    """
    Parses and cleans a raw dataset file

    Rows holding a '?' are dropped. Parse errors name the offending line.
    """
    path = input_path or default_path(dataset)
    with utils.handle_errors():
        ds, summary = read_wbcd(path, dataset)

    if scale:
        ds = normalize(ds)

    if output == "-":
        ds.to_csv(sys.stdout)
        typer.echo(f"{summary.rows} rows ({summary.kept} after cleaning)", err=True)
        raise typer.Exit(0)

    if output:
        ds.to_csv(output)

    negative, positive = ds.class_names
    utils.print_table(
        table=Table("Dataset", "Rows", "Dropped", negative.capitalize(), positive.capitalize(), "Features"),
        rows=[(
            dataset.value,
            str(summary.rows),
            str(summary.dropped),
            str(summary.class_counts[NEGATIVE]),
            str(summary.class_counts[POSITIVE]),
            str(ds.n_features),
        )],
    )
    utils.success(f"{summary.rows} rows ({summary.kept} after cleaning)")
