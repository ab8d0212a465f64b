"""
Readers for the three Wisconsin breast cancer files in their UCI layout.

  original    id, 9 cytology scores (1-10), class (2 benign / 4 malignant)
  diagnostic  id, diagnosis (B / M), 30 nucleus features
  prognostic  id, outcome (N / R), time, 30 nucleus features, tumor size,
              lymph node status

'?' marks a missing cell; every row holding one is dropped. The lymph node
status column of the prognostic file only takes part in that cleaning, it is
not a predictor.
"""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple, Union

import pandas as pd

from app import logger
from app.data.dataset import NEGATIVE, POSITIVE, Dataset, DatasetName
from app.exceptions import ConfigurationError, DataError, ParseError
from config import (WBCD_DATA_DIR, WBCD_DIAGNOSTIC_FILE, WBCD_ORIGINAL_FILE,
                    WBCD_PROGNOSTIC_FILE)

MISSING = "?"

NUCLEUS_FEATURES = [
    "radius", "texture", "perimeter", "area", "smoothness",
    "compactness", "concavity", "concave_points", "symmetry", "fractal_dimension",
]
NUCLEUS_COLUMNS = [f"{stat}_{name}" for stat in ("mean", "se", "worst") for name in NUCLEUS_FEATURES]


@dataclass(frozen=True)
class Layout:
    columns: List[str]
    label_column: str
    label_map: Dict[str, int]
    predictors: List[str]
    class_names: Tuple[str, str]
    file_name: str

    @property
    def value_columns(self) -> List[str]:
        return [c for c in self.columns if c not in ("id", self.label_column)]


LAYOUTS: Dict[DatasetName, Layout] = {
    DatasetName.original: Layout(
        columns=[
            "id", "clump_thickness", "uniformity_cell_size", "uniformity_cell_shape",
            "marginal_adhesion", "single_epithelial_cell_size", "bare_nuclei",
            "bland_chromatin", "normal_nucleoli", "mitoses", "class",
        ],
        label_column="class",
        label_map={"2": NEGATIVE, "4": POSITIVE},
        predictors=[
            "clump_thickness", "uniformity_cell_size", "uniformity_cell_shape",
            "marginal_adhesion", "single_epithelial_cell_size", "bare_nuclei",
            "bland_chromatin", "normal_nucleoli", "mitoses",
        ],
        class_names=("benign", "malignant"),
        file_name=WBCD_ORIGINAL_FILE,
    ),
    DatasetName.diagnostic: Layout(
        columns=["id", "diagnosis", *NUCLEUS_COLUMNS],
        label_column="diagnosis",
        label_map={"B": NEGATIVE, "M": POSITIVE},
        predictors=NUCLEUS_COLUMNS,
        class_names=("benign", "malignant"),
        file_name=WBCD_DIAGNOSTIC_FILE,
    ),
    DatasetName.prognostic: Layout(
        columns=["id", "outcome", "time", *NUCLEUS_COLUMNS, "tumor_size", "lymph_node_status"],
        label_column="outcome",
        label_map={"N": NEGATIVE, "R": POSITIVE},
        predictors=["time", *NUCLEUS_COLUMNS, "tumor_size"],
        class_names=("non-recurrent", "recurrent"),
        file_name=WBCD_PROGNOSTIC_FILE,
    ),
}


@dataclass(frozen=True)
class LoadSummary:
    dataset: DatasetName
    path: str
    rows: int
    dropped: int
    class_counts: Dict[int, int]

    @property
    def kept(self) -> int:
        return self.rows - self.dropped


def default_path(which: Union[DatasetName, str]) -> Path:
    return Path(WBCD_DATA_DIR) / LAYOUTS[DatasetName(which)].file_name


def _line_of(mask: pd.Series) -> int:
    return int(mask[mask].index[0]) + 1


def read_wbcd(path: Union[str, Path], which: Union[DatasetName, str]) -> Tuple[Dataset, LoadSummary]:
    which = DatasetName(which)
    layout = LAYOUTS[which]
    if not Path(path).is_file():
        raise ConfigurationError(f"{path} does not exist")

    try:
        frame = pd.read_csv(
            path, header=None, dtype=str, na_filter=False,
            skip_blank_lines=False, skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise DataError(f"{path} is empty")
    except pd.errors.ParserError as exc:
        match = re.search(r"line (\d+)", str(exc))
        raise ParseError(str(exc).strip(), int(match.group(1)) if match else None)

    if frame.shape[1] != len(layout.columns):
        raise ParseError(f"expected {len(layout.columns)} fields for the {which.value} layout, "
                         f"found {frame.shape[1]}", 1)

    frame.columns = layout.columns
    frame = frame.apply(lambda column: column.str.strip())

    blank = frame.isna().all(axis=1) | frame.fillna("").eq("").all(axis=1)
    frame = frame[~blank]

    short = frame.isna().any(axis=1)
    if short.any():
        raise ParseError(f"expected {len(layout.columns)} fields", _line_of(short))

    unknown = ~frame[layout.label_column].isin(layout.label_map.keys())
    if unknown.any():
        line = _line_of(unknown)
        token = frame.loc[unknown[unknown].index[0], layout.label_column]
        raise DataError(f"line {line}: unknown label token {token!r}")

    values = frame[layout.value_columns]
    missing = values.eq(MISSING)
    numeric = values.mask(missing).apply(pd.to_numeric, errors="coerce")
    malformed = (numeric.isna() & ~missing).any(axis=1)
    if malformed.any():
        raise ParseError("non-numeric value", _line_of(malformed))

    incomplete = missing.any(axis=1)
    clean = numeric[~incomplete]
    if clean.empty:
        raise DataError(f"{path} holds no complete rows")

    dataset = Dataset(
        features=clean[layout.predictors].to_numpy(dtype=float),
        labels=frame.loc[~incomplete, layout.label_column].map(layout.label_map).to_numpy(dtype=int),
        feature_names=list(layout.predictors),
        provenance=which.value,
        class_names=layout.class_names,
    )
    summary = LoadSummary(
        dataset=which,
        path=str(path),
        rows=int(frame.shape[0]),
        dropped=int(incomplete.sum()),
        class_counts=dataset.class_counts(),
    )

    logger.info(
        f"Loaded {which.value} dataset from \"{path}\": {summary.rows} rows, "
        f"{summary.dropped} dropped for missing values, "
        f"{summary.class_counts[NEGATIVE]} {layout.class_names[0]} vs "
        f"{summary.class_counts[POSITIVE]} {layout.class_names[1]}"
    )
    return dataset, summary


def load_wbcd(path: Union[str, Path], which: Union[DatasetName, str]) -> Dataset:
    return read_wbcd(path, which)[0]

