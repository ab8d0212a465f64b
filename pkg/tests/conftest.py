import logging
import os
from pathlib import Path

import hypothesis
import numpy as np
import pytest

from app import logger
from app.data.dataset import Dataset, DatasetName
from app.data.loader import LAYOUTS, NUCLEUS_COLUMNS
from app.models.experiment import ExperimentConfig
from app.models.optimizer import MtoConfig, OptimizerSettings, PsoConfig
from app.utils.store import raw_datasets
from config import WBCD_DATA_DIR

np.seterr(all="warn")

hypothesis.settings.register_profile("default", deadline=None, max_examples=50)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=5)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def uci_file_present(name: DatasetName) -> bool:
    return (Path(WBCD_DATA_DIR) / LAYOUTS[name].file_name).is_file()


@pytest.fixture(autouse=True)
def clear_raw_cache():
    raw_datasets.clear()
    yield
    raw_datasets.clear()


@pytest.fixture(autouse=True)
def reset_logger():
    # the CLI installs its own handler and stops propagation
    yield
    logger.handlers.clear()
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


def original_rows(benign: int = 40, malignant: int = 20, missing: int = 3, seed: int = 7):
    """Rows in the original layout; the first `missing` rows hold a '?' bare nuclei score."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(benign + malignant):
        is_malignant = i >= benign
        low, high = (5, 11) if is_malignant else (1, 5)
        scores = [str(v) for v in rng.integers(low, high, 9)]
        if i < missing:
            scores[5] = "?"
        rows.append(",".join([str(1000 + i), *scores, "4" if is_malignant else "2"]))
    return rows


def nucleus_values(rng, shift: float):
    return [f"{v:.4f}" for v in rng.normal(10 + shift, 2, len(NUCLEUS_COLUMNS))]


def diagnostic_rows(benign: int = 30, malignant: int = 20, seed: int = 11):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(benign + malignant):
        is_malignant = i >= benign
        rows.append(",".join([str(840000 + i), "M" if is_malignant else "B",
                              *nucleus_values(rng, 4 if is_malignant else 0)]))
    return rows


def prognostic_rows(non_recurrent: int = 36, recurrent: int = 12, missing: int = 2, seed: int = 13):
    """The last `missing` rows lack the lymph node status."""
    rng = np.random.default_rng(seed)
    total = non_recurrent + recurrent
    rows = []
    for i in range(total):
        is_recurrent = i >= non_recurrent
        lymph = "?" if i >= total - missing else str(int(rng.integers(0, 10)))
        rows.append(",".join([
            str(119000 + i), "R" if is_recurrent else "N", str(int(rng.integers(1, 120))),
            *nucleus_values(rng, 3 if is_recurrent else 0),
            f"{rng.uniform(0.5, 5):.1f}", lymph,
        ]))
    return rows


def write_rows(path: Path, rows) -> Path:
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture
def original_file(tmp_path) -> Path:
    return write_rows(tmp_path / "breast-cancer-wisconsin.data", original_rows())


@pytest.fixture
def diagnostic_file(tmp_path) -> Path:
    return write_rows(tmp_path / "wdbc.data", diagnostic_rows())


@pytest.fixture
def prognostic_file(tmp_path) -> Path:
    return write_rows(tmp_path / "wpbc.data", prognostic_rows())


@pytest.fixture
def data_dir(tmp_path, original_file, diagnostic_file, prognostic_file) -> Path:
    return tmp_path


@pytest.fixture
def toy_dataset() -> Dataset:
    """Two well separated blobs, 24 negative and 12 positive rows."""
    rng = np.random.default_rng(3)
    features = np.vstack([rng.normal(0, 1, (24, 4)), rng.normal(4, 1, (12, 4))])
    labels = np.array([0] * 24 + [1] * 12)
    return Dataset(features=features, labels=labels, feature_names=[f"f{i}" for i in range(4)])


@pytest.fixture
def quick_settings() -> OptimizerSettings:
    return OptimizerSettings(
        pso=PsoConfig(n=8, iters=10),
        mto=MtoConfig(n_t=8, iters=12, cl=2),
    )


@pytest.fixture
def quick_config(original_file, quick_settings) -> ExperimentConfig:
    return ExperimentConfig(
        dataset=DatasetName.original,
        folds=3,
        hidden_sizes=[4],
        optimizers=quick_settings,
        data_path=str(original_file),
    )
