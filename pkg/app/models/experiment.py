from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, computed_field, field_validator

from app.data.dataset import DatasetName
from app.models.network import NetworkTopology
from app.models.optimizer import OptimizerName, OptimizerSettings
from config import WBCD_ROOT_SEED

SCHEMA_VERSION = 1

DEFAULT_PCA_COMPONENTS: Dict[DatasetName, int] = {
    DatasetName.original: 4,
    DatasetName.diagnostic: 8,
    DatasetName.prognostic: 8,
}


class Scenario(str, Enum):
    a = "a"
    b = "b"
    c = "c"
    d = "d"

    @property
    def cv(self) -> bool:
        return self in (Scenario.b, Scenario.d)

    @property
    def pca(self) -> bool:
        return self in (Scenario.c, Scenario.d)

    @property
    def label(self) -> str:
        return f"{'CV' if self.cv else 'No-CV'} and {'PCA' if self.pca else 'No-PCA'}"

    @classmethod
    def from_flags(cls, cv: bool, pca: bool) -> "Scenario":
        return {
            (False, False): cls.a,
            (True, False): cls.b,
            (False, True): cls.c,
            (True, True): cls.d,
        }[(cv, pca)]


class ExperimentConfig(BaseModel):
    dataset: DatasetName = DatasetName.original
    optimizer: OptimizerName = OptimizerName.mtocl
    cv: bool = False
    folds: int = Field(10, ge=2)
    pca: bool = False
    pca_components: Optional[int] = Field(None, ge=1)
    # None means on for the prognostic dataset only
    smote: Optional[bool] = None
    smote_ratio: float = Field(2.0, ge=1)
    smote_k: int = Field(5, ge=1)
    hidden_sizes: Optional[List[int]] = None
    optimizers: OptimizerSettings = OptimizerSettings()
    seeds: List[NonNegativeInt] = Field(default_factory=lambda: [WBCD_ROOT_SEED], min_length=1)
    holdout_fraction: float = Field(0.7, gt=0, lt=1)
    # fit normalization and PCA on every row instead of the training split
    paper_compat: bool = False
    data_path: Optional[str] = None

    model_config = ConfigDict(frozen=True, json_schema_extra={
        "example": {
            "dataset": "original",
            "optimizer": "mtocl",
            "cv": False,
            "pca": False,
            "seeds": [2021],
        }
    })

    @field_validator("hidden_sizes")
    @classmethod
    def validate_hidden_sizes(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        if v is not None and any(size < 1 for size in v):
            raise ValueError("hidden layer sizes must be positive")
        return v

    @classmethod
    def for_scenario(cls, dataset: DatasetName, optimizer: OptimizerName, scenario: Scenario,
                     **fields) -> "ExperimentConfig":
        return cls(dataset=dataset, optimizer=optimizer, cv=scenario.cv, pca=scenario.pca, **fields)

    @property
    def scenario(self) -> Scenario:
        return Scenario.from_flags(self.cv, self.pca)

    @property
    def use_smote(self) -> bool:
        if self.smote is None:
            return self.dataset == DatasetName.prognostic
        return self.smote

    @property
    def n_components(self) -> int:
        return self.pca_components or DEFAULT_PCA_COMPONENTS[self.dataset]

    def resolved(self) -> "ExperimentConfig":
        """A copy with every dataset-dependent default filled in."""
        return self.model_copy(update={
            "smote": self.use_smote,
            "pca_components": self.n_components if self.pca else self.pca_components,
        })


class FoldReport(BaseModel):
    fold: int
    train_size: int
    test_size: int
    synthetic_rows: int = 0
    accuracy: float
    train_accuracy: float
    sensitivity: float
    specificity: float
    final_loss: float
    evaluations: int
    climate_events: int = 0
    trace: List[float] = []


class RunReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    dataset: DatasetName
    optimizer: OptimizerName
    scenario: Scenario
    seed: int
    experiment: ExperimentConfig
    topology: NetworkTopology
    dataset_checksum: str
    folds: List[FoldReport]
    mean_accuracy: float
    best_final_loss: float
    convergence_trace: List[float]
    # kept out of the serialized report so reruns are byte-identical
    wall_clock_seconds: float = Field(0.0, exclude=True)

    @computed_field
    @property
    def fold_accuracies(self) -> List[float]:
        return [fold.accuracy for fold in self.folds]

    @property
    def cell(self) -> Tuple[DatasetName, Scenario, OptimizerName]:
        return self.dataset, self.scenario, self.optimizer

    @property
    def stem(self) -> str:
        return f"{self.dataset.value}_{self.scenario.value}_{self.optimizer.value}_s{self.seed}"


class CellSummary(BaseModel):
    dataset: DatasetName
    scenario: Scenario
    optimizer: OptimizerName
    seeds: List[int]
    accuracies: List[float]
    mean: float
    stddev: float
    best: float
    error: Optional[str] = None


class CellRanking(BaseModel):
    dataset: DatasetName
    scenario: Scenario
    order: List[OptimizerName]
    scores: Dict[OptimizerName, float]
    # groups of optimizers sharing the same score
    ties: List[List[OptimizerName]] = []
