import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from app.exceptions import DataError, DimensionError

NEGATIVE, POSITIVE = 0, 1


class DatasetName(str, Enum):
    original = "original"
    diagnostic = "diagnostic"
    prognostic = "prognostic"


class ScalingState(str, Enum):
    raw = "raw"
    normalized = "normalized"


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: List[str]
    provenance: str = "synthetic"
    scaling_state: ScalingState = ScalingState.raw
    class_names: Tuple[str, str] = ("negative", "positive")
    # true for rows generated by oversampling
    synthetic: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2:
            raise DimensionError("features must be a 2-D matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise DimensionError("label count does not match the row count",
                                 self.features.shape[0], self.labels.shape[0])
        if len(self.feature_names) != self.features.shape[1]:
            raise DimensionError("feature name count does not match the column count",
                                 self.features.shape[1], len(self.feature_names))
        if np.isnan(self.features).any():
            raise DataError("features contain missing values")
        if not np.isin(self.labels, (NEGATIVE, POSITIVE)).all():
            raise DataError("labels must be binary (0 or 1)")
        if self.synthetic is None:
            self.synthetic = np.zeros(self.labels.shape[0], dtype=bool)
        else:
            self.synthetic = np.asarray(self.synthetic, dtype=bool)

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> Dict[int, int]:
        return {
            NEGATIVE: int(np.sum(self.labels == NEGATIVE)),
            POSITIVE: int(np.sum(self.labels == POSITIVE)),
        }

    def subset(self, indices: Sequence[int]) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return replace(
            self,
            features=self.features[indices],
            labels=self.labels[indices],
            synthetic=self.synthetic[indices],
        )

    def with_features(self, features: np.ndarray, **changes) -> "Dataset":
        return replace(self, features=features, **changes)

    def checksum(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.features).tobytes())
        digest.update(np.ascontiguousarray(self.labels).tobytes())
        return digest.hexdigest()

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.features, columns=self.feature_names)
        frame["label"] = self.labels
        return frame

    def to_csv(self, path_or_buf) -> None:
        self.to_frame().to_csv(path_or_buf, index=False, float_format="%.10g")
