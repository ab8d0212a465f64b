from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from sklearn.model_selection import KFold, StratifiedKFold, train_test_split

from app import logger
from app.data.dataset import Dataset
from app.exceptions import ConfigurationError
from app.optim.core import RngStream

Split = Tuple[np.ndarray, np.ndarray]


class SplitKind(str, Enum):
    holdout = "holdout"
    kfold = "kfold"


class SplitPlan(BaseModel):
    kind: SplitKind = SplitKind.holdout
    train_fraction: float = Field(0.7, gt=0, lt=1)
    k: int = Field(10, ge=2)
    stratified: bool = True

    model_config = ConfigDict(frozen=True)

    @classmethod
    def holdout(cls, train_fraction: float = 0.7) -> "SplitPlan":
        return cls(kind=SplitKind.holdout, train_fraction=train_fraction)

    @classmethod
    def kfold(cls, k: int = 10) -> "SplitPlan":
        return cls(kind=SplitKind.kfold, k=k)


def _smallest_class(ds: Dataset) -> int:
    return min(ds.class_counts().values())


def make_splits(ds: Dataset, plan: SplitPlan, rng: Optional[RngStream] = None) -> List[Split]:
    """
    Returns (train indices, test indices) pairs, sorted within each pair.

    Falls back to an unstratified partition when a class is too small to
    be spread over the folds.
    """
    rng = rng or RngStream(0)
    indices = np.arange(len(ds))
    random_state = rng.random_state()

    if plan.kind == SplitKind.kfold:
        if len(ds) < plan.k:
            raise ConfigurationError(f"{plan.k}-fold split needs at least {plan.k} rows, found {len(ds)}")

        stratify = plan.stratified and _smallest_class(ds) >= plan.k
        if plan.stratified and not stratify:
            logger.warning(f"A class has fewer than {plan.k} rows, folds are not stratified")

        splitter = (StratifiedKFold if stratify else KFold)(
            n_splits=plan.k, shuffle=True, random_state=random_state
        )
        return [(np.sort(train), np.sort(test)) for train, test in splitter.split(ds.features, ds.labels)]

    stratify = plan.stratified and _smallest_class(ds) >= 2
    if plan.stratified and not stratify:
        logger.warning("A class has fewer than 2 rows, holdout split is not stratified")

    train, test = train_test_split(
        indices,
        train_size=plan.train_fraction,
        stratify=ds.labels if stratify else None,
        random_state=random_state,
    )
    return [(np.sort(train), np.sort(test))]
