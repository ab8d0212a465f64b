from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.data.dataset import Dataset
from app.data.preprocessing import (PcaModel, apply_normalizer, fit_normalizer,
                                    fit_pca, smote, transform)
from app.models.experiment import ExperimentConfig
from app.optim.core import RngStream


@dataclass
class PreparedFold:
    train: Dataset
    test: Dataset
    # raw row indices that took part in fitting the scaler or PCA
    fit_rows: np.ndarray
    synthetic_rows: int = 0
    pca: Optional[PcaModel] = None


def prepare_fold(
    raw: Dataset,
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    cfg: ExperimentConfig,
    rng: RngStream,
) -> PreparedFold:
    """
    normalize -> SMOTE (training rows only) -> PCA.

    Every fit uses the training rows, unless `paper_compat` asks for the
    scaler and PCA to see the whole dataset. SMOTE never touches test rows.
    """
    fit_rows = np.arange(len(raw)) if cfg.paper_compat else np.asarray(train_idx)

    scaler = fit_normalizer(raw.subset(fit_rows))
    train = apply_normalizer(raw.subset(train_idx), scaler)
    test = apply_normalizer(raw.subset(test_idx), scaler)

    synthetic_rows = 0
    if cfg.use_smote:
        oversampled = smote(train, cfg.smote_ratio, cfg.smote_k, rng)
        synthetic_rows = len(oversampled) - len(train)
        train = oversampled

    model = None
    if cfg.pca:
        if cfg.paper_compat:
            model = fit_pca(apply_normalizer(raw, scaler), cfg.n_components)
        else:
            model = fit_pca(train, cfg.n_components)
        train = transform(train, model)
        test = transform(test, model)

    return PreparedFold(train=train, test=test, fit_rows=fit_rows,
                        synthetic_rows=synthetic_rows, pca=model)
