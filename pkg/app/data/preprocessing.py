import math
from dataclasses import dataclass, replace

import numpy as np
from imblearn.over_sampling import SMOTE
from sklearn.decomposition import PCA
from sklearn.preprocessing import MinMaxScaler

from app import logger
from app.data.dataset import NEGATIVE, POSITIVE, Dataset, ScalingState
from app.exceptions import ConfigurationError, DimensionError
from app.optim.core import RngStream


def fit_normalizer(train: Dataset) -> MinMaxScaler:
    # constant columns get a unit scale in MinMaxScaler, so they map to 0
    return MinMaxScaler(feature_range=(0, 1), clip=True).fit(train.features)


def apply_normalizer(ds: Dataset, scaler: MinMaxScaler) -> Dataset:
    if ds.n_features != scaler.n_features_in_:
        raise DimensionError("dataset width does not match the fitted scaler",
                             scaler.n_features_in_, ds.n_features)
    return ds.with_features(scaler.transform(ds.features), scaling_state=ScalingState.normalized)


def normalize(ds: Dataset) -> Dataset:
    """Per-column min-max scaling of `ds` onto [0, 1] using its own ranges."""
    if ds.scaling_state == ScalingState.normalized:
        logger.debug(f"{ds.provenance} dataset is already normalized")
    return apply_normalizer(ds, fit_normalizer(ds))


def smote(ds: Dataset, target_ratio: float = 2.0, k_neighbors: int = 5, rng: RngStream = None) -> Dataset:
    """
    Appends synthetic minority rows until majority / minority <= target_ratio.

    Original rows keep their order and come first; appended rows are flagged
    in `Dataset.synthetic`.
    """
    if target_ratio < 1:
        raise ConfigurationError("target_ratio must be at least 1")

    counts = ds.class_counts()
    minority = POSITIVE if counts[POSITIVE] <= counts[NEGATIVE] else NEGATIVE
    majority = NEGATIVE if minority == POSITIVE else POSITIVE
    n_min, n_maj = counts[minority], counts[majority]

    if n_min <= k_neighbors:
        raise ConfigurationError(
            f"SMOTE needs more than {k_neighbors} minority rows, found {n_min}")

    wanted = math.ceil(n_maj / target_ratio - 1e-9)
    if n_min >= wanted:
        return ds

    sampler = SMOTE(
        sampling_strategy={minority: wanted},
        k_neighbors=k_neighbors,
        random_state=(rng or RngStream(0)).random_state(),
    )
    features, labels = sampler.fit_resample(ds.features, ds.labels)

    added = features.shape[0] - len(ds)
    logger.info(f"SMOTE added {added} synthetic rows ({n_maj} vs {n_min} -> {n_maj} vs {wanted})")

    return replace(
        ds,
        features=features,
        labels=labels,
        synthetic=np.concatenate([ds.synthetic, np.ones(added, dtype=bool)]),
    )


@dataclass
class PcaModel:
    means: np.ndarray
    # d x k, orthonormal columns
    components: np.ndarray
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[1]


def fit_pca(train: Dataset, k: int) -> PcaModel:
    if k < 1 or k > train.n_features:
        raise ConfigurationError(f"PCA needs 1 <= k <= {train.n_features}, got {k}")
    if k > len(train):
        raise ConfigurationError(f"PCA needs at least {k} training rows, found {len(train)}")

    pca = PCA(n_components=k, svd_solver="full").fit(train.features)
    model = PcaModel(
        means=pca.mean_.copy(),
        components=pca.components_.T.copy(),
        explained_variance=pca.explained_variance_.copy(),
        explained_variance_ratio=pca.explained_variance_ratio_.copy(),
    )
    logger.debug(f"PCA kept {k} of {train.n_features} components, "
                 f"explained variance {model.explained_variance_ratio.sum():.4f}")
    return model


def transform(ds: Dataset, model: PcaModel) -> Dataset:
    if ds.n_features != model.means.shape[0]:
        raise DimensionError("dataset width does not match the PCA model", model.means.shape[0], ds.n_features)

    projected = (ds.features - model.means) @ model.components
    return ds.with_features(projected, feature_names=[f"pc{i + 1}" for i in range(model.n_components)])


def reconstruct(projected: np.ndarray, model: PcaModel) -> np.ndarray:
    return projected @ model.components.T + model.means
