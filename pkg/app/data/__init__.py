from .dataset import Dataset, DatasetName, ScalingState  # noqa
from .loader import LAYOUTS, default_path, load_wbcd, read_wbcd  # noqa
from .preprocessing import (PcaModel, apply_normalizer, fit_normalizer,  # noqa
                            fit_pca, normalize, smote, transform)
from .splits import SplitPlan, make_splits  # noqa
