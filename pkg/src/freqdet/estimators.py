"""scikit-learn style wrappers around the extraction pipeline.

These are thin adapters so the pipeline composes with sklearn's
Pipeline/clone machinery; the underlying functions remain the primary
API.  Only the pieces with a natural fit/transform/predict shape are
wrapped — a full JPEG decoder does not benefit from estimator dress.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .frontend import build_desk_network, forward
from .tensor import compute_stats, extract_tensor, normalize


class DctTensorExtractor(BaseEstimator, TransformerMixin):
    """Stateless transformer: JPEG bytes -> detection input tensor."""

    def __init__(self, resample_mode="replicate"):
        self.resample_mode = resample_mode

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return [extract_tensor(data, resample_mode=self.resample_mode)
                for data in X]


class ChannelNormalizer(BaseEstimator, TransformerMixin):
    """Per-channel standardization fit over a corpus of tensors."""

    def fit(self, X, y=None):
        stats = compute_stats(X)
        self.mean_ = stats.mean
        self.std_ = stats.std
        self.count_ = stats.count
        self.stats_ = stats
        return self

    def transform(self, X):
        if not hasattr(self, "stats_"):
            raise ValueError("ChannelNormalizer must be fitted first")
        return [normalize(t, self.stats_) for t in X]


class FrequencyDetector(BaseEstimator):
    """Desk-scale detector over extracted tensors.

    predict(X) maps each tensor to a list of Detection records.  The
    network is built deterministically from the constructor seed.
    """

    def __init__(self, num_classes=3, input_size=128, variant="frequency",
                 seed=0, conf_threshold=0.01, nms_iou=0.45, top_k=200):
        self.num_classes = num_classes
        self.input_size = input_size
        self.variant = variant
        self.seed = seed
        self.conf_threshold = conf_threshold
        self.nms_iou = nms_iou
        self.top_k = top_k

    def fit(self, X=None, y=None):
        self.network_ = build_desk_network(
            num_classes=self.num_classes, input_size=self.input_size,
            variant=self.variant, seed=self.seed)
        return self

    def predict(self, X):
        if not hasattr(self, "network_"):
            self.fit()
        return [forward(np.asarray(x), self.network_,
                        conf_threshold=self.conf_threshold,
                        nms_iou=self.nms_iou, top_k=self.top_k)
                for x in X]
