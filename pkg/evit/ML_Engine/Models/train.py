import numpy as np
from scipy.spatial.distance import cdist

from evit.errors import PreconditionError, ValidationError
from evit.ML_Engine.Models.transfer import AlgorithmParams


def train_classify(
    source_features: np.ndarray,
    source_labels: np.ndarray,
    target_features: np.ndarray,
    params: AlgorithmParams,
) -> np.ndarray:
    """
    k-nearest-neighbour classification of target samples.

    Neighbours are ranked by Euclidean distance, equal distances by the
    smaller class label; the vote goes to the most frequent class with ties
    broken towards the smaller class index.

    Args:
        source_features (np.ndarray): n_s x d training features
        source_labels (np.ndarray): n_s class labels
        target_features (np.ndarray): n_t x d features to classify
        params (AlgorithmParams): uses `knn_k`

    Returns:
        np.ndarray of predicted class labels
    """
    Xs = np.asarray(source_features, dtype=float)
    ys = np.asarray(source_labels, dtype=np.int64)
    Xt = np.asarray(target_features, dtype=float)

    if Xs.shape[0] == 0:
        raise PreconditionError("Cannot train a classifier on an empty source")
    if ys.shape[0] != Xs.shape[0]:
        raise ValidationError(f"{ys.shape[0]} labels for {Xs.shape[0]} source samples")
    if Xt.ndim != 2 or Xt.shape[1] != Xs.shape[1]:
        raise ValidationError(
            f"Target has {Xt.shape[-1]} features, source has {Xs.shape[1]}"
        )

    k = min(params.knn_k, Xs.shape[0])
    n_classes = int(ys.max()) + 1

    dist = cdist(Xt, Xs)

    # lexsort: last key is primary (distance), then label
    label_key = np.broadcast_to(ys, dist.shape)
    order = np.lexsort((label_key, dist), axis=1)[:, :k]
    neighbour_labels = ys[order]

    votes = np.zeros((Xt.shape[0], n_classes), dtype=np.int64)
    for j in range(k):
        np.add.at(votes, (np.arange(Xt.shape[0]), neighbour_labels[:, j]), 1)

    # argmax returns the first maximum, i.e. the smallest class on ties
    return votes.argmax(axis=1)


def majority_class(labels: np.ndarray) -> int:
    """Most frequent label; ties go to the smallest class."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise PreconditionError("Cannot take the majority class of an empty label set")
    return int(np.bincount(labels).argmax())


def predict_majority(population_labels: np.ndarray, n_samples: int) -> np.ndarray:
    """Baseline predictor: every sample gets the population-majority class."""
    return np.full(n_samples, majority_class(population_labels), dtype=np.int64)
