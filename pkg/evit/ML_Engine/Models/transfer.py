"""
Candidate transfer algorithms.

Every algorithm maps (source features, target features) to a pair of
feature matrices living in a shared space, on which a downstream classifier
is trained (source) and applied (target).

Algorithms are registered in `ALGORITHMS` so further families (JDA, BDA,
...) can be slotted in without touching the callers.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist, pdist

from evit.errors import NumericalError, PreconditionError, ValidationError
from evit.Feature_Layer.domain import Domain
from evit.Simulation.structures import fix_signs

STD_FLOOR = 1e-12


class AlgorithmId(str, Enum):
    NULL = "NULL"
    STAT_ALIGN = "STAT_ALIGN"
    TCA = "TCA"


# NULL-first order, used for deterministic tie-breaking
ALGORITHM_ORDER: Dict[AlgorithmId, int] = {a: i for i, a in enumerate(AlgorithmId)}


@dataclass(frozen=True)
class AlgorithmParams:
    """
    Hyper-parameters of the transfer algorithms and downstream classifier.

    Attributes
    ----------
    tca_components : int
        Dimension m of the TCA latent space.
    tca_mu : float
        Regulariser on the TCA projection.
    tca_kernel_bandwidth : float or "median"
        RBF bandwidth; "median" uses the median pairwise distance.
    knn_k : int
        Neighbours used by the kNN classifier (odd).
    """

    tca_components: int = 2
    tca_mu: float = 1.0
    tca_kernel_bandwidth: Union[float, str] = "median"
    knn_k: int = 1

    def __post_init__(self):
        if self.tca_components < 1:
            raise ValidationError(f"tca_components must be positive, got {self.tca_components}")
        if self.tca_mu <= 0:
            raise ValidationError(f"tca_mu must be positive, got {self.tca_mu}")
        bw = self.tca_kernel_bandwidth
        if isinstance(bw, str):
            if bw != "median":
                raise ValidationError(f"tca_kernel_bandwidth must be positive or 'median', got {bw!r}")
        elif bw <= 0:
            raise ValidationError(f"tca_kernel_bandwidth must be positive, got {bw}")
        if self.knn_k < 1 or self.knn_k % 2 == 0:
            raise ValidationError(f"knn_k must be a positive odd integer, got {self.knn_k}")

    def to_dict(self) -> dict:
        return {
            "tca_components": self.tca_components,
            "tca_mu": self.tca_mu,
            "tca_kernel_bandwidth": self.tca_kernel_bandwidth,
            "knn_k": self.knn_k,
        }


# ---------------------------------------------------------------------------
# Statistic alignment
# ---------------------------------------------------------------------------

def statistic_align(X: np.ndarray) -> np.ndarray:
    """
    Standardise each column to zero mean and unit (population) variance.

    Columns whose std is below 1e-12 are centred only.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValidationError("statistic_align needs a 2-D matrix with at least 2 rows")

    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std < STD_FLOOR, 1.0, std)
    return (X - mean) / scale


# ---------------------------------------------------------------------------
# Transfer component analysis
# ---------------------------------------------------------------------------

def median_bandwidth(X: np.ndarray) -> float:
    d = pdist(X)
    d = d[d > 0]
    return float(np.median(d)) if d.size else 1.0


def rbf_kernel(X: np.ndarray, Y: np.ndarray, bandwidth: float) -> np.ndarray:
    return np.exp(-cdist(X, Y, "sqeuclidean") / (2.0 * bandwidth ** 2))


def mmd_coefficients(ns: int, nt: int) -> np.ndarray:
    """L with blocks 1/ns^2, 1/nt^2 and -1/(ns nt)."""
    e = np.concatenate([np.full(ns, 1.0 / ns), np.full(nt, -1.0 / nt)])
    return np.outer(e, e)


def tca(Xs: np.ndarray, Xt: np.ndarray, params: AlgorithmParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Embed source and target in a shared m-dimensional latent space.

    Solves (K L K + mu I)^-1 K H K W = W Lambda as the symmetric-definite
    problem K H K w = lambda (K L K + mu I) w, keeps the m leading
    eigenvectors and returns Z = K W split back into source/target rows.
    """
    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    if Xs.ndim != 2 or Xt.ndim != 2 or Xs.shape[1] != Xt.shape[1]:
        raise ValidationError(
            f"TCA needs matrices with equal column counts, got {Xs.shape} and {Xt.shape}"
        )

    ns, nt = Xs.shape[0], Xt.shape[0]
    n = ns + nt
    m = params.tca_components
    if m > n - 1:
        raise ValidationError(
            f"tca_components={m} must not exceed the combined sample count minus one ({n - 1})"
        )

    X = np.vstack([Xs, Xt])
    bandwidth = (
        median_bandwidth(X)
        if params.tca_kernel_bandwidth == "median"
        else float(params.tca_kernel_bandwidth)
    )

    K = rbf_kernel(X, X, bandwidth)
    L = mmd_coefficients(ns, nt)
    H = np.eye(n) - np.full((n, n), 1.0 / n)

    A = K @ L @ K + params.tca_mu * np.eye(n)
    B = K @ H @ K
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)

    try:
        eigvals, eigvecs = scipy.linalg.eigh(B, A, subset_by_index=[n - m, n - 1])
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(
            f"TCA eigenproblem failed (n={n}, mu={params.tca_mu}, bandwidth={bandwidth:.4g}): {exc}"
        ) from exc

    # Descending eigenvalue order, deterministic signs
    W = fix_signs(eigvecs[:, ::-1])
    Z = K @ W
    return Z[:ns], Z[ns:]


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

TransferFn = Callable[[np.ndarray, np.ndarray, AlgorithmParams], Tuple[np.ndarray, np.ndarray]]


def _identity(Xs, Xt, params):
    return Xs, Xt


def _align_each(Xs, Xt, params):
    return statistic_align(Xs), statistic_align(Xt)


ALGORITHMS: Dict[AlgorithmId, TransferFn] = {
    AlgorithmId.NULL: _identity,
    AlgorithmId.STAT_ALIGN: _align_each,
    AlgorithmId.TCA: tca,
}


def apply_transfer(
    algorithm: AlgorithmId | str,
    source: Domain,
    target_features: np.ndarray,
    params: AlgorithmParams,
    seed: int = 0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Run one transfer algorithm.

    Returns
    -------
    (Zs, ys, Zt)
        Adapted source features, source labels, adapted target features.
        NULL returns the input arrays themselves. `seed` is accepted for
        stochastic algorithms; the registered ones are deterministic.
    """
    algorithm = AlgorithmId(algorithm)
    if not source.is_labelled:
        raise PreconditionError(f"Source domain {source.id} has no labels")

    Xt = np.asarray(target_features)
    if Xt.ndim != 2 or Xt.shape[1] != source.n_features:
        raise ValidationError(
            f"Target features with shape {Xt.shape} do not match "
            f"{source.n_features} source features"
        )

    Zs, Zt = ALGORITHMS[algorithm](source.features, Xt, params)
    return Zs, source.labels, Zt
