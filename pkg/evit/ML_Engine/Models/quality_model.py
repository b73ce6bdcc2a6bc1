"""
Probabilistic meta-models P(Q | S, T): how post-transfer quality depends on
structural similarity, one model per transfer algorithm.

Each quality component (accuracy, type-I rate, type-II rate) is regressed
independently. Values are clamped to [1e-3, 1 - 1e-3] and mapped to logit
space, where a Gaussian-process regressor is fitted; predictive
distributions are pushed back through the inverse logit by Monte Carlo so
every sample lies strictly inside (0, 1).
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Sequence, Tuple

import numpy as np
from scipy.special import expit, logit
from sklearn.exceptions import ConvergenceWarning
from sklearn.gaussian_process import GaussianProcessRegressor
from sklearn.gaussian_process.kernels import RBF, ConstantKernel, WhiteKernel

from evit.errors import FittingError, ValidationError
from evit.ML_Engine.features.similarity import SimilarityVector
from evit.ML_Engine.Models.evaluate import QUALITY_COMPONENTS
from evit.ML_Engine.Models.transfer import AlgorithmId

if TYPE_CHECKING:
    from evit.ML_Engine.experiments.training_records import TrainingRecord

LOGGER = logging.getLogger(__name__)

CLAMP = 1e-3
NOISE_FLOOR = 1e-6
SAMPLE_EPS = 1e-12
N_RESTARTS = 4
MIN_RECORDS = 3
SUMMARY_NAMES = ("mean", "min", "max")


def clamp_quality(q: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(q, dtype=float), CLAMP, 1.0 - CLAMP)


def to_latent(q: np.ndarray) -> np.ndarray:
    return logit(clamp_quality(q))


def from_latent(z: np.ndarray) -> np.ndarray:
    return expit(z)


def make_kernel():
    return (
        ConstantKernel(1.0, constant_value_bounds=(1e-3, 1e3))
        * RBF(length_scale=0.3, length_scale_bounds=(1e-2, 1e2))
        + WhiteKernel(noise_level=1e-2, noise_level_bounds=(NOISE_FLOOR, 1e1))
    )


def component_normals(seed: int, component_index: int, n_mc: int) -> np.ndarray:
    """
    Standard normals for one quality component.

    The stream depends only on (seed, component), so every strategy
    evaluated with the same seed sees the same draws.
    """
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, component_index])
    return rng.standard_normal(n_mc)


@dataclass(frozen=True, eq=False)
class QualityDistribution:
    component: str
    samples: np.ndarray
    mean: float
    variance: float

    @classmethod
    def from_samples(cls, component: str, samples) -> "QualityDistribution":
        samples = np.array(samples, dtype=float, copy=True)
        if samples.ndim != 1 or samples.size == 0:
            raise ValidationError(f"{component}: need a non-empty 1-D sample vector")
        if samples.min() < 0.0 or samples.max() > 1.0:
            raise ValidationError(f"{component}: quality samples must lie in [0, 1]")
        samples.setflags(write=False)
        return cls(
            component=component,
            samples=samples,
            mean=float(samples.mean()),
            variance=float(samples.var()),
        )

    def to_dict(self) -> dict:
        return {"component": self.component, "samples": self.samples.tolist()}

    @classmethod
    def from_dict(cls, raw: dict) -> "QualityDistribution":
        return cls.from_samples(raw["component"], raw["samples"])


QualityDistributions = Dict[str, QualityDistribution]


@dataclass(eq=False)
class ComponentRegressor:
    """One logit-space GP for a single quality component."""

    X: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    gp: GaussianProcessRegressor = field(repr=False)

    @property
    def noise_variance(self) -> float:
        return float(self.gp.kernel_.k2.noise_level)

    def predict(self, x: np.ndarray) -> Tuple[float, float]:
        mu, std = self.gp.predict(x, return_std=True)
        return float(mu[0]), float(std[0])

    def to_dict(self) -> dict:
        return {
            "X": self.X.tolist(),
            "y": self.y.tolist(),
            "kernel_theta": self.theta.tolist(),
            "kernel": str(self.gp.kernel_),
            "noise_variance": self.noise_variance,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ComponentRegressor":
        X = np.asarray(raw["X"], dtype=float)
        y = np.asarray(raw["y"], dtype=float)
        theta = np.asarray(raw["kernel_theta"], dtype=float)
        gp = GaussianProcessRegressor(
            kernel=make_kernel().clone_with_theta(theta),
            optimizer=None,
            normalize_y=True,
        ).fit(X, y)
        return cls(X=X, y=y, theta=theta, gp=gp)


@dataclass(eq=False)
class QualityModel:
    algorithm: AlgorithmId
    input_names: Tuple[str, ...]
    components: Dict[str, ComponentRegressor]

    def inputs(self, similarity: SimilarityVector) -> np.ndarray:
        return np.asarray([similarity.inputs(self.input_names)], dtype=float)

    def predict_latent(self, similarity: SimilarityVector) -> Dict[str, Tuple[float, float]]:
        """Latent (logit-space) predictive mean and std per component."""
        x = self.inputs(similarity)
        return {name: reg.predict(x) for name, reg in self.components.items()}

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm.value,
            "input_names": list(self.input_names),
            "components": {n: r.to_dict() for n, r in self.components.items()},
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "QualityModel":
        return cls(
            algorithm=AlgorithmId(raw["algorithm"]),
            input_names=tuple(raw["input_names"]),
            components={
                n: ComponentRegressor.from_dict(r) for n, r in raw["components"].items()
            },
        )


# ---------------------------------------------------------------------------
# Fitting / prediction
# ---------------------------------------------------------------------------

def _fit_component(X: np.ndarray, values: np.ndarray, seed: int, name: str) -> ComponentRegressor:
    y = to_latent(values)
    gp = GaussianProcessRegressor(
        kernel=make_kernel(),
        normalize_y=True,
        n_restarts_optimizer=N_RESTARTS,
        random_state=int(seed) % 2**32,
    )
    try:
        with warnings.catch_warnings():
            # Constant targets drive hyper-parameters to their bounds; that is expected
            warnings.simplefilter("ignore", ConvergenceWarning)
            gp.fit(X, y)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise FittingError(f"Gaussian-process fit failed for {name}: {exc}") from exc
    return ComponentRegressor(X=X, y=y, theta=np.array(gp.kernel_.theta), gp=gp)


def fit_quality_model(
    records: Sequence["TrainingRecord"],
    algorithm: AlgorithmId | str,
    seed: int = 0,
    input_names: Sequence[str] = ("mean",),
) -> QualityModel:
    """
    Fit P(Q | S, algorithm) from pseudo-target training records.

    Only records of `algorithm` that carry a similarity vector are used.
    Records are put into a canonical order first, so the fit does not
    depend on the order they were generated in.

    Raises
    ------
    FittingError
        If fewer than three usable records exist.
    """
    algorithm = AlgorithmId(algorithm)
    input_names = tuple(input_names)
    unknown = [n for n in input_names if n not in SUMMARY_NAMES]
    if not input_names or unknown:
        raise ValidationError(f"Quality inputs must be drawn from {SUMMARY_NAMES}, got {input_names}")

    usable = sorted(
        (r for r in records if r.algorithm is algorithm and r.similarity is not None),
        key=lambda r: r.sort_key,
    )
    if len(usable) < MIN_RECORDS:
        raise FittingError(
            f"{algorithm.value}: {len(usable)} usable training records, "
            f"at least {MIN_RECORDS} are needed to fit a quality model"
        )

    X = np.asarray([r.similarity.inputs(input_names) for r in usable], dtype=float)
    components = {}
    for name in QUALITY_COMPONENTS:
        values = np.asarray([r.quality.component(name) for r in usable], dtype=float)
        components[name] = _fit_component(X, values, seed, f"{algorithm.value}/{name}")

    LOGGER.info(
        "Fitted quality model",
        extra={"stage": "fit", "algorithm": algorithm.value, "n_records": len(usable)},
    )
    return QualityModel(algorithm=algorithm, input_names=input_names, components=components)


def predict_quality(
    model: QualityModel,
    similarity: SimilarityVector,
    n_mc: int,
    seed: int,
) -> QualityDistributions:
    """
    Monte Carlo predictive distribution of every quality component.

    Latent Gaussian draws use `component_normals(seed, k, n_mc)`, shared by
    all strategies evaluated with the same seed.
    """
    if n_mc < 1:
        raise ValidationError(f"n_mc must be positive, got {n_mc}")

    latent = model.predict_latent(similarity)
    out = {}
    for k, name in enumerate(QUALITY_COMPONENTS):
        mu, std = latent[name]
        z = component_normals(seed, k, n_mc)
        samples = np.clip(from_latent(mu + std * z), SAMPLE_EPS, 1.0 - SAMPLE_EPS)
        out[name] = QualityDistribution.from_samples(name, samples)
    return out
