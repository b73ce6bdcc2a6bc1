"""
Utility functions for the transfer decision.

U(Q) values prediction quality in terms of the downstream health-management
decision: false positives trigger unnecessary inspections, false negatives
risk failures. U(T) is the (negative) cost of carrying out a strategy.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Mapping

import numpy as np

from evit.Decision_Engine.strategies import TransferStrategy
from evit.errors import ConfigError, ValidationError
from evit.ML_Engine.Models.evaluate import QualityMeasures
from evit.ML_Engine.Models.quality_model import QualityDistributions
from evit.ML_Engine.Models.transfer import AlgorithmId


@dataclass(frozen=True)
class UtilitySpec:
    """
    Attributes
    ----------
    prior_damage : float
        Prior probability pi_d that the target is damaged.
    cost_inspection : float
        Cost of an unnecessary inspection (type-I error).
    cost_failure : float
        Cost of a missed damage leading to failure (type-II error).
    accuracy_weight : float
        Utility per unit of classification accuracy.
    cost_per_source : float
        Cost of every source domain used by a strategy.
    cost_per_algorithm : dict
        Fixed cost of running each algorithm; NULL must cost nothing.
    n_mc : int
        Monte Carlo sample count for expected utilities.
    utility_offset : float
        Constant added to U(Q); cancels out of EVIT.
    """

    prior_damage: float = 0.01
    cost_inspection: float = 1000.0
    cost_failure: float = 1e6
    accuracy_weight: float = 0.0
    cost_per_source: float = 0.0
    cost_per_algorithm: Mapping[AlgorithmId, float] = field(default_factory=dict)
    n_mc: int = 1000
    utility_offset: float = 0.0

    def __post_init__(self):
        costs = {AlgorithmId(a): float(c) for a, c in dict(self.cost_per_algorithm).items()}
        object.__setattr__(self, "cost_per_algorithm", costs)

        if not 0.0 <= self.prior_damage <= 1.0:
            raise ConfigError(f"prior_damage must lie in [0, 1], got {self.prior_damage}")
        for name in ("cost_inspection", "cost_failure", "cost_per_source"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative, got {getattr(self, name)}")
        if any(c < 0 for c in costs.values()):
            raise ConfigError("Algorithm costs must be non-negative")
        if costs.get(AlgorithmId.NULL, 0.0) != 0.0:
            raise ConfigError("The NULL algorithm must have zero cost so that U(T_0) = 0")
        if self.n_mc < 1:
            raise ConfigError(f"n_mc must be positive, got {self.n_mc}")

    def scaled(self, a: float) -> "UtilitySpec":
        """Every cost/weight field multiplied by `a`."""
        return replace(
            self,
            cost_inspection=self.cost_inspection * a,
            cost_failure=self.cost_failure * a,
            accuracy_weight=self.accuracy_weight * a,
            cost_per_source=self.cost_per_source * a,
            cost_per_algorithm={k: v * a for k, v in self.cost_per_algorithm.items()},
            utility_offset=self.utility_offset * a,
        )

    def to_dict(self) -> dict:
        return {
            "prior_damage": self.prior_damage,
            "cost_inspection": self.cost_inspection,
            "cost_failure": self.cost_failure,
            "accuracy_weight": self.accuracy_weight,
            "cost_per_source": self.cost_per_source,
            "cost_per_algorithm": {k.value: v for k, v in self.cost_per_algorithm.items()},
            "n_mc": self.n_mc,
            "utility_offset": self.utility_offset,
        }


def _utility(accuracy, type1, type2, spec: UtilitySpec):
    pi = spec.prior_damage
    return (
        spec.accuracy_weight * accuracy
        - (1.0 - pi) * type1 * spec.cost_inspection
        - pi * type2 * spec.cost_failure
        + spec.utility_offset
    )


def utility_of_quality(q: QualityMeasures, spec: UtilitySpec) -> float:
    """U(Q) = w*acc - (1 - pi)*type1*C_ins - pi*type2*C_fail (+ offset)."""
    return float(_utility(q.accuracy, q.type1_rate, q.type2_rate, spec))


def expected_utility(qdists: QualityDistributions, spec: UtilitySpec) -> float:
    """Monte Carlo mean of U(Q) over paired component samples."""
    acc = qdists["accuracy"].samples
    t1 = qdists["type1"].samples
    t2 = qdists["type2"].samples
    if not acc.shape == t1.shape == t2.shape:
        raise ValidationError("Quality component samples must have equal lengths")
    return float(np.mean(_utility(acc, t1, t2, spec)))


def transfer_cost(strategy: TransferStrategy, spec: UtilitySpec) -> float:
    """U(T) = -(algorithm cost + per-source cost * |sources|); U(T_0) = 0."""
    if strategy.is_null:
        return 0.0
    try:
        algorithm_cost = spec.cost_per_algorithm[strategy.algorithm]
    except KeyError:
        raise ConfigError(
            f"No cost configured for algorithm {strategy.algorithm.value}"
        ) from None
    return -(algorithm_cost + spec.cost_per_source * strategy.n_sources)


def utility_spec_from_dict(raw: Dict) -> UtilitySpec:
    known = set(UtilitySpec.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"Unknown utility fields: {sorted(unknown)}")
    try:
        return UtilitySpec(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Invalid utility specification: {exc}") from exc
