"""
Decision engine for information-transfer strategies.

For every candidate strategy T the engine predicts the distribution of
post-transfer quality from structural similarity, turns it into an expected
utility, and scores

    EVIT(T) = EU(Q | T) - EU(Q | T_0)
    objective(T) = EVIT(T) + U(T)

The recommended strategy is the argmax of the objective. Ties are broken
conservatively: fewer source domains first, then the NULL-first algorithm
order, then source ids. EVIT < 0 flags expected negative transfer.

Every strategy is evaluated with the same Monte Carlo seed (common random
numbers), so EVIT differences are not drowned in sampling noise.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence

import pandas as pd
from joblib import Parallel, delayed

from evit.Decision_Engine.strategies import (
    EnumerationConstraints,
    TransferStrategy,
    enumerate_strategies,
    non_null,
)
from evit.Decision_Engine.utility import UtilitySpec, expected_utility, transfer_cost
from evit.errors import PreconditionError, ValidationError
from evit.Feature_Layer.domain import Population, Representation
from evit.ML_Engine.features.similarity import Measure, similarity_features
from evit.ML_Engine.Models.quality_model import QualityDistributions, QualityModel, predict_quality
from evit.ML_Engine.Models.transfer import AlgorithmId

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankedStrategy:
    strategy: TransferStrategy
    evit: float
    expected_utility_quality: float
    transfer_cost: float
    objective: float
    negative_transfer_flag: bool
    similarity_mean: Optional[float] = None

    @property
    def sort_key(self) -> tuple:
        return (-self.objective, *self.strategy.tie_break_key)

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.to_dict(),
            "label": self.strategy.label,
            "evit": self.evit,
            "expected_utility_quality": self.expected_utility_quality,
            "transfer_cost": self.transfer_cost,
            "objective": self.objective,
            "negative_transfer_flag": self.negative_transfer_flag,
            "similarity_mean": self.similarity_mean,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "RankedStrategy":
        return cls(
            strategy=TransferStrategy.from_dict(raw["strategy"]),
            evit=float(raw["evit"]),
            expected_utility_quality=float(raw["expected_utility_quality"]),
            transfer_cost=float(raw["transfer_cost"]),
            objective=float(raw["objective"]),
            negative_transfer_flag=bool(raw["negative_transfer_flag"]),
            similarity_mean=raw.get("similarity_mean"),
        )


@dataclass(frozen=True)
class Recommendation:
    ranked: tuple

    def __post_init__(self):
        object.__setattr__(self, "ranked", tuple(sorted(self.ranked, key=lambda r: r.sort_key)))
        if not self.ranked:
            raise ValidationError("A recommendation needs at least one ranked strategy")

    @property
    def best(self) -> TransferStrategy:
        return self.ranked[0].strategy

    def entry(self, strategy: TransferStrategy) -> RankedStrategy:
        for r in self.ranked:
            if r.strategy == strategy:
                return r
        raise ValidationError(f"Strategy {strategy.label} is not part of the recommendation")

    def to_dict(self) -> dict:
        return {
            "best": self.best.to_dict(),
            "ranked": [r.to_dict() for r in self.ranked],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Recommendation":
        return cls(ranked=tuple(RankedStrategy.from_dict(r) for r in raw["ranked"]))


# ---------------------------------------------------------------------------
# EVIT
# ---------------------------------------------------------------------------

def evit(strategy: TransferStrategy, eu_strategy: float, eu_null: float) -> float:
    """EVIT(T) = EU(Q|T) - EU(Q|T_0); exactly 0 for the null strategy."""
    if strategy.is_null:
        return 0.0
    return eu_strategy - eu_null


def _evaluate(
    strategy: TransferStrategy,
    target: Representation,
    sources: Dict[str, Representation],
    models: Mapping[AlgorithmId, QualityModel],
    eu_null: float,
    spec: UtilitySpec,
    measure: Measure,
    n_modes: Optional[int],
    seed: int,
) -> RankedStrategy:
    if strategy.is_null:
        return RankedStrategy(
            strategy=strategy,
            evit=0.0,
            expected_utility_quality=eu_null,
            transfer_cost=0.0,
            objective=0.0,
            negative_transfer_flag=False,
        )

    similarity = similarity_features(
        target, [sources[i] for i in strategy.source_ids], measure, n_modes
    )
    qdists = predict_quality(models[strategy.algorithm], similarity, spec.n_mc, seed)
    eu = expected_utility(qdists, spec)
    value = evit(strategy, eu, eu_null)
    cost = transfer_cost(strategy, spec)

    return RankedStrategy(
        strategy=strategy,
        evit=value,
        expected_utility_quality=eu,
        transfer_cost=cost,
        objective=value + cost,
        negative_transfer_flag=value < 0,
        similarity_mean=similarity.mean,
    )


def rank_strategies(
    strategies: Sequence[TransferStrategy],
    population: Population,
    models: Mapping[AlgorithmId, QualityModel],
    null_dist: QualityDistributions,
    spec: UtilitySpec,
    measure: Measure | str,
    seed: int,
    n_modes: Optional[int] = None,
    jobs: int = 1,
) -> Recommendation:
    """Score a given list of strategies (see `recommend`)."""
    measure = Measure(measure)
    missing = [a.value for a in non_null([s.algorithm for s in strategies]) if a not in models]
    if missing:
        raise PreconditionError(f"No fitted quality model for algorithm(s): {', '.join(missing)}")

    eu_null = expected_utility(null_dist, spec)
    target = population.target_domain.representation
    sources = {d.id: d.representation for d in population.source_domains}

    ranked = Parallel(n_jobs=jobs)(
        delayed(_evaluate)(s, target, sources, models, eu_null, spec, measure, n_modes, seed)
        for s in strategies
    )
    return Recommendation(ranked=tuple(ranked))


def recommend(
    population: Population,
    models: Mapping[AlgorithmId, QualityModel],
    null_dist: QualityDistributions,
    spec: UtilitySpec,
    constraints: EnumerationConstraints,
    measure: Measure | str,
    seed: int,
    algorithms: Optional[Sequence[AlgorithmId]] = None,
    n_modes: Optional[int] = None,
    jobs: int = 1,
) -> Recommendation:
    """
    T* = argmax_T [EVIT(T) + U(T)] over the enumerated candidate strategies.

    Args:
        population: source domains and the unlabelled target
        models: fitted quality model per non-null algorithm
        null_dist: quality distribution of the null strategy
        spec: utilities and Monte Carlo sample count
        constraints: strategy enumeration mode
        measure: similarity measure the models were trained on
        seed: shared Monte Carlo seed for every strategy
        algorithms: candidate algorithms (default: those with a model)

    Returns:
        Recommendation with every strategy ranked by objective
    """
    if algorithms is None:
        algorithms = list(models)
    strategies = enumerate_strategies(population.source_ids, algorithms, constraints)

    recommendation = rank_strategies(
        strategies, population, models, null_dist, spec, measure, seed, n_modes, jobs
    )
    LOGGER.info(
        "Recommended %s",
        recommendation.best.label,
        extra={"stage": "recommend", "n_strategies": len(strategies)},
    )
    return recommendation


def render_table(recommendation: Recommendation) -> str:
    """Aligned plain-text table of the ranked strategies."""
    df = pd.DataFrame([
        {
            "rank": i + 1,
            "strategy": r.strategy.label,
            "n_sources": r.strategy.n_sources,
            "algorithm": r.strategy.algorithm.value,
            "similarity": r.similarity_mean,
            "EU(Q)": r.expected_utility_quality,
            "EVIT": r.evit,
            "U(T)": r.transfer_cost,
            "objective": r.objective,
            "negative_transfer": r.negative_transfer_flag,
        }
        for i, r in enumerate(recommendation.ranked)
    ])
    return df.to_string(index=False, float_format=lambda v: f"{v:.4f}", na_rep="-")
