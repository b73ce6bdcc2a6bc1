"""
Oracle evaluation of transfer recommendations.

In simulation the target's true labels are known, so every candidate
strategy can be executed end-to-end and scored: this measures the realised
quality and utility of each strategy, the regret of the recommendation
against the oracle-best strategy, and whether negative transfer was avoided.

The oracle runs exactly the transfer/classify path used to generate the
training records, with the same seeds.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from evit.Decision_Engine.Engine import Recommendation
from evit.Decision_Engine.strategies import NULL_STRATEGY, TransferStrategy
from evit.Decision_Engine.utility import UtilitySpec, utility_of_quality
from evit.errors import ValidationError
from evit.Feature_Layer.domain import Population, merge_sources
from evit.ML_Engine.Models.evaluate import QualityMeasures, evaluate_quality
from evit.ML_Engine.Models.train import predict_majority, train_classify
from evit.ML_Engine.Models.transfer import AlgorithmParams, apply_transfer


@dataclass(frozen=True)
class OracleResult:
    strategy: TransferStrategy
    realised: QualityMeasures
    realised_utility: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.to_dict(),
            "label": self.strategy.label,
            "accuracy": self.realised.accuracy,
            "type1": self.realised.type1_rate,
            "type2": self.realised.type2_rate,
            "realised_utility": self.realised_utility,
        }


@dataclass(frozen=True)
class RegretReport:
    """
    Attributes
    ----------
    regret : float
        Realised utility of the oracle-best strategy minus that of the
        recommended one (never negative).
    avoided_negative_transfer : bool
        The recommended strategy realised at least the utility of T_0.
    random_source_regret : float
        Expected regret of picking a non-null strategy uniformly at random.
    """

    recommended: TransferStrategy
    oracle_best: TransferStrategy
    regret: float
    avoided_negative_transfer: bool
    recommended_utility: float
    oracle_utility: float
    null_utility: float
    random_source_regret: float

    def to_dict(self) -> dict:
        return {
            "recommended": self.recommended.to_dict(),
            "recommended_label": self.recommended.label,
            "oracle_best": self.oracle_best.to_dict(),
            "oracle_best_label": self.oracle_best.label,
            "regret": self.regret,
            "avoided_negative_transfer": self.avoided_negative_transfer,
            "recommended_utility": self.recommended_utility,
            "oracle_utility": self.oracle_utility,
            "null_utility": self.null_utility,
            "random_source_regret": self.random_source_regret,
        }


def oracle_quality(
    strategy: TransferStrategy,
    population: Population,
    params: AlgorithmParams,
    seed: int,
    spec: Optional[UtilitySpec] = None,
) -> OracleResult:
    """
    Execute a strategy on the target and score it against the hidden labels.

    T_0 is scored with the population-majority baseline.
    """
    y_true = population.require_oracle()
    target = population.target_domain

    if strategy.is_null:
        all_labels = np.concatenate([d.labels for d in population.source_domains])
        y_pred = predict_majority(all_labels, target.n_samples)
    else:
        merged = merge_sources(population.sources(strategy.source_ids))
        Zs, ys, Zt = apply_transfer(strategy.algorithm, merged, target.features, params, seed)
        y_pred = train_classify(Zs, ys, Zt, params)

    realised = evaluate_quality(y_pred, y_true)
    utility = utility_of_quality(realised, spec) if spec is not None else None
    return OracleResult(strategy=strategy, realised=realised, realised_utility=utility)


def oracle_results_for(
    strategies: Sequence[TransferStrategy],
    population: Population,
    params: AlgorithmParams,
    seed: int,
    spec: Optional[UtilitySpec] = None,
    jobs: int = 1,
) -> List[OracleResult]:
    results = Parallel(n_jobs=jobs)(
        delayed(oracle_quality)(s, population, params, seed, spec) for s in strategies
    )
    return list(results)


def _best(strategies: Sequence[TransferStrategy], utilities: Dict[TransferStrategy, float]):
    return min(strategies, key=lambda s: (-utilities[s], *s.tie_break_key))


def regret_report(
    recommendation: Recommendation,
    oracle_results: Sequence[OracleResult],
    spec: UtilitySpec,
) -> RegretReport:
    """
    Compare the recommendation with the oracle-best strategy.

    Raises
    ------
    ValidationError
        If a ranked strategy (or T_0) has no oracle result.
    """
    by_strategy = {r.strategy: r for r in oracle_results}
    ranked = [r.strategy for r in recommendation.ranked]
    missing = [s.label for s in [*ranked, NULL_STRATEGY] if s not in by_strategy]
    if missing:
        raise ValidationError(f"Missing oracle results for: {', '.join(sorted(set(missing)))}")

    utilities = {s: utility_of_quality(by_strategy[s].realised, spec) for s in ranked}
    utilities.setdefault(NULL_STRATEGY, utility_of_quality(by_strategy[NULL_STRATEGY].realised, spec))

    recommended = recommendation.best
    oracle_best = _best(ranked, utilities)
    u_rec = utilities[recommended]
    u_best = utilities[oracle_best]

    transfers = [s for s in ranked if not s.is_null]
    random_regret = (
        float(np.mean([u_best - utilities[s] for s in transfers])) if transfers else 0.0
    )

    return RegretReport(
        recommended=recommended,
        oracle_best=oracle_best,
        regret=u_best - u_rec,
        avoided_negative_transfer=u_rec >= utilities[NULL_STRATEGY],
        recommended_utility=u_rec,
        oracle_utility=u_best,
        null_utility=utilities[NULL_STRATEGY],
        random_source_regret=random_regret,
    )
