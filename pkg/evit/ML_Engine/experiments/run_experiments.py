"""
In-memory end-to-end runs and multi-seed sweeps.

A run chains every stage of the pipeline (population, training records,
quality models, null baseline, recommendation, oracle evaluation) without
touching the file system; the sweep repeats it over master seeds and
appends one row per seed to a CSV.
"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from evit.Decision_Engine.Engine import Recommendation, recommend
from evit.errors import ConfigError
from evit.Feature_Layer.data_loader import append_table
from evit.Feature_Layer.domain import Domain, Population, hide_labels
from evit.Interface.schemas import RunConfig
from evit.ML_Engine.experiments.oracle import (
    OracleResult,
    RegretReport,
    oracle_results_for,
    regret_report,
)
from evit.ML_Engine.experiments.training_records import (
    TrainingRecord,
    generate_training_records,
    null_quality_distribution,
)
from evit.ML_Engine.Models.quality_model import QualityDistributions, QualityModel, fit_quality_model
from evit.ML_Engine.Models.transfer import AlgorithmId
from evit.Simulation.population import generate_population

LOGGER = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "seed",
    "recommended",
    "oracle_best",
    "regret",
    "avoided_negative_transfer",
    "random_source_regret",
    "recommended_utility",
    "null_utility",
]


@dataclass(eq=False)
class PipelineResult:
    population: Population
    records: List[TrainingRecord]
    models: Dict[AlgorithmId, QualityModel]
    null_dist: QualityDistributions
    recommendation: Recommendation
    oracle_results: List[OracleResult]
    report: RegretReport


def build_population(domains: Sequence[Domain], target_id: str) -> Population:
    """Split generated domains into labelled sources and a hidden-label target."""
    target = [d for d in domains if d.id == target_id]
    if len(target) != 1:
        raise ConfigError(f"Target id '{target_id}' does not name exactly one domain")
    hidden_target, labels = hide_labels(target[0])
    return Population(
        source_domains=tuple(d for d in domains if d.id != target_id),
        target_domain=hidden_target,
        hidden_target_labels=labels,
    )


def fit_models(
    records: Sequence[TrainingRecord],
    config: RunConfig,
) -> Dict[AlgorithmId, QualityModel]:
    seed = config.stage_seed("fit")
    return {
        a: fit_quality_model(records, a, seed, config.quality_inputs) for a in config.algorithms
    }


def run_pipeline(config: RunConfig, jobs: int = 1) -> PipelineResult:
    # 1. Simulate the population and hide the target's labels
    domains = generate_population(config.population, config.stage_seed("population"), jobs)
    population = build_population(domains, config.population.resolved_target_id)

    # 2. Pseudo-target training records
    records = generate_training_records(
        population.source_domains,
        config.algorithms,
        config.constraints,
        config.measure,
        config.params,
        config.stage_seed("records"),
        config.n_modes,
        jobs,
    )

    # 3. Quality meta-models and null baseline
    models = fit_models(records, config)
    null_dist = null_quality_distribution(
        population.source_domains, config.utility.n_mc, config.stage_seed("null")
    )

    # 4. Recommend
    recommendation = recommend(
        population,
        models,
        null_dist,
        config.utility,
        config.constraints,
        config.measure,
        config.stage_seed("monte-carlo"),
        config.algorithms,
        config.n_modes,
        jobs,
    )

    # 5. Score every candidate against the hidden labels
    oracle_results = oracle_results_for(
        [r.strategy for r in recommendation.ranked],
        population,
        config.params,
        config.stage_seed("transfer"),
        config.utility,
        jobs,
    )
    report = regret_report(recommendation, oracle_results, config.utility)

    return PipelineResult(
        population=population,
        records=list(records),
        models=models,
        null_dist=null_dist,
        recommendation=recommendation,
        oracle_results=oracle_results,
        report=report,
    )


def sweep_row(seed: int, report: RegretReport) -> dict:
    return {
        "seed": seed,
        "recommended": report.recommended.label,
        "oracle_best": report.oracle_best.label,
        "regret": report.regret,
        "avoided_negative_transfer": report.avoided_negative_transfer,
        "random_source_regret": report.random_source_regret,
        "recommended_utility": report.recommended_utility,
        "null_utility": report.null_utility,
    }


def run_sweep(
    config: RunConfig,
    seeds: Optional[Sequence[int]] = None,
    path: Optional[str | Path] = None,
    jobs: int = 1,
) -> pd.DataFrame:
    """
    Run the whole pipeline once per master seed.

    Each finished seed is appended to `path` straight away (when given), so
    an interrupted sweep keeps the rows it already produced.
    """
    if seeds is None:
        seeds = config.sweep_seeds or (config.seed,)

    rows = []
    for seed in seeds:
        result = run_pipeline(replace(config, seed=seed), jobs)
        row = sweep_row(seed, result.report)
        rows.append(row)
        if path is not None:
            append_table(path, pd.DataFrame([row], columns=SWEEP_COLUMNS))
        LOGGER.info(
            "Sweep seed done",
            extra={"stage": "sweep", "seed": seed, "regret": row["regret"]},
        )

    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
