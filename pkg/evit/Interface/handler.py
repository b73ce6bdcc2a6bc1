# evit/Interface/handler.py

"""
Pipeline stages behind the CLI.

Stages hand their outputs to each other through the run directory:

    generate          -> domains/, oracle/, population.json
    simulate-records  -> records.csv
    fit               -> models/<ALG>.json, null_quality.json
    recommend         -> recommendation.json (+ table on stdout)
    evaluate          -> regret_report.json
    sweep             -> sweep.csv (appended)
"""

import logging
from pathlib import Path
from typing import Dict

from evit.config import resolve_output_dir
from evit.Decision_Engine.Engine import Recommendation, recommend, render_table
from evit.errors import require_multiple_sources
from evit.Feature_Layer.data_loader import (
    load_domain,
    load_labels,
    read_json,
    save_domain,
    save_labels,
    write_json,
)
from evit.Feature_Layer.domain import Population
from evit.Interface.schemas import RunConfig, RunPaths
from evit.ML_Engine.experiments.oracle import oracle_results_for, regret_report
from evit.ML_Engine.experiments.run_experiments import build_population, fit_models, run_sweep
from evit.ML_Engine.experiments.training_records import (
    generate_training_records,
    load_records,
    null_quality_distribution,
    save_records,
)
from evit.ML_Engine.Models.quality_model import (
    QualityDistribution,
    QualityDistributions,
    QualityModel,
)
from evit.ML_Engine.Models.transfer import AlgorithmId
from evit.Simulation.population import generate_population

LOGGER = logging.getLogger(__name__)


def run_paths(config: RunConfig) -> RunPaths:
    return RunPaths(Path(resolve_output_dir(config.output_dir)))


# ---------------------------------------------------------------------------
# Loaders for prior stage outputs
# ---------------------------------------------------------------------------

def load_population(paths: RunPaths) -> Population:
    manifest = read_json(paths.manifest, what="Population manifest (run `evit generate` first)")
    target_id = manifest["target_id"]

    sources = tuple(load_domain(paths.domains, i) for i in manifest["source_ids"])
    target = load_domain(paths.domains, target_id)
    labels_path = paths.oracle_labels(target_id)
    hidden = load_labels(labels_path) if labels_path.exists() else None

    return Population(source_domains=sources, target_domain=target, hidden_target_labels=hidden)


def load_models(paths: RunPaths, config: RunConfig) -> Dict[AlgorithmId, QualityModel]:
    return {
        a: QualityModel.from_dict(
            read_json(paths.model(a), what=f"Quality model for {a.value} (run `evit fit` first)")
        )
        for a in config.algorithms
    }


def load_null_quality(paths: RunPaths) -> QualityDistributions:
    raw = read_json(paths.null_quality, what="Null quality distribution (run `evit fit` first)")
    return {name: QualityDistribution.from_dict(d) for name, d in raw.items()}


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def cmd_generate(config: RunConfig, jobs: int = 1) -> Path:
    paths = run_paths(config)

    # 1. Simulate every structure of the population
    domains = generate_population(config.population, config.stage_seed("population"), jobs)

    # 2. Split off the target and keep its labels for the oracle only
    population = build_population(domains, config.population.resolved_target_id)
    target = population.target_domain

    # 3. Persist domains, hidden labels and the manifest
    for d in (*population.source_domains, target):
        save_domain(d, paths.domains)
    save_labels(paths.oracle_labels(target.id), population.hidden_target_labels)

    write_json(paths.manifest, {
        "source_ids": population.source_ids,
        "target_id": target.id,
        "n_features": target.n_features,
        "n_classes": target.n_classes,
        "seed": config.seed,
        "population": config.population.to_dict(),
    })
    LOGGER.info(
        "Population written",
        extra={"stage": "generate", "path": str(paths.manifest), "n_sources": population.n_sources},
    )
    return paths.manifest


def cmd_simulate_records(config: RunConfig, jobs: int = 1) -> Path:
    paths = run_paths(config)
    population = load_population(paths)

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
    save_records(paths.records, records)
    LOGGER.info(
        "Training records written",
        extra={"stage": "simulate-records", "path": str(paths.records), "n_records": len(records)},
    )
    return paths.records


def cmd_fit(config: RunConfig, jobs: int = 1) -> Path:
    paths = run_paths(config)
    population = load_population(paths)
    records = load_records(paths.records)

    for algorithm, model in fit_models(records, config).items():
        write_json(paths.model(algorithm), model.to_dict())

    null_dist = null_quality_distribution(
        population.source_domains, config.utility.n_mc, config.stage_seed("null")
    )
    write_json(paths.null_quality, {name: d.to_dict() for name, d in null_dist.items()})
    LOGGER.info("Quality models written", extra={"stage": "fit", "path": str(paths.models)})
    return paths.models


def cmd_recommend(config: RunConfig, jobs: int = 1) -> Recommendation:
    paths = run_paths(config)
    population = load_population(paths)
    require_multiple_sources(population.n_sources)

    recommendation = recommend(
        population,
        load_models(paths, config),
        load_null_quality(paths),
        config.utility,
        config.constraints,
        config.measure,
        config.stage_seed("monte-carlo"),
        config.algorithms,
        config.n_modes,
        jobs,
    )
    write_json(paths.recommendation, recommendation.to_dict())
    print(render_table(recommendation))
    return recommendation


def cmd_evaluate(config: RunConfig, jobs: int = 1) -> Path:
    paths = run_paths(config)
    recommendation = Recommendation.from_dict(
        read_json(paths.recommendation, what="Recommendation (run `evit recommend` first)")
    )
    population = load_population(paths)

    results = oracle_results_for(
        [r.strategy for r in recommendation.ranked],
        population,
        config.params,
        config.stage_seed("transfer"),
        config.utility,
        jobs,
    )
    report = regret_report(recommendation, results, config.utility)

    write_json(paths.regret_report, {
        **report.to_dict(),
        "oracle_results": [r.to_dict() for r in results],
    })
    LOGGER.info(
        "Regret report written",
        extra={"stage": "evaluate", "path": str(paths.regret_report), "regret": report.regret},
    )
    return paths.regret_report


def cmd_sweep(config: RunConfig, jobs: int = 1) -> Path:
    paths = run_paths(config)
    run_sweep(config, path=paths.sweep, jobs=jobs)
    return paths.sweep


COMMANDS = {
    "generate": cmd_generate,
    "simulate-records": cmd_simulate_records,
    "fit": cmd_fit,
    "recommend": cmd_recommend,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
}
