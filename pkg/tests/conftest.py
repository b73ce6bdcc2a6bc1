import json

import numpy as np
import pytest

from evit.Decision_Engine.strategies import EnumerationConstraints
from evit.Feature_Layer.domain import Domain, Representation
from evit.ML_Engine.experiments.run_experiments import build_population
from evit.ML_Engine.experiments.training_records import generate_training_records
from evit.ML_Engine.features.similarity import Measure
from evit.ML_Engine.Models.quality_model import fit_quality_model
from evit.ML_Engine.Models.transfer import AlgorithmId, AlgorithmParams
from evit.Simulation.population import generate_population
from evit.Simulation.validator import PopulationConfigValidator


# ---------------------------------------------------------------------------
# Shared constants
# ---------------------------------------------------------------------------
SMALL_POPULATION = {
    "n_structures": 4,
    "n_dof": 4,
    "nominal_masses": 1.0,
    "nominal_stiffnesses": 100.0,
    "stiffness_std": 0.05,
    "boundaries": ["fixed-free", "fixed-free", "fixed-fixed"],
    "damage_states": [
        {"class_label": 0, "spring_index": None, "reduction": 0.0},
        {"class_label": 1, "spring_index": 1, "reduction": 0.4},
        {"class_label": 2, "spring_index": 3, "reduction": 0.4},
    ],
    "n_per_class": 5,
    "noise_std": 0.01,
}

SMALL_RUN = {
    "population_config": "population.json",
    "algorithms": ["STAT_ALIGN", "TCA"],
    "params": {"tca_components": 2, "tca_mu": 1.0, "knn_k": 1},
    "measure": "MAC",
    "constraints": {"mode": "full"},
    "utility": {
        "prior_damage": 0.1,
        "cost_inspection": 1000.0,
        "cost_failure": 20000.0,
        "accuracy_weight": 1000.0,
        "cost_per_source": 1.0,
        "cost_per_algorithm": {"STAT_ALIGN": 1.0, "TCA": 5.0},
        "n_mc": 200,
    },
    "seed": 11,
}

ALGORITHMS = (AlgorithmId.STAT_ALIGN, AlgorithmId.TCA)
PARAMS = AlgorithmParams()


def make_domain(domain_id, features, labels=None, n_classes=3, edges=((0, 1), (1, 2))):
    features = np.asarray(features, dtype=float)
    return Domain(
        id=domain_id,
        features=features,
        labels=labels,
        representation=Representation(
            modeshapes=np.eye(features.shape[1]),
            graph_edges=edges,
        ),
        n_classes=n_classes,
    )


def write_run_files(directory, population=None, run=None, **overrides):
    """Write population.json + run.json into `directory`; returns the run config path."""
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "population.json").write_text(json.dumps(population or SMALL_POPULATION))
    payload = {**SMALL_RUN, **(run or {}), "output_dir": str(directory / "run"), **overrides}
    path = directory / "run.json"
    path.write_text(json.dumps(payload))
    return path


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------
@pytest.fixture(scope="session")
def small_config():
    return PopulationConfigValidator.validate(SMALL_POPULATION)


@pytest.fixture(scope="session")
def small_domains(small_config):
    return generate_population(small_config, seed=7)


@pytest.fixture(scope="session")
def small_population(small_config, small_domains):
    return build_population(small_domains, small_config.resolved_target_id)


@pytest.fixture(scope="session")
def small_records(small_population):
    return generate_training_records(
        small_population.source_domains,
        ALGORITHMS,
        EnumerationConstraints(mode="full"),
        Measure.MAC,
        PARAMS,
        seed=3,
    )


@pytest.fixture(scope="session")
def small_models(small_records):
    return {a: fit_quality_model(small_records, a, seed=5) for a in ALGORITHMS}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
