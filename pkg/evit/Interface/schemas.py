# evit/Interface/schemas.py

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from evit.Decision_Engine.strategies import EnumerationConstraints
from evit.Decision_Engine.utility import UtilitySpec
from evit.ML_Engine.features.similarity import Measure
from evit.ML_Engine.Models.transfer import AlgorithmId, AlgorithmParams
from evit.Simulation.population import derive_seed
from evit.Simulation.schemas import PopulationConfig


@dataclass(frozen=True)
class RunConfig:
    population_config_path: Path
    population: PopulationConfig
    algorithms: Tuple[AlgorithmId, ...]
    seed: int
    output_dir: str
    params: AlgorithmParams = field(default_factory=AlgorithmParams)
    measure: Measure = Measure.MAC
    n_modes: Optional[int] = None
    quality_inputs: Tuple[str, ...] = ("mean",)
    constraints: EnumerationConstraints = field(default_factory=EnumerationConstraints)
    utility: UtilitySpec = field(default_factory=UtilitySpec)
    sweep_seeds: Tuple[int, ...] = ()

    def stage_seed(self, stage: str) -> int:
        """Seed of one pipeline stage, derived from the master seed."""
        return int(derive_seed(self.seed, stage).generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class RunPaths:
    """Artifact locations inside one run directory."""

    root: Path

    @property
    def domains(self) -> Path:
        return self.root / "domains"

    @property
    def oracle(self) -> Path:
        return self.root / "oracle"

    @property
    def manifest(self) -> Path:
        return self.root / "population.json"

    @property
    def records(self) -> Path:
        return self.root / "records.csv"

    @property
    def models(self) -> Path:
        return self.root / "models"

    @property
    def null_quality(self) -> Path:
        return self.root / "null_quality.json"

    @property
    def recommendation(self) -> Path:
        return self.root / "recommendation.json"

    @property
    def regret_report(self) -> Path:
        return self.root / "regret_report.json"

    @property
    def sweep(self) -> Path:
        return self.root / "sweep.csv"

    def model(self, algorithm: AlgorithmId) -> Path:
        return self.models / f"{algorithm.value}.json"

    def oracle_labels(self, target_id: str) -> Path:
        return self.oracle / f"{target_id}_labels.csv"
