# evit/Interface/validator.py

from pathlib import Path

from evit.Decision_Engine.strategies import EnumerationConstraints, non_null
from evit.Decision_Engine.utility import utility_spec_from_dict
from evit.errors import ConfigError, EvitError, invalid_config
from evit.Feature_Layer.data_loader import read_json
from evit.Interface.schemas import RunConfig
from evit.ML_Engine.features.similarity import Measure
from evit.ML_Engine.Models.quality_model import SUMMARY_NAMES
from evit.ML_Engine.Models.transfer import AlgorithmId, AlgorithmParams
from evit.Simulation.validator import PopulationConfigValidator

SEED_BITS = 64


def validate_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < 2**SEED_BITS:
        raise ConfigError(f"seed must fit in {SEED_BITS} unsigned bits, got {seed}")
    return seed


class RunConfigValidator:

    REQUIRED_FIELDS = ["population_config", "algorithms", "seed", "output_dir"]

    @staticmethod
    def validate(raw: dict, base_dir: str | Path = ".") -> RunConfig:
        """
        Build a RunConfig from a parsed run-config document.

        `population_config` is resolved relative to `base_dir` (the directory
        of the run config file) and loaded eagerly, so a missing population
        file is reported at validation time.
        """
        for field in RunConfigValidator.REQUIRED_FIELDS:
            if field not in raw:
                raise ConfigError(f"Missing required run field: {field}")

        try:
            return RunConfigValidator._build(raw, base_dir)
        except EvitError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise invalid_config("Invalid run config", exc) from exc

    @staticmethod
    def _build(raw: dict, base_dir: str | Path) -> RunConfig:
        population_path = Path(base_dir) / str(raw["population_config"])
        population = PopulationConfigValidator.validate(
            read_json(population_path, what="Population config")
        )

        try:
            algorithms = tuple(non_null(raw["algorithms"]))
        except ValueError:
            raise ConfigError(
                f"Unknown algorithm in {raw['algorithms']}; "
                f"choose from {[a.value for a in AlgorithmId]}"
            ) from None
        if not algorithms:
            raise ConfigError("algorithms must name at least one non-NULL algorithm")

        try:
            measure = Measure(raw.get("measure", Measure.MAC.value))
        except ValueError:
            raise ConfigError(f"Unknown similarity measure {raw.get('measure')!r}") from None

        n_modes = raw.get("n_modes")
        if n_modes is not None:
            n_modes = int(n_modes)
            if not 1 <= n_modes <= population.n_dof:
                raise ConfigError(f"n_modes must lie in [1, {population.n_dof}], got {n_modes}")

        quality_inputs = tuple(raw.get("quality_inputs", ["mean"]))
        if not quality_inputs or any(n not in SUMMARY_NAMES for n in quality_inputs):
            raise ConfigError(f"quality_inputs must be drawn from {list(SUMMARY_NAMES)}")

        try:
            params = AlgorithmParams(**raw.get("params", {}))
            constraints = EnumerationConstraints(**raw.get("constraints", {}))
        except (KeyError, TypeError, ValueError) as exc:
            raise invalid_config("Invalid params or constraints", exc) from exc

        utility = utility_spec_from_dict(raw.get("utility", {}))
        missing_costs = [a.value for a in algorithms if a not in utility.cost_per_algorithm]
        if missing_costs:
            raise ConfigError(f"utility.cost_per_algorithm lacks entries for {missing_costs}")

        return RunConfig(
            population_config_path=population_path,
            population=population,
            algorithms=algorithms,
            seed=validate_seed(raw["seed"]),
            output_dir=str(raw["output_dir"]),
            params=params,
            measure=measure,
            n_modes=n_modes,
            quality_inputs=quality_inputs,
            constraints=constraints,
            utility=utility,
            sweep_seeds=tuple(validate_seed(s) for s in raw.get("sweep_seeds", [])),
        )


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    raw = read_json(path, what="Run config")
    if not isinstance(raw, dict):
        raise ConfigError(f"Run config at {path} must be a JSON object")
    return RunConfigValidator.validate(raw, base_dir=path.parent)
