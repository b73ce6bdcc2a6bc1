import numpy as np
import pytest

from evit.Decision_Engine.strategies import NULL_STRATEGY, TransferStrategy
from evit.Decision_Engine.utility import (
    UtilitySpec,
    expected_utility,
    transfer_cost,
    utility_of_quality,
    utility_spec_from_dict,
)
from evit.errors import ConfigError, ValidationError
from evit.ML_Engine.Models.evaluate import QualityMeasures
from evit.ML_Engine.Models.quality_model import QualityDistribution
from evit.ML_Engine.Models.transfer import AlgorithmId

SPEC = UtilitySpec(
    prior_damage=0.1,
    cost_inspection=1000.0,
    cost_failure=20000.0,
    cost_per_source=1.0,
    cost_per_algorithm={"STAT_ALIGN": 1.0, "TCA": 5.0},
)


def constant_dists(accuracy, type1, type2, n=10):
    return {
        name: QualityDistribution.from_samples(name, np.full(n, value))
        for name, value in (("accuracy", accuracy), ("type1", type1), ("type2", type2))
    }


def test_utility_of_quality():
    q = QualityMeasures(accuracy=0.9, type1_rate=0.2, type2_rate=0.1)
    # -(0.9 * 0.2 * 1000) - 0.1 * 0.1 * 20000
    assert utility_of_quality(q, SPEC) == pytest.approx(-380.0)


def test_accuracy_weight_and_offset():
    spec = UtilitySpec(accuracy_weight=10.0, utility_offset=-3.0)
    q = QualityMeasures(accuracy=0.5, type1_rate=0.0, type2_rate=0.0)
    assert utility_of_quality(q, spec) == pytest.approx(2.0)


def test_expected_utility_of_constant_samples():
    q = QualityMeasures(accuracy=0.9, type1_rate=0.2, type2_rate=0.1)
    assert expected_utility(constant_dists(0.9, 0.2, 0.1), SPEC) == pytest.approx(
        utility_of_quality(q, SPEC)
    )


def test_expected_utility_needs_paired_samples():
    dists = constant_dists(0.9, 0.2, 0.1)
    dists["type2"] = QualityDistribution.from_samples("type2", [0.1, 0.1])
    with pytest.raises(ValidationError):
        expected_utility(dists, SPEC)


def test_transfer_cost():
    assert transfer_cost(NULL_STRATEGY, SPEC) == 0.0
    assert transfer_cost(TransferStrategy(("A", "B"), "TCA"), SPEC) == -7.0
    assert transfer_cost(TransferStrategy(("A",), "STAT_ALIGN"), SPEC) == -2.0


def test_missing_algorithm_cost():
    with pytest.raises(ConfigError):
        transfer_cost(TransferStrategy(("A",), "TCA"), UtilitySpec())


def test_scaled_multiplies_every_cost():
    scaled = SPEC.scaled(2.5)
    assert scaled.cost_failure == 50000.0
    assert scaled.cost_per_algorithm[AlgorithmId.TCA] == 12.5
    assert scaled.prior_damage == SPEC.prior_damage
    assert scaled.n_mc == SPEC.n_mc


@pytest.mark.parametrize(
    "kwargs",
    [
        {"prior_damage": 1.5},
        {"cost_failure": -1.0},
        {"cost_per_algorithm": {"NULL": 2.0}},
        {"cost_per_algorithm": {"TCA": -1.0}},
        {"n_mc": 0},
    ],
)
def test_invalid_spec(kwargs):
    with pytest.raises(ConfigError):
        UtilitySpec(**kwargs)


def test_spec_from_dict():
    spec = utility_spec_from_dict({"prior_damage": 0.2, "cost_per_algorithm": {"TCA": 3}})
    assert spec.cost_per_algorithm == {AlgorithmId.TCA: 3.0}
    assert utility_spec_from_dict(spec.to_dict()) == spec
    with pytest.raises(ConfigError):
        utility_spec_from_dict({"cost_of_coffee": 1.0})
