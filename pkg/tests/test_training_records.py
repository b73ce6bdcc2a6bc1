from itertools import product

import numpy as np
import pytest

from evit.Decision_Engine.strategies import EnumerationConstraints
from evit.errors import PreconditionError, ValidationError
from evit.ML_Engine.experiments.training_records import (
    TrainingRecord,
    baseline_quality,
    enumerate_pseudo_target_pairs,
    generate_training_records,
    null_quality_distribution,
    records_to_frame,
)
from evit.ML_Engine.features.similarity import Measure
from evit.ML_Engine.Models.evaluate import QualityMeasures
from evit.ML_Engine.Models.transfer import AlgorithmId, AlgorithmParams

FULL = EnumerationConstraints(mode="full")
SINGLE = EnumerationConstraints(mode="single_source")


def brute_force_pairs(ids, single_source):
    """Independent enumeration via bit masks over the remaining sources."""
    pairs = set()
    for p in ids:
        others = [i for i in ids if i != p]
        for mask in product([False, True], repeat=len(others)):
            subset = tuple(o for o, keep in zip(others, mask) if keep)
            if single_source and len(subset) != 1:
                continue
            pairs.add((p, subset))
    return pairs


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("n_sources", [2, 3, 4, 5])
def test_full_pair_count(n_sources):
    ids = [f"S{i}" for i in range(n_sources)]
    pairs = enumerate_pseudo_target_pairs(ids, FULL)
    assert len(pairs) == n_sources * 2 ** (n_sources - 1)
    assert set(pairs) == brute_force_pairs(ids, single_source=False)


@pytest.mark.parametrize("n_sources", [2, 3, 4, 5])
def test_single_source_pair_count(n_sources):
    ids = [f"S{i}" for i in range(n_sources)]
    pairs = enumerate_pseudo_target_pairs(ids, SINGLE)
    assert len(pairs) == n_sources * (n_sources - 1)
    assert set(pairs) == brute_force_pairs(ids, single_source=True)


def test_random_cap_draws_subset_deterministically():
    ids = [f"S{i}" for i in range(5)]
    capped = EnumerationConstraints(mode="random_cap", cap=10, seed=4)
    pairs = enumerate_pseudo_target_pairs(ids, capped)
    assert len(pairs) == 10
    assert set(pairs) <= brute_force_pairs(ids, single_source=False)
    assert pairs == enumerate_pseudo_target_pairs(ids, capped)


def test_random_cap_above_total_keeps_everything():
    ids = ["A", "B", "C"]
    capped = EnumerationConstraints(mode="random_cap", cap=1000)
    assert enumerate_pseudo_target_pairs(ids, capped) == enumerate_pseudo_target_pairs(ids, FULL)


def test_single_source_population_rejected():
    with pytest.raises(PreconditionError, match="N_s=1"):
        enumerate_pseudo_target_pairs(["A"], FULL)


def test_record_cannot_include_its_pseudo_target():
    with pytest.raises(ValidationError):
        TrainingRecord(
            algorithm=AlgorithmId.TCA,
            pseudo_target_id="A",
            source_ids=("A", "B"),
            similarity=None,
            quality=QualityMeasures(accuracy=0.5, type1_rate=0.0, type2_rate=0.0),
        )


# ---------------------------------------------------------------------------
# Record generation
# ---------------------------------------------------------------------------
def test_one_record_per_pair_and_algorithm(small_records):
    # 3 sources, full mode: 3 * 2^2 pairs, two algorithms
    assert len(small_records) == 12 * 2
    assert {r.algorithm for r in small_records} == {AlgorithmId.STAT_ALIGN, AlgorithmId.TCA}


def test_empty_subsets_are_baseline_records(small_population, small_records):
    by_id = {d.id: d for d in small_population.source_domains}
    baselines = [r for r in small_records if not r.source_ids]
    assert len(baselines) == 3 * 2
    for r in baselines:
        assert r.similarity is None
        assert r.quality == baseline_quality(by_id, r.pseudo_target_id)


def test_transfer_records_carry_similarity(small_records):
    for r in small_records:
        if r.source_ids:
            assert r.similarity is not None
            assert r.similarity.measure_id is Measure.MAC
            assert 0.0 <= r.quality.accuracy <= 1.0


def test_records_do_not_depend_on_worker_count(small_population, small_records):
    parallel = generate_training_records(
        small_population.source_domains,
        [AlgorithmId.TCA, AlgorithmId.STAT_ALIGN, AlgorithmId.NULL],
        FULL,
        "MAC",
        AlgorithmParams(),
        seed=3,
        jobs=2,
    )
    assert records_to_frame(parallel).equals(records_to_frame(small_records))


def test_generation_needs_two_sources(small_population):
    with pytest.raises(PreconditionError):
        generate_training_records(
            small_population.source_domains[:1], ["TCA"], FULL, "MAC", AlgorithmParams(), seed=0
        )


# ---------------------------------------------------------------------------
# Null baseline
# ---------------------------------------------------------------------------
def test_null_distribution(small_population):
    dists = null_quality_distribution(small_population.source_domains, n_mc=300, seed=2)
    assert set(dists) == {"accuracy", "type1", "type2"}
    for dist in dists.values():
        assert dist.samples.shape == (300,)
        assert 0.0 <= dist.samples.min() <= dist.samples.max() <= 1.0

    again = null_quality_distribution(small_population.source_domains, n_mc=300, seed=2)
    np.testing.assert_array_equal(dists["accuracy"].samples, again["accuracy"].samples)


def test_null_distribution_on_balanced_sources_is_one_third(small_population):
    dists = null_quality_distribution(small_population.source_domains, n_mc=50, seed=0)
    np.testing.assert_allclose(dists["accuracy"].samples, 1 / 3)
