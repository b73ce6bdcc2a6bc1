import numpy as np
import pytest

from evit.errors import ValidationError
from evit.Feature_Layer.domain import Representation
from evit.ML_Engine.features.similarity import (
    Measure,
    SimilarityVector,
    jaccard,
    mac,
    mac_summary,
    similarity_features,
)
from evit.Simulation.schemas import Boundary
from evit.Simulation.structures import chain_edges

TOL = 1e-12


# ---------------------------------------------------------------------------
# MAC
# ---------------------------------------------------------------------------
def test_mac_properties_on_random_pairs(rng):
    for _ in range(1000):
        a = rng.normal(size=6)
        b = rng.normal(size=6)
        value = mac(a, b)
        assert 0.0 <= value <= 1.0
        assert abs(value - mac(b, a)) <= TOL
        assert abs(value - mac(-3.7 * a, 0.25 * b)) <= TOL


def test_mac_fixtures():
    assert mac([1.0, 2.0, 3.0], [2.0, 4.0, 6.0]) == pytest.approx(1.0, abs=TOL)
    assert mac([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_mac_zero_vector():
    with pytest.raises(ValidationError):
        mac([0.0, 0.0], [1.0, 0.0])


def test_mac_length_mismatch():
    with pytest.raises(ValidationError):
        mac([1.0, 0.0], [1.0, 0.0, 0.0])


def test_mac_summary_pairs_modes_by_index():
    A = np.eye(3)
    B = np.eye(3)[:, [0, 2, 1]]
    assert mac_summary(A, B, 1) == pytest.approx(1.0)
    assert mac_summary(A, B, 3) == pytest.approx(1.0 / 3.0)


def test_mac_summary_too_many_modes():
    with pytest.raises(ValidationError):
        mac_summary(np.eye(3), np.eye(3), 4)


# ---------------------------------------------------------------------------
# Jaccard
# ---------------------------------------------------------------------------
def test_jaccard_fixture():
    # {ab, bc, cd} vs {bc, cd, de}
    a = {(0, 1), (1, 2), (2, 3)}
    b = {(1, 2), (2, 3), (3, 4)}
    assert jaccard(a, b) == 0.5


def test_jaccard_identical_and_disjoint():
    edges = {(0, 1), (1, 2)}
    assert jaccard(edges, edges) == 1.0
    assert jaccard(edges, {(5, 6)}) == 0.0


def test_jaccard_distinguishes_boundary_conditions():
    free = chain_edges(4, Boundary.FIXED_FREE)
    fixed = chain_edges(4, Boundary.FIXED_FIXED)
    assert jaccard(free, fixed) == pytest.approx(4 / 5)


# ---------------------------------------------------------------------------
# similarity_features
# ---------------------------------------------------------------------------
def reps(small_domains):
    return [d.representation for d in small_domains]


def test_summary_is_ordered_and_bounded(small_domains):
    target, *sources = reps(small_domains)
    sim = similarity_features(target, sources, Measure.MAC)
    assert 0.0 <= sim.min <= sim.mean <= sim.max <= 1.0
    assert sim.measure_id is Measure.MAC


def test_summary_independent_of_source_order(small_domains):
    target, *sources = reps(small_domains)
    assert similarity_features(target, sources, "MAC") == similarity_features(
        target, sources[::-1], "MAC"
    )


def test_self_similarity_is_one(small_domains):
    target = small_domains[0].representation
    for measure in Measure:
        assert similarity_features(target, [target], measure).mean == pytest.approx(1.0, abs=TOL)


def test_merged_representation_counts_each_member(small_domains):
    target, a, b, _ = reps(small_domains)
    merged = Representation(a.modeshapes, a.graph_edges, members=(a, b))
    assert similarity_features(target, [merged], "Jaccard") == similarity_features(
        target, [a, b], "Jaccard"
    )


def test_dissimilar_boundary_scores_lower_jaccard(small_domains):
    # S00 and S01 are fixed-free, S02 fixed-fixed
    target, same, other = (d.representation for d in small_domains[:3])
    assert similarity_features(target, [same], "Jaccard").mean == 1.0
    assert similarity_features(target, [other], "Jaccard").mean < 1.0


def test_empty_source_set(small_domains):
    with pytest.raises(ValidationError):
        similarity_features(small_domains[0].representation, [], "MAC")


def test_unknown_measure(small_domains):
    with pytest.raises(ValueError):
        similarity_features(small_domains[0].representation, [small_domains[1].representation], "cosine")


def test_similarity_vector_rejects_disorder():
    with pytest.raises(ValidationError):
        SimilarityVector(measure_id=Measure.MAC, mean=0.2, min=0.5, max=0.9)
