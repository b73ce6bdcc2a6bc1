import numpy as np
import pytest

from conftest import make_domain
from evit.errors import PreconditionError, ValidationError
from evit.ML_Engine.Models.train import train_classify
from evit.ML_Engine.Models.transfer import (
    AlgorithmId,
    AlgorithmParams,
    apply_transfer,
    mmd_coefficients,
    statistic_align,
    tca,
)


def standardised_mean_gap(Zs, Zt):
    """Distance between domain means after pooled per-column standardisation."""
    Z = np.vstack([Zs, Zt])
    Z = (Z - Z.mean(axis=0)) / Z.std(axis=0)
    return float(np.linalg.norm(Z[: len(Zs)].mean(axis=0) - Z[len(Zs):].mean(axis=0)))


@pytest.fixture
def shifted(rng):
    Xs = rng.normal(size=(30, 3))
    Xt = rng.normal(size=(30, 3)) + 3.0
    return Xs, Xt


# ---------------------------------------------------------------------------
# NULL
# ---------------------------------------------------------------------------
def test_null_is_identity(shifted):
    Xs, Xt = shifted
    source = make_domain("S", Xs, np.zeros(30, dtype=int))
    Zs, ys, Zt = apply_transfer(AlgorithmId.NULL, source, Xt, AlgorithmParams())
    assert Zs is source.features
    assert Zt is Xt
    np.testing.assert_array_equal(ys, source.labels)


def test_null_transfer_leaves_classification_unchanged(shifted, rng):
    Xs, Xt = shifted
    ys = rng.integers(0, 3, size=len(Xs))
    source = make_domain("S", Xs, ys)
    params = AlgorithmParams(knn_k=3)

    Zs, zs_labels, Zt = apply_transfer(AlgorithmId.NULL, source, Xt, params)
    np.testing.assert_array_equal(
        train_classify(Zs, zs_labels, Zt, params),
        train_classify(Xs, ys, Xt, params),
    )


# ---------------------------------------------------------------------------
# Statistic alignment
# ---------------------------------------------------------------------------
def test_statistic_alignment_standardises_each_domain(shifted):
    Xs, Xt = shifted
    source = make_domain("S", Xs * 50.0, np.zeros(30, dtype=int))
    Zs, _, Zt = apply_transfer("STAT_ALIGN", source, Xt, AlgorithmParams())
    for Z in (Zs, Zt):
        assert np.max(np.abs(Z.mean(axis=0))) <= 1e-9
        assert np.max(np.abs(Z.std(axis=0) - 1.0)) <= 1e-9


def test_statistic_alignment_absorbs_affine_rescaling(rng):
    X = rng.normal(size=(25, 4))
    scale = rng.uniform(0.1, 100.0, size=4)
    offset = rng.uniform(-50.0, 50.0, size=4)
    np.testing.assert_allclose(statistic_align(X * scale + offset), statistic_align(X), atol=1e-9)


def test_constant_column_is_centred_only():
    X = np.column_stack([np.full(5, 4.0), np.arange(5.0)])
    Z = statistic_align(X)
    np.testing.assert_array_equal(Z[:, 0], np.zeros(5))


def test_statistic_alignment_needs_two_rows():
    with pytest.raises(ValidationError):
        statistic_align(np.ones((1, 3)))


# ---------------------------------------------------------------------------
# TCA
# ---------------------------------------------------------------------------
def test_mmd_coefficients_sum_to_zero():
    L = mmd_coefficients(3, 5)
    assert L[0, 0] == pytest.approx(1 / 9)
    assert L[4, 4] == pytest.approx(1 / 25)
    assert L[0, 4] == pytest.approx(-1 / 15)
    assert L.sum() == pytest.approx(0.0, abs=1e-12)


def test_tca_shapes_and_determinism(shifted):
    Xs, Xt = shifted
    params = AlgorithmParams(tca_components=2)
    Zs, Zt = tca(Xs, Xt, params)
    assert Zs.shape == (30, 2)
    assert Zt.shape == (30, 2)

    Zs2, Zt2 = tca(Xs, Xt, params)
    np.testing.assert_array_equal(Zs, Zs2)
    np.testing.assert_array_equal(Zt, Zt2)


def test_tca_reduces_domain_gap(shifted):
    Xs, Xt = shifted
    Zs, Zt = tca(Xs, Xt, AlgorithmParams(tca_components=2, tca_mu=1.0))
    assert standardised_mean_gap(Zs, Zt) < standardised_mean_gap(Xs, Xt)


def test_tca_matched_distributions_stay_close(rng):
    Xs = rng.normal(size=(80, 3))
    Xt = rng.normal(size=(80, 3))
    Zs, Zt = tca(Xs, Xt, AlgorithmParams(tca_components=2))
    assert standardised_mean_gap(Xs, Xt) < 0.75
    assert standardised_mean_gap(Zs, Zt) < 0.75


def test_tca_rows_follow_input_permutation(shifted, rng):
    Xs, Xt = shifted
    ps = rng.permutation(len(Xs))
    pt = rng.permutation(len(Xt))
    params = AlgorithmParams(tca_components=2)

    Zs, Zt = tca(Xs, Xt, params)
    Zs_perm, Zt_perm = tca(Xs[ps], Xt[pt], params)
    np.testing.assert_allclose(Zs_perm, Zs[ps], atol=1e-8)
    np.testing.assert_allclose(Zt_perm, Zt[pt], atol=1e-8)


def test_tca_fixed_bandwidth(shifted):
    Xs, Xt = shifted
    Zs, Zt = tca(Xs, Xt, AlgorithmParams(tca_kernel_bandwidth=2.5))
    assert np.all(np.isfinite(Zs)) and np.all(np.isfinite(Zt))


def test_tca_too_many_components():
    with pytest.raises(ValidationError):
        tca(np.ones((2, 2)), np.zeros((2, 2)), AlgorithmParams(tca_components=4))


def test_tca_column_mismatch():
    with pytest.raises(ValidationError):
        tca(np.ones((4, 2)), np.ones((4, 3)), AlgorithmParams())


# ---------------------------------------------------------------------------
# Parameters / dispatch
# ---------------------------------------------------------------------------
@pytest.mark.parametrize(
    "kwargs",
    [
        {"knn_k": 2},
        {"knn_k": 0},
        {"tca_components": 0},
        {"tca_mu": 0.0},
        {"tca_kernel_bandwidth": -1.0},
        {"tca_kernel_bandwidth": "mean"},
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(ValidationError):
        AlgorithmParams(**kwargs)


def test_unlabelled_source_rejected(shifted):
    Xs, Xt = shifted
    with pytest.raises(PreconditionError):
        apply_transfer("TCA", make_domain("S", Xs), Xt, AlgorithmParams())


def test_target_dimension_mismatch(shifted):
    Xs, _ = shifted
    source = make_domain("S", Xs, np.zeros(30, dtype=int))
    with pytest.raises(ValidationError):
        apply_transfer("STAT_ALIGN", source, np.ones((5, 2)), AlgorithmParams())


def test_unknown_algorithm(shifted):
    Xs, Xt = shifted
    source = make_domain("S", Xs, np.zeros(30, dtype=int))
    with pytest.raises(ValueError):
        apply_transfer("CORAL", source, Xt, AlgorithmParams())
