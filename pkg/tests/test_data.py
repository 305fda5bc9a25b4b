import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsepref.data import (
    IndexSet,
    PreferenceDataset,
    check_incoherence,
    check_submatrix_nonsingularity,
    column_norm_bound,
    principal_submatrix,
    refute_restricted_eigenvalue,
    seminorm_sq,
)
from sparsepref.errors import CapacityError


def _toy_dataset(n=30, d=4, seed=0):
    rng = np.random.default_rng(seed)
    x0 = rng.random((n, d))
    x1 = rng.random((n, d))
    y = rng.integers(0, 2, n)
    return PreferenceDataset.from_pairs(x0, x1, y)


class TestIndexSet:
    def test_sorts_and_keeps_dim(self):
        s = IndexSet([3, 0, 2], dim=5)
        assert list(s) == [0, 2, 3]
        assert len(s) == 3
        assert s.dim == 5

    def test_rejects_out_of_range_and_duplicates(self):
        with pytest.raises(IndexError):
            IndexSet([0, 5], dim=5)
        with pytest.raises(IndexError):
            IndexSet([-1], dim=5)
        with pytest.raises(ValueError, match="duplicate"):
            IndexSet([1, 1], dim=5)

    def test_complement(self):
        s = IndexSet([0, 3], dim=5)
        assert list(s.complement()) == [1, 2, 4]
        assert list(IndexSet([], 3).complement()) == [0, 1, 2]

    def test_equality_and_hash(self):
        assert IndexSet([2, 1], 4) == IndexSet([1, 2], 4)
        assert IndexSet([1], 4) != IndexSet([1], 5)
        assert hash(IndexSet([2, 1], 4)) == hash(IndexSet([1, 2], 4))


class TestPreferenceDataset:
    def test_from_pairs_stores_differences(self):
        ds = _toy_dataset()
        np.testing.assert_array_equal(ds.diffs, ds.x0 - ds.x1)
        assert ds.has_pairs
        assert ds.n == 30 and ds.d == 4

    def test_gram_is_normalized_cross_product(self):
        ds = _toy_dataset()
        np.testing.assert_allclose(ds.gram, ds.diffs.T @ ds.diffs / ds.n, atol=1e-15)

    def test_from_differences_has_no_pairs(self):
        ds = PreferenceDataset.from_differences(np.ones((3, 2)), [0, 1, 0])
        assert not ds.has_pairs
        assert ds.x0 is None

    def test_rejects_bad_labels_and_shapes(self):
        with pytest.raises(ValueError, match="labels must be 0 or 1"):
            PreferenceDataset.from_differences(np.ones((2, 2)), [0, 2])
        with pytest.raises(ValueError, match="does not match"):
            PreferenceDataset.from_differences(np.ones((2, 2)), [0])
        with pytest.raises(ValueError, match="empty dataset"):
            PreferenceDataset.from_differences(np.ones((0, 2)), [])
        with pytest.raises(ValueError, match="non-finite"):
            PreferenceDataset.from_differences(np.array([[np.inf, 0.0]]), [0])
        with pytest.raises(ValueError, match="pair shapes differ"):
            PreferenceDataset.from_pairs(np.ones((2, 2)), np.ones((2, 3)), [0, 1])

    def test_feature_radius(self):
        diffs = np.array([[3.0, 4.0], [1.0, 0.0]])
        ds = PreferenceDataset.from_differences(diffs, [0, 1])
        assert ds.feature_radius() == pytest.approx(5.0)


@given(
    st.lists(st.floats(-5, 5), min_size=3, max_size=3),
    st.integers(0, 2**32 - 1),
)
@settings(max_examples=50, deadline=None)
def test_seminorm_sq_nonnegative_and_quadratic(v, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((6, 3))
    Sigma = A.T @ A / 6
    v = np.asarray(v)
    q = seminorm_sq(Sigma, v)
    assert q >= -1e-12
    assert seminorm_sq(Sigma, 2.0 * v) == pytest.approx(4.0 * q, rel=1e-9, abs=1e-12)


def test_seminorm_sq_validates_shapes():
    with pytest.raises(ValueError, match="square"):
        seminorm_sq(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError, match="does not match"):
        seminorm_sq(np.eye(2), np.ones(3))


def test_column_norm_bound_matches_definition():
    ds = _toy_dataset()
    expected = max(
        np.linalg.norm(ds.diffs[:, j]) / np.sqrt(ds.n) for j in range(ds.d)
    )
    assert column_norm_bound(ds) == pytest.approx(expected)


def test_principal_submatrix():
    Sigma = np.arange(16.0).reshape(4, 4)
    sub = principal_submatrix(Sigma, IndexSet([1, 3], 4))
    np.testing.assert_array_equal(sub, np.array([[5.0, 7.0], [13.0, 15.0]]))
    with pytest.raises(ValueError, match="empty subset"):
        principal_submatrix(Sigma, IndexSet([], 4))


class TestSubmatrixNonsingularity:
    def test_identity_passes(self):
        rep = check_submatrix_nonsingularity(np.eye(6), k=2)
        assert rep.passed
        assert rep.worst_sigma_min == pytest.approx(1.0)
        # sizes 2..4 of 6 coordinates
        assert rep.subsets_checked == 15 + 20 + 15

    def test_rank_deficient_fails_with_witness(self):
        Sigma = np.eye(5)
        Sigma[4, 4] = 0.0
        rep = check_submatrix_nonsingularity(Sigma, k=2)
        assert not rep.passed
        assert 4 in rep.worst_subset
        assert rep.worst_sigma_min < 1e-12

    def test_capacity_cap(self):
        with pytest.raises(CapacityError, match="cap"):
            check_submatrix_nonsingularity(np.eye(80), k=6, cap=1000)

    def test_accepts_dataset(self):
        ds = _toy_dataset(n=100)
        rep = check_submatrix_nonsingularity(ds, k=1)
        assert rep.passed


class TestIncoherence:
    def test_identity_passes(self):
        rep = check_incoherence(np.eye(8), k=4)
        assert rep.passed
        assert rep.max_abs_deviation == 0.0
        assert rep.threshold == pytest.approx(1 / 128)

    def test_threshold_is_sharp(self):
        Sigma = np.eye(4)
        Sigma[0, 1] = Sigma[1, 0] = 1 / 64
        assert check_incoherence(Sigma, k=2).passed
        Sigma[0, 1] = Sigma[1, 0] = 1 / 64 + 1e-9
        assert not check_incoherence(Sigma, k=2).passed


class TestRestrictedEigenvalue:
    def test_identity_not_refuted(self):
        rep = refute_restricted_eigenvalue(np.eye(10), k=3, trials=50)
        assert not rep.refuted
        assert rep.min_ratio >= 0.5
        assert rep.witness is None

    def test_scaled_identity_refuted_with_valid_witness(self):
        Sigma = 0.1 * np.eye(8)
        rep = refute_restricted_eigenvalue(
            Sigma, k=2, trials=50, rng=np.random.default_rng(1)
        )
        assert rep.refuted
        w = rep.witness
        ratio = (w @ Sigma @ w) / (w @ w)
        assert ratio < 0.5
        # the witness respects the cone constraint for its support
        S = np.asarray(rep.witness_support, dtype=int)
        on = np.sum(np.abs(w[S]))
        off = np.sum(np.abs(w)) - on
        assert off <= 3.0 * on + 1e-9

    def test_search_is_deterministic_given_rng(self):
        Sigma = np.eye(6) * 0.3
        r1 = refute_restricted_eigenvalue(Sigma, 2, trials=20, rng=np.random.default_rng(5))
        r2 = refute_restricted_eigenvalue(Sigma, 2, trials=20, rng=np.random.default_rng(5))
        assert r1.min_ratio == r2.min_ratio
