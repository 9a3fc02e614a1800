import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fuzzytsfd import Dataset, InvalidArgumentError, MembershipMatrix, grand_mean, squared_euclidean
from fuzzytsfd.core import Centroids

from . import oracles

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_squared_euclidean_345():
    assert squared_euclidean([0, 0], [3, 4]) == 25.0


def test_squared_euclidean_identity(rng):
    x = rng.normal(size=7)
    assert squared_euclidean(x, x) == 0.0


def test_squared_euclidean_matches_loop(rng):
    for _ in range(20):
        a, b = rng.normal(size=5), rng.normal(size=5)
        assert squared_euclidean(a, b) == pytest.approx(oracles.sq_dist(a, b), rel=1e-14)


def test_squared_euclidean_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        squared_euclidean([1, 2], [1, 2, 3])


@given(arrays(float, 4, elements=finite), arrays(float, 4, elements=finite))
def test_squared_euclidean_symmetric(a, b):
    assert squared_euclidean(a, b) == squared_euclidean(b, a)


def test_grand_mean_midpoint():
    assert grand_mean(Dataset([[0, 0], [2, 2]])).tolist() == [1.0, 1.0]


def test_grand_mean_single_point():
    assert grand_mean(Dataset([[3.5, -1.0]])).tolist() == [3.5, -1.0]


def test_grand_mean_ruspini_streaming_sum(ruspini):
    # 4116 / 75 and 6902 / 75, from a running integer sum of the published table
    np.testing.assert_allclose(grand_mean(ruspini), [54.88, 6902 / 75], rtol=1e-15)


def test_grand_mean_empty():
    with pytest.raises(InvalidArgumentError):
        grand_mean(np.empty((0, 2)))


@settings(max_examples=50)
@given(arrays(float, st.tuples(st.integers(1, 12), st.integers(1, 4)), elements=st.floats(-1e3, 1e3)))
def test_grand_mean_duplication_invariant(pts):
    doubled = np.vstack([pts, pts])
    np.testing.assert_allclose(grand_mean(doubled), grand_mean(pts), rtol=1e-12, atol=1e-12)


class TestDataset:
    def test_shapes(self):
        ds = Dataset([[1, 2], [3, 4], [5, 6]], [1, 1, 2])
        assert (ds.n, ds.d, ds.n_labels) == (3, 2, 2)
        assert ds.feature_names == ("x1", "x2")

    def test_immutable(self):
        ds = Dataset([[1.0, 2.0]])
        with pytest.raises(ValueError):
            ds.points[0, 0] = 5.0

    @pytest.mark.parametrize(
        "points, labels",
        [
            ([[1.0, np.nan]], None),
            ([[1.0, np.inf]], None),
            (np.empty((0, 2)), None),
            ([[1.0], [2.0]], [1]),
            ([[1.0], [2.0]], [1.5, 2]),
        ],
    )
    def test_rejects(self, points, labels):
        with pytest.raises(InvalidArgumentError):
            Dataset(points, labels)


class TestMembershipMatrix:
    def test_valid(self):
        u = MembershipMatrix([[0.25, 0.75], [1.0, 0.0]])
        assert (u.n, u.k) == (2, 2)

    @pytest.mark.parametrize(
        "values",
        [
            [[0.5, 0.6]],  # row sum 1.1
            [[1.2, -0.2]],  # outside [0, 1]
            [[1.0]],  # K < 2
            [[0.5, 0.5 + 2e-9]],  # row sum off by more than 1e-9
        ],
    )
    def test_rejects_without_renormalizing(self, values):
        with pytest.raises(InvalidArgumentError):
            MembershipMatrix(values)

    def test_row_sum_tolerance(self):
        MembershipMatrix([[0.5, 0.5 + 5e-10]])


def test_centroids_need_two():
    with pytest.raises(InvalidArgumentError):
        Centroids([[1.0, 2.0]])
