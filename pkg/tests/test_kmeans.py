"""Clustering: analytic optima, blob separation, and the objective trace."""

import numpy as np
import pytest

from qcaption.errors import TooFewPoints
from qcaption.frame_selection import kmeans


def two_blobs(rng, n_per=20):
    a = rng.normal(0.0, 0.4, (n_per, 2)) + np.array([0.0, 0.0])
    b = rng.normal(0.0, 0.4, (n_per, 2)) + np.array([10.0, 10.0])
    points = np.vstack([a, b])
    labels = np.array([0] * n_per + [1] * n_per)
    return points, labels


class TestKMeans:
    def test_k1_is_mean(self):
        rng = np.random.default_rng(0)
        points = rng.normal(0, 1, (30, 3))
        result = kmeans(points, k=1, seed=0)
        assert np.allclose(result.centroids[0], points.mean(axis=0), atol=1e-9)
        assert set(result.assignments) == {0}

    def test_k_equals_points(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0]])
        result = kmeans(points, k=4, seed=3)
        assert sorted(result.assignments) == [0, 1, 2, 3]
        assert result.wcss_per_iter[-1] == pytest.approx(0.0, abs=1e-12)

    def test_separated_blobs_recovered_over_seeds(self):
        rng = np.random.default_rng(123)
        points, labels = two_blobs(rng)
        for seed in range(10):
            result = kmeans(points, k=2, seed=seed)
            # assignments must match blob labels up to cluster relabeling
            first_cluster = result.assignments[labels == 0]
            second_cluster = result.assignments[labels == 1]
            assert len(set(first_cluster)) == 1
            assert len(set(second_cluster)) == 1
            assert first_cluster[0] != second_cluster[0]

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            kmeans([[0.0], [1.0]], k=3, seed=0)

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(4)
        points = rng.normal(0, 1, (40, 5))
        a = kmeans(points, k=4, seed=11)
        b = kmeans(points, k=4, seed=11)
        assert np.array_equal(a.assignments, b.assignments)
        assert np.array_equal(a.centroids, b.centroids)

    def test_wcss_non_increasing(self):
        rng = np.random.default_rng(8)
        points = rng.normal(0, 1, (60, 4))
        for seed in range(5):
            trace = kmeans(points, k=5, seed=seed).wcss_per_iter
            assert all(later <= earlier + 1e-9
                       for earlier, later in zip(trace, trace[1:]))

    def test_duplicate_points_allowed(self):
        points = [[1.0, 1.0]] * 6 + [[5.0, 5.0]] * 6
        result = kmeans(points, k=2, seed=0)
        assert result.wcss_per_iter[-1] == pytest.approx(0.0, abs=1e-12)
