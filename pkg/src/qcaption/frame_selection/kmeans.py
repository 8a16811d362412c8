"""Lloyd's k-means with k-means++ seeding and a per-iteration objective trace.

Deterministic for a fixed seed. Empty clusters are re-seeded to the point
farthest from the cluster's previous centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooFewPoints


@dataclass
class KMeansResult:
    assignments: np.ndarray          # (n_points,) int cluster ids
    centroids: np.ndarray            # (k, dim)
    wcss_per_iter: list[float]       # within-cluster sum of squares trace
    n_iter: int


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = _squared_distances(points, centers[:1]).min(axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = int(rng.integers(n))  # all points coincide with a center
        else:
            idx = int(rng.choice(n, p=closest / total))
        centers[j] = points[idx]
        closest = np.minimum(closest, _squared_distances(points, centers[j:j + 1]).min(axis=1))
    return centers


def kmeans(points, k: int, seed: int, max_iter: int = 100,
           tol: float = 1e-6) -> KMeansResult:
    """Cluster points (any array-like of equal-length float vectors)."""
    data = np.asarray(points, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError("points must be a 2-D array of vectors")
    if k < 1:
        raise ValueError("k must be >= 1")
    if data.shape[0] < k:
        raise TooFewPoints(f"{data.shape[0]} points for k={k}")

    rng = np.random.default_rng(seed)
    centroids = _plus_plus_init(data, k, rng)
    assignments = np.zeros(data.shape[0], dtype=int)
    wcss_trace: list[float] = []
    iteration = 0

    for iteration in range(1, max_iter + 1):
        d2 = _squared_distances(data, centroids)
        assignments = d2.argmin(axis=1)
        wcss_trace.append(float(d2[np.arange(data.shape[0]), assignments].sum()))

        new_centroids = centroids.copy()
        used: set[int] = set()
        for j in range(k):
            members = data[assignments == j]
            if len(members):
                new_centroids[j] = members.mean(axis=0)
            else:
                # re-seed to the farthest point from this cluster's centroid
                dist = _squared_distances(data, centroids[j:j + 1])[:, 0]
                order = np.argsort(dist)[::-1]
                pick = next(int(i) for i in order if int(i) not in used)
                used.add(pick)
                new_centroids[j] = data[pick]

        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        if shift < tol:
            break

    # final assignment against the converged centroids
    d2 = _squared_distances(data, centroids)
    assignments = d2.argmin(axis=1)
    wcss_trace.append(float(d2[np.arange(data.shape[0]), assignments].sum()))
    return KMeansResult(assignments=assignments, centroids=centroids,
                        wcss_per_iter=wcss_trace, n_iter=iteration)
