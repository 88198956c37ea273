import logging

import numpy as np
from numpy.typing import NDArray

from src.core import NumericalError, RandomSource, UsageError, fields
from src.numeric.linalg import Matrix

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERS = 100

# slack allowed on the SSE monotonicity check for rounding in the distance expansion
SSE_SLACK = 1e-9


def squared_distances(
    points: Matrix,
    centroids: Matrix
) -> Matrix:
    """
    Squared Euclidean distances between every point and every centroid, ``T x k``.
    """

    d2 = (
        np.einsum('td,td->t', points, points)[:, None]
        - 2.0 * points @ centroids.T
        + np.einsum('kd,kd->k', centroids, centroids)[None, :]
    )

    return np.maximum(d2, 0.0)


def _seed_plus_plus(
    points: Matrix,
    k: int,
    rng: RandomSource
) -> Matrix:
    """
    k-means++ seeding: the first centroid uniformly, every next one with probability proportional to the squared
    distance to the nearest centroid chosen so far. Once every point coincides with a chosen centroid, the remaining
    centroids are drawn uniformly among the points not chosen yet.
    """

    n_points = points.shape[0]

    chosen = [int(rng.integers(low=0, high=n_points))]
    nearest = ((points - points[chosen[0]]) ** 2).sum(axis=1)

    while len(chosen) < k:

        total = nearest.sum()

        if total > 0.0:
            index = rng.choice(p=nearest / total)

        else:
            remaining = np.setdiff1d(np.arange(n_points), np.asarray(chosen))
            index = int(remaining[rng.integers(low=0, high=len(remaining))])

        chosen.append(index)
        nearest = np.minimum(nearest, ((points - points[index]) ** 2).sum(axis=1))

    return points[np.asarray(chosen)].copy()


def _cluster_means(
    points: Matrix,
    assignments: NDArray[np.int64],
    k: int
) -> Matrix:

    counts = np.bincount(assignments, minlength=k).astype(np.float64)
    sums = np.stack([np.bincount(assignments, weights=points[:, j], minlength=k) for j in range(points.shape[1])],
                    axis=1)

    return sums / counts[:, None]


def _reseed_empty(
    points: Matrix,
    centroids: Matrix,
    assignments: NDArray[np.int64],
    distances: NDArray[np.float64],
    k: int
) -> None:
    """
    Moves every empty centroid onto the point farthest from its current centroid, in place.
    Points that are the only member of their cluster are never taken, so no new cluster empties.
    """

    counts = np.bincount(assignments, minlength=k)

    for empty in np.flatnonzero(counts == 0):

        candidates = np.where(counts[assignments] > 1, distances, -1.0)
        far = int(np.argmax(candidates))

        counts[assignments[far]] -= 1
        counts[empty] += 1

        assignments[far] = empty
        distances[far] = 0.0
        centroids[empty] = points[far]

        logger.debug("Reseeded an empty k-means cluster.", extra=fields(cluster=int(empty), point=far))


def kmeans(
    points: Matrix,
    k: int,
    rng: RandomSource,
    max_iters: int = DEFAULT_MAX_ITERS
) -> tuple[NDArray[np.int64], Matrix]:
    """
    Lloyd's algorithm with k-means++ seeding.
    Stops after ``max_iters`` iterations or as soon as an iteration leaves every assignment unchanged. The
    within-cluster sum of squares is checked to be non-increasing after every iteration.

    :param points: The ``T x d`` points.
    :param k: The number of clusters, ``1 <= k <= T``.
    :param rng: The random source used for seeding.
    :param max_iters: The iteration budget.
    :return: The assignment of every point and the ``k x d`` centroids.
    :raise UsageError: If ``k`` is out of range or the points have no columns.
    :raise NumericalError: If the sum of squares increases, which signals non-finite input.
    """

    points = np.asarray(points, dtype=np.float64)

    if points.ndim != 2 or points.shape[1] == 0:
        raise UsageError(f"kmeans needs points with at least one column, got shape {points.shape}.")

    if not 1 <= k <= points.shape[0]:
        raise UsageError(f"kmeans needs 1 <= k <= T, got k={k} for T={points.shape[0]}.")

    if not np.isfinite(points).all():
        raise NumericalError("kmeans points hold non-finite values.")

    centroids = _seed_plus_plus(points=points, k=k, rng=rng)

    assignments: NDArray[np.int64] | None = None
    previous_sse = np.inf

    for iteration in range(max(1, max_iters)):

        d2 = squared_distances(points=points, centroids=centroids)

        updated = np.argmin(d2, axis=1).astype(np.int64)
        distances = d2[np.arange(points.shape[0]), updated]

        _reseed_empty(points=points, centroids=centroids, assignments=updated, distances=distances, k=k)

        converged = assignments is not None and np.array_equal(updated, assignments)
        assignments = updated

        centroids = _cluster_means(points=points, assignments=assignments, k=k)
        sse = float(((points - centroids[assignments]) ** 2).sum())

        if sse > previous_sse * (1.0 + SSE_SLACK) + SSE_SLACK:
            raise NumericalError(f"k-means SSE increased at iteration {iteration}: {previous_sse} -> {sse}.")

        previous_sse = sse

        if converged:
            break

    logger.debug("k-means finished.", extra=fields(k=k, iterations=iteration + 1, sse=previous_sse))

    return assignments, centroids


def within_cluster_sse(
    points: Matrix,
    assignments: NDArray[np.int64],
    centroids: Matrix
) -> float:

    return float(((np.asarray(points, dtype=np.float64) - centroids[assignments]) ** 2).sum())
