import numpy as np
from numpy.typing import NDArray

from src.core import RandomSource, UsageError
from src.numeric import Matrix, kmeans

Labels = NDArray[np.int64]


def cluster_states(
    hidden: Matrix,
    k: int,
    rng: RandomSource
) -> Labels:
    """
    Labels every LSTM state vector with its k-means cluster.
    """

    return kmeans(points=hidden, k=k, rng=rng)[0]


def hmm_state_labels(dists: Matrix) -> Labels:
    """
    Labels every position with its most probable HMM state, ties going to the lowest state id.
    """

    dists = np.asarray(dists, dtype=np.float64)

    if dists.ndim != 2 or dists.shape[1] == 0:
        raise UsageError(f"State distributions of shape {dists.shape} cannot be labelled.")

    return np.argmax(dists, axis=1).astype(np.int64)
