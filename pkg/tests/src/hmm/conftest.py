import itertools

import numpy as np
import pytest

from src.core import RandomSource
from src.hmm import DiscreteHmmParams


def random_discrete_hmm(
    n: int,
    vocab_size: int,
    rng: RandomSource
) -> DiscreteHmmParams:
    """
    An HMM with every probability drawn from a flat Dirichlet, so no observation is impossible.
    """

    return DiscreteHmmParams.from_arrays(
        trans=np.stack([rng.dirichlet(alpha=np.ones(n)) for _ in range(n)]),
        emit=np.stack([rng.dirichlet(alpha=np.ones(vocab_size)) for _ in range(n)]),
        pi0=rng.dirichlet(alpha=np.ones(n)),
    )


def enumerate_paths(
    params: DiscreteHmmParams,
    obs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Every state path of ``len(obs)`` steps, in ``itertools.product`` order, with its exact posterior probability.
    """

    paths = np.array(list(itertools.product(range(params.n_states), repeat=len(obs))))
    weights = params.pi0[paths[:, 0]] * params.emit[paths[:, 0], obs[0]]

    for t in range(1, len(obs)):
        weights = weights * params.trans[paths[:, t - 1], paths[:, t]] * params.emit[paths[:, t], obs[t]]

    return paths, weights / weights.sum()


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=13)


@pytest.fixture
def hmm(rng) -> DiscreteHmmParams:
    return random_discrete_hmm(n=3, vocab_size=4, rng=rng.substream(name='fixture'))


@pytest.fixture
def sticky() -> DiscreteHmmParams:
    """
    Two states that rarely switch and mostly emit their own symbol.
    """

    return DiscreteHmmParams.from_arrays(trans=np.array([[0.95, 0.05], [0.05, 0.95]]),
                                         emit=np.array([[0.9, 0.1], [0.1, 0.9]]),
                                         pi0=np.array([0.5, 0.5]))
