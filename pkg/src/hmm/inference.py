import math

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from src.core import DataError, NumericalError, RandomSource, UsageError
from src.hmm.ContinuousHmmParams import ContinuousHmmParams
from src.hmm.DiscreteHmmParams import DiscreteHmmParams
from src.hmm.kernels import backward_sample, forward_log
from src.numeric import Matrix

HmmParams = DiscreteHmmParams | ContinuousHmmParams
States = NDArray[np.int64]
StateDists = Matrix

LOG_2PI = math.log(2.0 * math.pi)


def _log(values: np.ndarray) -> np.ndarray:

    with np.errstate(divide='ignore'):
        return np.log(values)


def mvn_logpdf(
    points: Matrix,
    mean: np.ndarray,
    cov: Matrix
) -> np.ndarray:
    """
    Multivariate-normal log density of every row of ``points``, computed through the Cholesky factor of ``cov``.

    :raise NumericalError: If ``cov`` is not positive definite.
    """

    try:
        chol = cholesky(cov, lower=True)

    except LinAlgError:
        raise NumericalError("Covariance matrix is not positive definite.") from None

    z = solve_triangular(chol, (points - mean).T, lower=True)

    return -0.5 * np.einsum('dt,dt->t', z, z) - np.log(np.diag(chol)).sum() - 0.5 * mean.shape[0] * LOG_2PI


def emission_log_likelihoods(
    params: HmmParams,
    obs: np.ndarray
) -> Matrix:
    """
    ``log P(y_t | x_t = j)`` for every position and state, ``T x n``.

    :param params: A discrete or continuous HMM.
    :param obs: Character ids for a discrete HMM, a ``T x d`` matrix for a continuous one.
    :return: The log likelihoods; ``-inf`` where a categorical emission has zero probability.
    :raise DataError: If an id is outside the vocabulary or the vector dimension is wrong.
    """

    if isinstance(params, DiscreteHmmParams):

        obs = np.asarray(obs)

        if obs.size and (obs.min() < 0 or obs.max() >= params.vocab_size):
            bad = int(np.argmax((obs < 0) | (obs >= params.vocab_size)))
            raise DataError(f"Observation {int(obs[bad])} at position {bad} is outside the vocabulary "
                            f"of size {params.vocab_size}.")

        return np.ascontiguousarray(_log(params.emit)[:, obs].T)

    obs = np.asarray(obs, dtype=np.float64)

    if obs.ndim != 2 or obs.shape[1] != params.dim:
        raise DataError(f"Observations of shape {obs.shape} do not match emission dimension {params.dim}.")

    return np.ascontiguousarray(np.stack([
        mvn_logpdf(points=obs, mean=params.mu[j], cov=params.sigma[j]) for j in range(params.n_states)
    ], axis=1))


def _filter(
    params: HmmParams,
    log_emit: Matrix
) -> tuple[Matrix, np.ndarray]:

    if log_emit.shape[0] == 0:
        raise UsageError("The HMM filter needs at least one observation.")

    invalid = (np.isnan(log_emit) | np.isposinf(log_emit)).any(axis=1)

    if invalid.any():
        raise NumericalError(f"Emission log likelihoods are invalid at step {int(np.argmax(invalid))}.")

    log_p, log_norm, bad = forward_log(_log(params.pi0), _log(params.trans), log_emit)

    if bad >= 0:
        raise NumericalError(f"Observation at step {bad} has zero probability under the model.")

    return log_p, log_norm


def forward_filter(
    params: HmmParams,
    obs: np.ndarray
) -> StateDists:
    """
    Filtered state distributions ``p_t = P(x_t | y_1..t)``, computed in log space.

    :param params: A discrete or continuous HMM.
    :param obs: The non-empty observation sequence.
    :return: The ``T x n`` distributions, one row per position.
    :raise NumericalError: If an observation has zero probability; the message names the step.
    """

    log_p, _ = _filter(params=params, log_emit=emission_log_likelihoods(params=params, obs=obs))

    return np.exp(log_p)


def next_symbol_distribution(
    params: HmmParams,
    dists: StateDists
) -> Matrix:
    """
    One-step predictive distributions over characters, ``(p_t T) E``, or ``(p_t T) R`` through the character readout
    of a continuous HMM.

    :raise UsageError: If a continuous HMM has no readout.
    """

    table = params.emit if isinstance(params, DiscreteHmmParams) else params.readout

    if table is None:
        raise UsageError(f"{params} has no character readout.")

    return (np.asarray(dists) @ params.trans) @ table


def _check_score_from(length: int, score_from: int) -> None:

    if length < 2:
        raise UsageError(f"Predictive scoring needs at least two observations, got {length}.")

    if not 1 <= score_from < length:
        raise UsageError(f"score_from must lie in [1, {length}), got {score_from}.")


def predictive_loglik(
    params: HmmParams,
    obs: np.ndarray,
    score_from: int = 1
) -> float:
    """
    Mean one-step predictive log likelihood ``ln P(y_t+1 | p_t)`` over positions ``score_from`` onwards.
    The filter runs over the whole sequence, so earlier positions only warm it up. The prediction of a position never
    sees its own observation.

    :param params: A discrete or continuous HMM.
    :param obs: The observation sequence, at least two long.
    :param score_from: The first scored position.
    :return: The mean log likelihood in nats per observation.
    """

    obs = np.asarray(obs)
    _check_score_from(length=obs.shape[0], score_from=score_from)

    # log P(y_t | y_1..t-1) is the filter's normalizer
    _, log_norm = _filter(params=params, log_emit=emission_log_likelihoods(params=params, obs=obs))

    return float(log_norm[score_from:].mean())


def readout_loglik(
    params: ContinuousHmmParams,
    hidden: Matrix,
    ids: np.ndarray,
    score_from: int = 1
) -> float:
    """
    Mean log likelihood of the next character ``ln sum_j (p_t T)_j R[j, c_t+1]``, where ``p_t`` is filtered on the
    LSTM hidden vectors and ``R`` is the readout.

    :param params: A continuous HMM with a readout.
    :param hidden: The ``T x d`` hidden vectors aligned with ``ids``.
    :param ids: The characters.
    :param score_from: The first scored position.
    :return: The mean log likelihood in nats per character.
    :raise DataError: If ``hidden`` and ``ids`` are not aligned.
    """

    ids = np.asarray(ids)

    if hidden.shape[0] != ids.shape[0]:
        raise DataError(f"{hidden.shape[0]} hidden vectors do not align with {ids.shape[0]} characters.")

    _check_score_from(length=ids.shape[0], score_from=score_from)

    predictive = next_symbol_distribution(params=params, dists=forward_filter(params=params, obs=hidden)[:-1])
    chosen = predictive[np.arange(ids.shape[0] - 1), ids[1:]]

    return float(_log(chosen)[score_from - 1:].mean())


def sample_backward(
    params: HmmParams,
    log_p: Matrix,
    rng: RandomSource
) -> States:

    states = backward_sample(log_p, _log(params.trans), rng.uniform(size=log_p.shape[0]))

    if (states < 0).any():
        raise NumericalError(f"No state is possible at step {int(np.argmax(states < 0))} of backward sampling.")

    return states


def ffbs(
    params: HmmParams,
    obs: np.ndarray,
    rng: RandomSource
) -> tuple[States, np.ndarray]:
    """
    Forward filtering backward sampling, returning the sampled states and the filter's log normalizers.
    """

    log_p, log_norm = _filter(params=params, log_emit=emission_log_likelihoods(params=params, obs=obs))

    return sample_backward(params=params, log_p=log_p, rng=rng), log_norm


def ffbs_sample(
    params: HmmParams,
    obs: np.ndarray,
    rng: RandomSource
) -> States:
    """
    Draws a state sequence exactly from ``P(x_1..T | y_1..T)``.

    :param params: A discrete or continuous HMM.
    :param obs: The non-empty observation sequence.
    :param rng: The random source of the backward pass.
    :return: The sampled states.
    :raise NumericalError: If an observation has zero probability; the message names the step.
    """

    return ffbs(params=params, obs=obs, rng=rng)[0]


def sample_hmm(
    params: DiscreteHmmParams,
    length: int,
    rng: RandomSource
) -> tuple[States, np.ndarray]:
    """
    Generates a state path and its emitted character ids from a discrete HMM.

    :param params: The generating model.
    :param length: The sequence length, at least 1.
    :param rng: The random source.
    :return: The states and the observations.
    """

    if length < 1:
        raise UsageError(f"Sampled sequences need length >= 1, got {length}.")

    cum_trans = np.cumsum(params.trans, axis=1)
    cum_emit = np.cumsum(params.emit, axis=1)
    last_state, last_symbol = params.n_states - 1, params.vocab_size - 1

    state_draws = rng.uniform(size=length)
    states = np.empty(length, dtype=np.int64)
    states[0] = min(int(np.searchsorted(np.cumsum(params.pi0), state_draws[0], side='right')), last_state)

    for t in range(1, length):
        row = cum_trans[states[t - 1]]
        states[t] = min(int(np.searchsorted(row, state_draws[t], side='right')), last_state)

    symbol_draws = rng.uniform(size=length)
    obs = np.minimum((symbol_draws[:, None] >= cum_emit[states]).sum(axis=1), last_symbol).astype(np.int64)

    return states, obs
