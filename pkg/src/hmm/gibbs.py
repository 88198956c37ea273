import logging
from typing import Literal, NamedTuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky
from scipy.stats import invwishart

from src.core import NumericalError, RandomSource, UsageError, fields
from src.hmm.ContinuousHmmParams import ContinuousHmmParams
from src.hmm.DiscreteHmmParams import DiscreteHmmParams
from src.hmm.HmmHyper import HmmHyper, NiwParams
from src.hmm.inference import HmmParams, States, ffbs
from src.numeric import Matrix, kmeans

logger = logging.getLogger(__name__)

HmmKind = Literal['discrete', 'continuous']

DEFAULT_ITERS = {'discrete': 100, 'continuous': 50}


class GibbsResult(NamedTuple):
    """
    The final sampled parameters, the states they were sampled from and the mean train predictive log likelihood of
    every iteration.
    """

    params: HmmParams
    states: States
    trace: list[float]


def init_states_discrete(
    length: int,
    n: int,
    rng: RandomSource
) -> States:
    """
    Independent uniform initial states.

    :raise UsageError: If ``length`` or ``n`` is below 1.
    """

    if length < 1 or n < 1:
        raise UsageError(f"Initial states need length >= 1 and n >= 1, got length={length}, n={n}.")

    return np.asarray(rng.integers(low=0, high=n, size=length), dtype=np.int64)


def init_states_continuous(
    hidden: Matrix,
    n: int,
    rng: RandomSource
) -> States:
    """
    Initial states from k-means clusters of the hidden vectors.
    """

    return kmeans(points=hidden, k=n, rng=rng)[0]


def count_transitions(
    states: States,
    n: int
) -> np.ndarray:
    """
    :return: The ``n x n`` matrix of counts ``#{t : x_t = i, x_t+1 = j}``.
    """

    states = np.asarray(states, dtype=np.int64)

    return np.bincount(states[:-1] * n + states[1:], minlength=n * n).reshape(n, n).astype(np.float64)


def count_emissions(
    states: States,
    ids: np.ndarray,
    n: int,
    vocab_size: int
) -> np.ndarray:
    """
    :return: The ``n x V`` matrix of counts of state ``i`` emitting symbol ``v``.
    """

    flat = np.asarray(states, dtype=np.int64) * vocab_size + np.asarray(ids, dtype=np.int64)

    return np.bincount(flat, minlength=n * vocab_size).reshape(n, vocab_size).astype(np.float64)


def _sample_dirichlet_rows(
    counts: np.ndarray,
    concentration: float,
    rng: RandomSource
) -> np.ndarray:

    if not concentration > 0.0:
        raise UsageError(f"Dirichlet concentration must be positive, got {concentration}.")

    counts = np.atleast_2d(np.asarray(counts, dtype=np.float64))

    if (counts < 0.0).any():
        raise UsageError("Counts must be non-negative.")

    return np.stack([rng.dirichlet(alpha=row + concentration) for row in counts])


def sample_transitions(
    counts: np.ndarray,
    alpha: float,
    rng: RandomSource
) -> np.ndarray:
    """
    Draws every transition row from its posterior ``Dirichlet(n_i + alpha)``.
    """

    return _sample_dirichlet_rows(counts=counts, concentration=alpha, rng=rng)


def sample_emissions_discrete(
    counts: np.ndarray,
    beta: float,
    rng: RandomSource
) -> np.ndarray:
    """
    Draws every emission row from its posterior ``Dirichlet(counts_i + beta)``.
    """

    return _sample_dirichlet_rows(counts=counts, concentration=beta, rng=rng)


def estimate_pi0(
    first_state: int,
    n: int,
    alpha: float
) -> np.ndarray:
    """
    Add-``alpha`` estimate of the initial distribution from the one sampled initial state.
    """

    pi0 = np.full(n, alpha)
    pi0[first_state] += 1.0

    return pi0 / (1.0 + n * alpha)


def niw_posterior(
    obs: Matrix,
    prior: NiwParams
) -> NiwParams:
    """
    Conjugate NIW update of ``prior`` with the rows of ``obs``; no rows leave the prior unchanged.
    """

    prior.check()
    obs = np.asarray(obs, dtype=np.float64).reshape(-1, prior.mu.shape[0])
    count = obs.shape[0]

    if count == 0:
        return prior

    mean = obs.mean(axis=0)
    centered = obs - mean
    scatter = centered.T @ centered
    shift = mean - prior.mu

    kappa = prior.kappa + count
    psi = prior.psi + scatter + (prior.kappa * count / kappa) * np.outer(shift, shift)

    return NiwParams(mu=(prior.kappa * prior.mu + count * mean) / kappa, kappa=kappa, nu=prior.nu + count,
                     psi=0.5 * (psi + psi.T))


def sample_niw(
    posterior: NiwParams,
    rng: RandomSource
) -> tuple[np.ndarray, Matrix]:
    """
    Draws ``Sigma ~ IW(nu, psi)`` then ``mu ~ N(mu_n, Sigma / kappa)``.

    :raise NumericalError: If ``psi`` or the drawn covariance is not positive definite.
    """

    d = posterior.mu.shape[0]

    try:
        cholesky(posterior.psi, lower=True)

    except LinAlgError:
        raise NumericalError("NIW posterior scale matrix is not positive definite.") from None

    sigma = np.atleast_2d(invwishart.rvs(df=posterior.nu, scale=posterior.psi, random_state=rng.generator))
    sigma = 0.5 * (sigma + sigma.T)

    try:
        chol = cholesky(sigma, lower=True)

    except LinAlgError:
        raise NumericalError("Sampled covariance is not positive definite.") from None

    mu = posterior.mu + chol @ rng.normal(size=d) / np.sqrt(posterior.kappa)

    return mu, sigma.reshape(d, d)


def sample_emissions_continuous(
    obs_by_state: list[Matrix],
    niw: NiwParams,
    rng: RandomSource
) -> tuple[Matrix, np.ndarray]:
    """
    Draws a mean and covariance for every state from its NIW posterior; a state without observations draws from the
    prior.

    :return: The ``n x d`` means and ``n x d x d`` covariances.
    """

    draws = [sample_niw(posterior=niw_posterior(obs=group, prior=niw), rng=rng) for group in obs_by_state]

    return np.stack([mu for mu, _ in draws]), np.stack([sigma for _, sigma in draws])


def fit_readout(
    states: States,
    ids: np.ndarray,
    n: int,
    vocab_size: int,
    beta: float
) -> np.ndarray:
    """
    Posterior-mean categorical readout ``R[j, v]`` of the character consumed at positions in state ``j``.
    """

    if not beta > 0.0:
        raise UsageError(f"beta must be positive, got {beta}.")

    counts = count_emissions(states=states, ids=ids, n=n, vocab_size=vocab_size) + beta

    return counts / counts.sum(axis=1, keepdims=True)


def _sample_params(
    kind: HmmKind,
    obs: np.ndarray,
    states: States,
    n: int,
    vocab_size: int,
    hyper: HmmHyper,
    rng: RandomSource
) -> HmmParams:

    trans = sample_transitions(counts=count_transitions(states=states, n=n), alpha=hyper.alpha, rng=rng)
    pi0 = estimate_pi0(first_state=int(states[0]), n=n, alpha=hyper.alpha)

    if kind == 'discrete':
        emit = sample_emissions_discrete(counts=count_emissions(states=states, ids=obs, n=n, vocab_size=vocab_size),
                                         beta=hyper.beta, rng=rng)

        return DiscreteHmmParams.from_arrays(trans=trans, emit=emit, pi0=pi0)

    mu, sigma = sample_emissions_continuous(obs_by_state=[obs[states == j] for j in range(n)],
                                            niw=hyper.niw.for_dim(dim=obs.shape[1]), rng=rng)

    return ContinuousHmmParams.from_arrays(trans=trans, pi0=pi0, mu=mu, sigma=sigma)


def gibbs_train(
    obs: np.ndarray,
    n: int,
    iters: int,
    hyper: HmmHyper,
    rng: RandomSource,
    kind: HmmKind = 'discrete',
    vocab_size: int | None = None,
    init_hidden: Matrix | None = None,
    readout_ids: np.ndarray | None = None
) -> GibbsResult:
    """
    Blocked Gibbs sampling of an HMM.

    States are initialized uniformly (discrete) or by k-means on ``init_hidden`` (continuous), and parameters are
    drawn from them. Every iteration then samples the states by FFBS and the transitions and emissions from their
    conjugate posteriors. The final sample is returned.

    :param obs: Character ids for a discrete HMM, a ``T x d`` matrix for a continuous one.
    :param n: The number of states.
    :param iters: The number of iterations, at least 1.
    :param hyper: The priors.
    :param rng: The random source; draws from its ``'gibbs.init'``, ``'gibbs.ffbs'`` and ``'gibbs.params'`` substreams.
    :param kind: ``'discrete'`` or ``'continuous'``.
    :param vocab_size: The vocabulary size of a discrete HMM; defaults to the largest id plus one.
    :param init_hidden: The vectors clustered for the continuous initialization.
    :param readout_ids: Characters aligned with a continuous ``obs``; when given, a character readout is fitted on
        the final states.
    :return: The ``GibbsResult``.
    :raise UsageError: If ``iters < 1`` or a continuous HMM lacks ``init_hidden``.
    """

    if iters < 1:
        raise UsageError(f"Gibbs sampling needs at least one iteration, got {iters}.")

    if n < 1:
        raise UsageError(f"An HMM needs at least one state, got {n}.")

    init_rng = rng.substream(name='gibbs.init')
    ffbs_rng = rng.substream(name='gibbs.ffbs')
    params_rng = rng.substream(name='gibbs.params')

    if kind == 'discrete':
        obs = np.asarray(obs, dtype=np.int64)
        vocab_size = int(obs.max()) + 1 if vocab_size is None else vocab_size
        states = init_states_discrete(length=obs.shape[0], n=n, rng=init_rng)

    elif kind == 'continuous':
        if init_hidden is None:
            raise UsageError("A continuous HMM needs init_hidden for its k-means initialization.")

        obs = np.asarray(obs, dtype=np.float64)
        states = init_states_continuous(hidden=init_hidden, n=n, rng=init_rng)

    else:
        raise UsageError(f"Unknown HMM kind {kind!r}.")

    params = _sample_params(kind=kind, obs=obs, states=states, n=n, vocab_size=vocab_size or 0, hyper=hyper,
                            rng=params_rng)
    trace: list[float] = []

    for iteration in range(1, iters + 1):

        states, log_norm = ffbs(params=params, obs=obs, rng=ffbs_rng)
        ll = float(log_norm[1:].mean()) if log_norm.shape[0] > 1 else float(log_norm[0])

        if not np.isfinite(ll):
            raise NumericalError(f"Non-finite train log likelihood at Gibbs iteration {iteration}.")

        trace.append(ll)
        params = _sample_params(kind=kind, obs=obs, states=states, n=n, vocab_size=vocab_size or 0,
                                hyper=hyper, rng=params_rng)

        logger.info("Gibbs iteration finished.", extra=fields(kind=kind, n=n, iteration=iteration, train_ll=ll))

    if kind == 'continuous' and readout_ids is not None:
        readout_vocab = int(np.max(readout_ids)) + 1 if vocab_size is None else vocab_size
        readout = fit_readout(states=states, ids=readout_ids, n=n, vocab_size=readout_vocab, beta=hyper.beta)

        params = ContinuousHmmParams.from_arrays(trans=params.trans, pi0=params.pi0, mu=params.mu,
                                                 sigma=params.sigma, readout=readout)

    return GibbsResult(params=params, states=states, trace=trace)
