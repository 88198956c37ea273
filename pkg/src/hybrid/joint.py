from typing import NamedTuple

import numpy as np

from src.core import NumericalError, Tensors, UsageError
from src.hybrid.JointHybridParams import EMIT_LOGITS, INIT_LOGITS, TRANS_LOGITS, JointHybridParams
from src.lstm import Ids, LstmState, check_ids, lstm_core_backward, lstm_core_forward, softmax_cross_entropy, zero_state
from src.lstm.LstmParams import B_OUT, W_OUT
from src.numeric import Matrix, row_affine

# LSTM state and the filtered HMM distribution carried across windows; None starts the filter from pi0
JointState = tuple[LstmState, np.ndarray | None]


class FilterCache(NamedTuple):
    ids: Ids
    p0: np.ndarray | None
    priors: Matrix
    dists: Matrix
    norms: np.ndarray


def joint_zero_state(params: JointHybridParams) -> JointState:

    return zero_state(params=params), None


def joint_filter(
    trans: Matrix,
    emit: Matrix,
    pi0: np.ndarray,
    ids: Ids,
    p0: np.ndarray | None = None
) -> FilterCache:
    """
    Differentiable linear-space forward filter: ``p_t ∝ (p_t-1 T) * E[:, y_t]``, starting from ``pi0`` or from the
    carried distribution ``p0``.

    :raise NumericalError: If an observation has zero probability; the message names the step.
    """

    steps, n = ids.shape[0], trans.shape[0]

    priors = np.empty((steps, n))
    dists = np.empty((steps, n))
    norms = np.empty(steps)
    previous = p0

    for t in range(steps):

        prior = pi0 if previous is None else previous @ trans
        joint = prior * emit[:, ids[t]]
        norm = joint.sum()

        if not norm > 0.0:
            raise NumericalError(f"Observation at step {t} has zero probability under the joint HMM.")

        priors[t] = prior
        dists[t] = joint / norm
        norms[t] = norm
        previous = dists[t]

    return FilterCache(ids=ids, p0=p0, priors=priors, dists=dists, norms=norms)


def joint_filter_backward(
    trans: Matrix,
    emit: Matrix,
    cache: FilterCache,
    d_dists: Matrix
) -> tuple[Matrix, Matrix, np.ndarray]:
    """
    Backpropagates ``d_dists`` through ``joint_filter()``. The carried ``p0`` is a constant.

    :return: The gradients with respect to the transition, emission and initial distributions.
    """

    steps, n = cache.dists.shape

    d_trans = np.zeros_like(trans)
    d_emit = np.zeros_like(emit)
    d_pi0 = np.zeros(n)
    d_carry = np.zeros(n)

    for t in range(steps - 1, -1, -1):

        d_p = d_dists[t] + d_carry
        p = cache.dists[t]
        symbol = cache.ids[t]

        d_joint = (d_p - d_p @ p) / cache.norms[t]
        d_prior = d_joint * emit[:, symbol]
        d_emit[:, symbol] += d_joint * cache.priors[t]

        if t > 0:
            d_trans += np.outer(cache.dists[t - 1], d_prior)
            d_carry = trans @ d_prior

        elif cache.p0 is not None:
            d_trans += np.outer(cache.p0, d_prior)

        else:
            d_pi0 += d_prior

    return d_trans, d_emit, d_pi0


def softmax_rows_backward(
    probs: Matrix,
    d_probs: Matrix
) -> Matrix:
    """
    Gradient with respect to the logits of row softmaxes, given the gradient with respect to the probabilities.
    """

    return probs * (d_probs - (d_probs * probs).sum(axis=-1, keepdims=True))


def joint_hybrid_forward(
    params: JointHybridParams,
    ids: Ids,
    state0: JointState | None = None
) -> tuple[Matrix, JointState]:
    """
    ``logits_t = W_out [h_t ; p_t] + b_out`` where ``p_t`` is filtered by the HMM part from ``ids[:t+1]``.

    :param params: The joint hybrid parameters.
    :param ids: The input ids, nonempty.
    :param state0: The carried LSTM state and HMM distribution; a fresh start when ``None``.
    :return: The ``T x V`` logits and the state after the last id.
    """

    ids = check_ids(ids=ids, vocab_size=params.vocab_size)
    lstm_state, p0 = state0 if state0 is not None else joint_zero_state(params=params)

    hidden, _, state_t = lstm_core_forward(params=params, ids=ids, state0=lstm_state)

    trans, emit, pi0 = params.probabilities()
    cache = joint_filter(trans=trans, emit=emit, pi0=pi0, ids=ids, p0=p0)

    logits = row_affine(x=np.concatenate([hidden, cache.dists], axis=1), w=params[W_OUT], b=params[B_OUT])

    return logits, (state_t, cache.dists[-1].copy())


def joint_hybrid_loss_grad(
    params: JointHybridParams,
    ids: Ids,
    state0: JointState | None = None
) -> tuple[float, Tensors, JointState]:
    """
    Mean NLL of predicting ``ids[1:]`` and its exact gradients with respect to every tensor, the HMM logits included.
    The carried state is a constant: gradients stop at the window boundary for the filter as for the LSTM.

    :param params: The joint hybrid parameters.
    :param ids: The id window, at least two long.
    :param state0: The carried state; a fresh start when ``None``.
    :return: The NLL, the gradients and the state after consuming ``ids[:-1]``.
    """

    ids = check_ids(ids=ids, vocab_size=params.vocab_size)

    if ids.size < 2:
        raise UsageError(f"A training window needs at least two ids, got {ids.size}.")

    lstm_state, p0 = state0 if state0 is not None else joint_zero_state(params=params)
    inputs = ids[:-1]

    hidden, core_cache, state_t = lstm_core_forward(params=params, ids=inputs, state0=lstm_state)

    trans, emit, pi0 = params.probabilities()
    cache = joint_filter(trans=trans, emit=emit, pi0=pi0, ids=inputs, p0=p0)

    nll, d_w, d_b, d_features = softmax_cross_entropy(features=np.concatenate([hidden, cache.dists], axis=1),
                                                      targets=ids[1:], w=params[W_OUT], b=params[B_OUT])

    h = params.hidden_dim

    grads = lstm_core_backward(params=params, cache=core_cache, d_hidden=d_features[:, :h])
    grads[W_OUT] = d_w
    grads[B_OUT] = d_b

    d_trans, d_emit, d_pi0 = joint_filter_backward(trans=trans, emit=emit, cache=cache, d_dists=d_features[:, h:])

    grads[TRANS_LOGITS] = softmax_rows_backward(probs=trans, d_probs=d_trans)
    grads[EMIT_LOGITS] = softmax_rows_backward(probs=emit, d_probs=d_emit)
    grads[INIT_LOGITS] = softmax_rows_backward(probs=pi0, d_probs=d_pi0)

    return nll, grads, (state_t, cache.dists[-1].copy())
