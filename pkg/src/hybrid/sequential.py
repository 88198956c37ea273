from typing import NamedTuple

import numpy as np

from src.core import DataError, Tensors, UsageError
from src.hmm import DiscreteHmmParams, forward_filter
from src.hybrid.HybridParams import HybridParams
from src.lstm import (
    EncodedCorpus,
    LstmState,
    check_ids,
    lstm_core_backward,
    lstm_core_forward,
    softmax_cross_entropy,
)
from src.lstm.LstmParams import B_OUT, W_OUT
from src.numeric import Matrix, row_affine


class HmmFeatureTrack(NamedTuple):
    """
    Filtered state distributions of a frozen HMM, row ``t`` aligned with corpus position ``start + t``.
    """

    dists: Matrix
    start: int = 0

    def rows(self, start: int, stop: int) -> Matrix:
        """
        :return: The distributions of corpus positions ``start`` to ``stop``.
        :raise DataError: If the positions are not covered by the track.
        """

        if not self.start <= start <= stop <= self.start + self.dists.shape[0]:
            raise DataError(f"Positions [{start}, {stop}) are outside the HMM track "
                            f"[{self.start}, {self.start + self.dists.shape[0]}).")

        return self.dists[start - self.start:stop - self.start]


def precompute_hmm_track(
    hmm: DiscreteHmmParams,
    corpus: EncodedCorpus
) -> HmmFeatureTrack:
    """
    Runs the frozen HMM's forward filter once over the whole corpus, training and validation contiguously. Row ``t``
    depends on the characters up to ``t`` only.

    :raise DataError: If the HMM was trained on another vocabulary size.
    """

    if hmm.vocab_size != len(corpus.vocab):
        raise DataError(f"{hmm} does not match the corpus vocabulary of {len(corpus.vocab)} characters.")

    return HmmFeatureTrack(dists=forward_filter(params=hmm, obs=corpus.ids))


def _check_dists(
    params: HybridParams,
    dists: Matrix
) -> Matrix:

    dists = np.asarray(dists, dtype=np.float64)

    if dists.ndim != 2 or dists.shape[1] != params.n_hmm:
        raise DataError(f"HMM distributions of shape {dists.shape} do not match {params.n_hmm} states.")

    return dists


def _features(
    hidden: Matrix,
    dists: Matrix
) -> Matrix:

    if dists.shape[0] != hidden.shape[0]:
        raise DataError(f"The HMM track holds {dists.shape[0]} rows for {hidden.shape[0]} positions.")

    return np.concatenate([hidden, dists], axis=1)


def hybrid_forward(
    params: HybridParams,
    ids: np.ndarray,
    dists: Matrix,
    state0: LstmState | None = None
) -> tuple[Matrix, LstmState]:
    """
    ``logits_t = W_out [h_t ; p_t] + b_out``.

    :param params: The hybrid parameters.
    :param ids: The input ids.
    :param dists: The HMM distributions aligned with ``ids``, ``T x n_hmm``.
    :param state0: The LSTM state; zeros when ``None``.
    :return: The ``T x V`` logits and the final LSTM state.
    :raise DataError: If ``dists`` is not aligned with ``ids``.
    """

    dists = _check_dists(params=params, dists=dists)
    hidden, _, state_t = lstm_core_forward(params=params, ids=ids, state0=state0)

    return row_affine(x=_features(hidden=hidden, dists=dists), w=params[W_OUT], b=params[B_OUT]), state_t


def hybrid_loss_grad(
    params: HybridParams,
    ids: np.ndarray,
    dists: Matrix,
    state0: LstmState | None = None
) -> tuple[float, Tensors, LstmState]:
    """
    Mean NLL of predicting ``ids[1:]`` and its gradients; the HMM distributions are constants.

    :param dists: The HMM distributions aligned with ``ids``; the last row is unused.
    """

    ids = check_ids(ids=ids, vocab_size=params.vocab_size)

    if ids.size < 2:
        raise UsageError(f"A training window needs at least two ids, got {ids.size}.")

    dists = _check_dists(params=params, dists=dists)

    if dists.shape[0] != ids.size:
        raise DataError(f"The HMM track holds {dists.shape[0]} rows for a window of {ids.size} ids.")

    hidden, cache, state_t = lstm_core_forward(params=params, ids=ids[:-1], state0=state0)

    nll, d_w, d_b, d_features = softmax_cross_entropy(features=_features(hidden=hidden, dists=dists[:-1]),
                                                      targets=ids[1:], w=params[W_OUT], b=params[B_OUT])

    grads = lstm_core_backward(params=params, cache=cache, d_hidden=d_features[:, :params.hidden_dim])
    grads[W_OUT] = d_w
    grads[B_OUT] = d_b

    return nll, grads, state_t
