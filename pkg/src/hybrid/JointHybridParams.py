from typing import Any

import numpy as np

from src.core import DataError, RandomSource, Tensors
from src.hmm import DiscreteHmmParams
from src.lstm import RecurrentParams
from src.lstm.LstmParams import B_OUT, W_OUT, core_shapes, init_core
from src.numeric import softmax_rows

TRANS_LOGITS, EMIT_LOGITS, INIT_LOGITS = 'hmm.trans_logits', 'hmm.emit_logits', 'hmm.init_logits'


class JointHybridParams(RecurrentParams):
    """
    Parameters of the joint hybrid: an LSTM stack, an HMM parameterized by unconstrained logits (row softmaxes give
    the transition, emission and initial distributions), and an output layer over ``concat(h_t, p_t)``.
    """

    KIND = 'joint_hybrid'

    @classmethod
    def init(
        cls,
        vocab_size: int,
        hidden_dim: int,
        layers: int,
        n_hmm: int,
        rng: RandomSource,
        scale: float = 0.08
    ) -> 'JointHybridParams':
        """
        Cold start: LSTM weights and output layer uniform in ``(-scale, scale)``, HMM logits uniform in ``(-1, 1)``.
        """

        lstm_rng = rng.substream(name='lstm.init')
        hmm_rng = rng.substream(name='hmm.init')

        tensors = init_core(vocab_size=vocab_size, hidden_dim=hidden_dim, layers=layers, rng=lstm_rng, scale=scale)
        tensors[W_OUT] = lstm_rng.uniform(low=-scale, high=scale, size=(vocab_size, hidden_dim + n_hmm))
        tensors[B_OUT] = np.zeros(vocab_size)
        tensors[TRANS_LOGITS] = hmm_rng.uniform(low=-1.0, high=1.0, size=(n_hmm, n_hmm))
        tensors[EMIT_LOGITS] = hmm_rng.uniform(low=-1.0, high=1.0, size=(n_hmm, vocab_size))
        tensors[INIT_LOGITS] = hmm_rng.uniform(low=-1.0, high=1.0, size=n_hmm)

        return cls.from_tensors(tensors=tensors, meta={
            'vocab_size': vocab_size, 'hidden_dim': hidden_dim, 'layers': layers, 'n_hmm': n_hmm,
        })

    @classmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> 'JointHybridParams':

        params = cls(tensors=tensors, meta=meta)
        v, n = params.vocab_size, params.n_hmm

        if n < 1:
            raise DataError(f"{params} needs at least one HMM state.")

        shapes = core_shapes(vocab_size=v, hidden_dim=params.hidden_dim, layers=params.layers)
        shapes[W_OUT] = (v, params.hidden_dim + n)
        shapes[B_OUT] = (v,)
        shapes[TRANS_LOGITS] = (n, n)
        shapes[EMIT_LOGITS] = (n, v)
        shapes[INIT_LOGITS] = (n,)
        params.expect_shapes(shapes=shapes)

        return params

    @property
    def n_hmm(self) -> int:

        return int(self.meta['n_hmm'])

    def probabilities(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        :return: The transition, emission and initial distributions.
        """

        return (softmax_rows(m=self[TRANS_LOGITS]), softmax_rows(m=self[EMIT_LOGITS]),
                softmax_rows(m=self[INIT_LOGITS][None, :])[0])

    def hmm(self) -> DiscreteHmmParams:
        """
        Exports the HMM part as a ``DiscreteHmmParams``, for the interpretation tools.
        """

        trans, emit, pi0 = self.probabilities()

        # renormalize in case rounding pushed a row sum beyond the simplex tolerance
        return DiscreteHmmParams.from_arrays(trans=trans / trans.sum(axis=1, keepdims=True),
                                             emit=emit / emit.sum(axis=1, keepdims=True), pi0=pi0 / pi0.sum())
