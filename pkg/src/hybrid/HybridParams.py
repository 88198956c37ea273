from typing import Any

import numpy as np

from src.core import DataError, RandomSource, Tensors
from src.lstm import LstmParams, RecurrentParams
from src.lstm.LstmParams import B_OUT, W_OUT, core_shapes


class HybridParams(RecurrentParams):
    """
    Parameters of the sequential hybrid: an LSTM whose output layer reads the concatenation of the top hidden state
    and the ``n_hmm`` filtered state probabilities of a frozen HMM.

    ``w_out`` is ``V x (h + n_hmm)``; its first ``h`` columns play the role of the LSTM's own output projection.
    """

    KIND = 'sequential_hybrid'

    @classmethod
    def from_lstm(
        cls,
        lstm: LstmParams,
        hmm_columns: np.ndarray
    ) -> 'HybridParams':
        """
        Augments ``lstm`` with the ``V x n_hmm`` output columns of the HMM features.

        :param lstm: The LSTM whose tensors are copied.
        :param hmm_columns: The extra output columns.
        :return: The new ``HybridParams``.
        """

        hmm_columns = np.asarray(hmm_columns, dtype=np.float64).reshape(lstm.vocab_size, -1)

        tensors = {name: value.copy() for name, value in lstm.tensors.items()}
        tensors[W_OUT] = np.concatenate([lstm[W_OUT], hmm_columns], axis=1)

        return cls.from_tensors(tensors=tensors, meta=dict(lstm.meta, n_hmm=hmm_columns.shape[1]))

    @classmethod
    def init(
        cls,
        vocab_size: int,
        hidden_dim: int,
        layers: int,
        n_hmm: int,
        rng: RandomSource,
        scale: float = 0.08
    ) -> 'HybridParams':
        """
        Initializes the LSTM part exactly as ``LstmParams.init()`` on the ``'lstm.init'`` substream and the HMM
        columns uniformly on the ``'hybrid.init'`` substream.
        """

        lstm = LstmParams.init(vocab_size=vocab_size, hidden_dim=hidden_dim, layers=layers,
                               rng=rng.substream(name='lstm.init'), scale=scale)

        return cls.from_lstm(lstm=lstm, hmm_columns=rng.substream(name='hybrid.init').uniform(
            low=-scale, high=scale, size=(vocab_size, n_hmm)))

    @classmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> 'HybridParams':

        params = cls(tensors=tensors, meta=meta)

        if params.n_hmm < 0:
            raise DataError(f"{params} has a negative HMM state count.")

        shapes = core_shapes(vocab_size=params.vocab_size, hidden_dim=params.hidden_dim, layers=params.layers)
        shapes[W_OUT] = (params.vocab_size, params.hidden_dim + params.n_hmm)
        shapes[B_OUT] = (params.vocab_size,)
        params.expect_shapes(shapes=shapes)

        return params

    @property
    def n_hmm(self) -> int:

        return int(self.meta['n_hmm'])

    @property
    def lstm(self) -> LstmParams:
        """
        The embedded LSTM: every tensor but the HMM columns of the output layer, copied.
        """

        tensors = {name: value.copy() for name, value in self.tensors.items()}
        tensors[W_OUT] = tensors[W_OUT][:, :self.hidden_dim].copy()

        meta = {key: value for key, value in self.meta.items() if key != 'n_hmm'}

        return LstmParams.from_tensors(tensors=tensors, meta=meta)

    @property
    def hmm_columns(self) -> np.ndarray:

        return self[W_OUT][:, self.hidden_dim:]
