from typing import Any

import numpy as np
from scipy.linalg import LinAlgError, cholesky

from src.core import NumericalError, ParamSet, Tensors
from src.hmm.DiscreteHmmParams import PI0, TRANS, check_simplex_rows

MU, SIGMA, READOUT = 'mu', 'sigma', 'readout'


class ContinuousHmmParams(ParamSet):
    """
    Parameters of an HMM with multivariate-normal emissions over ``d``-dimensional vectors (LSTM hidden states):
    transitions, initial distribution, and one mean and covariance per state.

    An optional ``n x V`` ``readout`` gives every state a categorical distribution over the character consumed at
    its position, so the model can also be scored in nats per character.
    """

    KIND = 'continuous_hmm'

    @classmethod
    def from_arrays(
        cls,
        trans: np.ndarray,
        pi0: np.ndarray,
        mu: np.ndarray,
        sigma: np.ndarray,
        readout: np.ndarray | None = None
    ) -> 'ContinuousHmmParams':

        mu = np.asarray(mu, dtype=np.float64)
        tensors = {TRANS: trans, PI0: pi0, MU: mu, SIGMA: sigma}

        if readout is not None:
            tensors[READOUT] = readout

        return cls.from_tensors(tensors=tensors, meta={
            'n_states': mu.shape[0],
            'dim': mu.shape[1],
            'vocab_size': 0 if readout is None else np.shape(readout)[1],
        })

    @classmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> 'ContinuousHmmParams':

        params = cls(tensors=tensors, meta=meta)
        n, d, v = params.n_states, params.dim, params.vocab_size

        shapes = {TRANS: (n, n), PI0: (n,), MU: (n, d), SIGMA: (n, d, d)}

        if v:
            shapes[READOUT] = (n, v)

        params.expect_shapes(shapes=shapes)

        for name in (TRANS, PI0) + ((READOUT,) if v else ()):
            check_simplex_rows(owner=params, name=name, rows=params[name])

        for state in range(n):

            sigma = params[SIGMA][state]

            if not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-12):
                raise NumericalError(f"{params} covariance of state {state} is not symmetric.")

            try:
                cholesky(sigma, lower=True)

            except LinAlgError:
                raise NumericalError(f"{params} covariance of state {state} is not positive definite.") from None

        return params

    @property
    def n_states(self) -> int:

        return int(self.meta['n_states'])

    @property
    def dim(self) -> int:

        return int(self.meta['dim'])

    @property
    def vocab_size(self) -> int:

        return int(self.meta['vocab_size'])

    @property
    def trans(self) -> np.ndarray:

        return self.tensors[TRANS]

    @property
    def pi0(self) -> np.ndarray:

        return self.tensors[PI0]

    @property
    def mu(self) -> np.ndarray:

        return self.tensors[MU]

    @property
    def sigma(self) -> np.ndarray:

        return self.tensors[SIGMA]

    @property
    def readout(self) -> np.ndarray | None:

        return self.tensors.get(READOUT)

    def parameter_count(self) -> int:
        """
        ``n(n-1)`` transition, ``n d`` mean and ``n d(d+1)/2`` covariance parameters, plus ``n(V-1)`` for the readout.
        """

        n, d, v = self.n_states, self.dim, self.vocab_size

        return n * (n - 1) + n * d + n * d * (d + 1) // 2 + (n * (v - 1) if v else 0)
