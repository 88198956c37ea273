from typing import Any

import numpy as np

from src.core import DataError, ParamSet, Tensors

TRANS, EMIT, PI0 = 'trans', 'emit', 'pi0'

# tolerance on row sums of stochastic matrices
SIMPLEX_TOL = 1e-10


def check_simplex_rows(
    owner: ParamSet,
    name: str,
    rows: np.ndarray
) -> None:
    """
    :raise DataError: If a row of ``rows`` has a negative entry or does not sum to 1; the message names the row.
    """

    rows = np.atleast_2d(rows)
    bad = (np.abs(rows.sum(axis=1) - 1.0) > SIMPLEX_TOL) | (rows < 0.0).any(axis=1)

    if bad.any():
        raise DataError(f"{owner} tensor {name} row {int(np.argmax(bad))} is not a probability distribution.")


class DiscreteHmmParams(ParamSet):
    """
    Parameters of an HMM with categorical emissions over character ids: an ``n x n`` row-stochastic transition matrix,
    an ``n x V`` row-stochastic emission matrix and the initial state distribution.
    """

    KIND = 'discrete_hmm'

    @classmethod
    def from_arrays(
        cls,
        trans: np.ndarray,
        emit: np.ndarray,
        pi0: np.ndarray
    ) -> 'DiscreteHmmParams':

        emit = np.asarray(emit, dtype=np.float64)

        return cls.from_tensors(tensors={TRANS: trans, EMIT: emit, PI0: pi0},
                                meta={'n_states': emit.shape[0], 'vocab_size': emit.shape[1]})

    @classmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> 'DiscreteHmmParams':

        params = cls(tensors=tensors, meta=meta)
        n, v = params.n_states, params.vocab_size

        params.expect_shapes(shapes={TRANS: (n, n), EMIT: (n, v), PI0: (n,)})

        for name in (TRANS, EMIT, PI0):
            check_simplex_rows(owner=params, name=name, rows=params[name])

        return params

    @property
    def n_states(self) -> int:

        return int(self.meta['n_states'])

    @property
    def vocab_size(self) -> int:

        return int(self.meta['vocab_size'])

    @property
    def trans(self) -> np.ndarray:

        return self.tensors[TRANS]

    @property
    def emit(self) -> np.ndarray:

        return self.tensors[EMIT]

    @property
    def pi0(self) -> np.ndarray:

        return self.tensors[PI0]

    def parameter_count(self) -> int:
        """
        Free parameters of the simplex rows of the transition and emission matrices, ``n(n-1) + n(V-1)``.
        """

        n, v = self.n_states, self.vocab_size

        return n * (n - 1) + n * (v - 1)

    def permuted(self, order: np.ndarray) -> 'DiscreteHmmParams':
        """
        :param order: A permutation of the state ids; new state ``k`` is old state ``order[k]``.
        :return: The same model with its states relabelled.
        """

        order = np.asarray(order)

        return DiscreteHmmParams.from_arrays(trans=self.trans[np.ix_(order, order)], emit=self.emit[order],
                                             pi0=self.pi0[order])
