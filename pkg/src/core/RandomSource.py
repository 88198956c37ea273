from zlib import crc32

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence

from src.core.errors import UsageError

MAX_SEED = 2 ** 64 - 1


class RandomSource:
    """
    ``RandomSource`` is the only source of randomness in the library.

    It wraps numpy's PCG64 bit generator seeded through a ``SeedSequence``: equal seeds and equal call sequences
    replay bitwise on every platform numpy supports. Consumers never share a stream; each one asks for its own
    ``substream()`` by name, whose spawn key is derived from the CRC-32 of the name, so adding a consumer never
    shifts the draws seen by the others.
    """

    def __init__(
        self,
        seed: int,
        spawn_key: tuple[int, ...] = ()
    ):
        """
        Initializes the ``RandomSource`` from a 64-bit unsigned ``seed``.

        :param seed: The root seed, ``0 <= seed < 2**64``.
        :param spawn_key: The path of substream keys leading to this stream; empty for a root stream.
        :raise UsageError: If the ``seed`` is outside the 64-bit unsigned range.
        """

        if not 0 <= seed <= MAX_SEED:
            raise UsageError(f"The seed {seed} is not a 64-bit unsigned integer.")

        # private

        self._sequence = SeedSequence(entropy=seed, spawn_key=spawn_key)

        # public

        self.seed = seed
        self.spawn_key = spawn_key
        self.generator = Generator(PCG64(self._sequence))

    def __str__(self):

        return f"{self.__class__.__name__}(seed={self.seed}, spawn_key={self.spawn_key})"

    def substream(
        self,
        name: str
    ) -> 'RandomSource':
        """
        Returns the independent child stream registered under ``name``.
        The child depends only on this stream's seed and key path and on ``name``, never on draws already made.

        :param name: The consumer name, e.g. ``'lstm.init'`` or ``'gibbs.ffbs'``.
        :return: The child ``RandomSource``.
        """

        return RandomSource(seed=self.seed, spawn_key=self.spawn_key + (crc32(name.encode('utf-8')),))

    def uniform(
        self,
        low: float = 0.0,
        high: float = 1.0,
        size: int | tuple[int, ...] | None = None
    ) -> np.ndarray | float:

        return self.generator.uniform(low=low, high=high, size=size)

    def integers(
        self,
        low: int,
        high: int,
        size: int | tuple[int, ...] | None = None
    ) -> np.ndarray | int:

        return self.generator.integers(low=low, high=high, size=size)

    def normal(
        self,
        size: int | tuple[int, ...] | None = None
    ) -> np.ndarray | float:

        return self.generator.standard_normal(size=size)

    def dirichlet(
        self,
        alpha: np.ndarray
    ) -> np.ndarray:
        """
        Draws one point of the simplex from ``Dirichlet(alpha)``, renormalized so the entries sum to 1 exactly up to
        rounding.

        :param alpha: The strictly positive concentration vector.
        :return: The sampled probability vector.
        """

        draw = self.generator.dirichlet(alpha=alpha)

        return draw / draw.sum()

    def choice(
        self,
        p: np.ndarray
    ) -> int:
        """
        Draws one index with probabilities ``p``.

        :param p: A probability vector.
        :return: The sampled index.
        """

        return int(self.generator.choice(len(p), p=p))
