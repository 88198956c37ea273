from typing import Iterable

import numpy as np
from numpy.typing import NDArray

from src.core import DataError

Ids = NDArray[np.int64]


class Vocab:
    """
    ``Vocab`` class mapping characters to contiguous integer ids ``0..V-1`` and back.
    Characters are kept in sorted order, so two corpora with the same character set share the same ids.
    """

    @classmethod
    def from_text(cls, text: str) -> 'Vocab':
        """
        Builds the vocabulary of the sorted distinct characters of ``text``.

        :param text: The corpus text.
        :return: The ``Vocab``.
        """

        return cls(chars=sorted(set(text)))

    def __init__(
        self,
        chars: Iterable[str]
    ):
        """
        Initializes the ``Vocab`` from an ordered collection of distinct characters.

        :param chars: The characters, each assigned the id of its position.
        :raise DataError: If a character repeats or an entry is not a single character.
        """

        # public

        self.chars: tuple[str, ...] = tuple(chars)
        self.index: dict[str, int] = {char: i for i, char in enumerate(self.chars)}

        if len(self.index) != len(self.chars) or any(len(char) != 1 for char in self.chars):
            raise DataError("A vocabulary needs distinct single characters.")

    def __str__(self):

        return f"{self.__class__.__name__}(V={len(self)})"

    def __len__(self) -> int:

        return len(self.chars)

    def __eq__(self, other: object) -> bool:

        return isinstance(other, Vocab) and self.chars == other.chars

    def encode(self, text: str) -> Ids:
        """
        :param text: Text made only of characters of this vocabulary.
        :return: The ids of the characters of ``text``.
        :raise DataError: If ``text`` holds a character outside the vocabulary.
        """

        try:
            return np.fromiter((self.index[char] for char in text), dtype=np.int64, count=len(text))

        except KeyError as error:
            raise DataError(f"The character {error.args[0]!r} is not in the vocabulary.") from None

    def decode(self, ids: Iterable[int]) -> str:

        return ''.join(self.chars[int(i)] for i in ids)
