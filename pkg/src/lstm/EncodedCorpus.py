import math

import numpy as np

from src.core import DataError, UsageError
from src.lstm.Vocab import Ids, Vocab

Range = tuple[int, int]


class EncodedCorpus:
    """
    ``EncodedCorpus`` class holding a character corpus as ids, with a contiguous train/validation split.
    Ranges are half-open ``(start, stop)`` position intervals; training comes first, validation is the tail.
    """

    def __init__(
        self,
        ids: Ids,
        vocab: Vocab,
        train_range: Range,
        valid_range: Range
    ):
        """
        Initializes the ``EncodedCorpus`` and checks its invariants.

        :param ids: The id of every character of the corpus.
        :param vocab: The vocabulary the ids refer to.
        :param train_range: The training interval, starting at 0.
        :param valid_range: The validation interval, starting where training stops and ending at the corpus end.
        :raise DataError: If an id is outside the vocabulary or the ranges do not tile the corpus.
        """

        # public

        self.ids = np.ascontiguousarray(ids, dtype=np.int64)
        self.vocab = vocab
        self.train_range = (int(train_range[0]), int(train_range[1]))
        self.valid_range = (int(valid_range[0]), int(valid_range[1]))

        if self.ids.size and (self.ids.min() < 0 or self.ids.max() >= len(vocab)):
            raise DataError(f"Corpus ids must lie in [0, {len(vocab)}).")

        if not (self.train_range[0] == 0 <= self.train_range[1] == self.valid_range[0] <= self.valid_range[1]
                == len(self.ids)):
            raise DataError(f"Ranges {self.train_range} and {self.valid_range} do not tile {len(self.ids)} ids.")

    def __str__(self):

        return f"{self.__class__.__name__}(T={len(self.ids)}, V={len(self.vocab)}, valid={self.valid_range})"

    def __len__(self) -> int:

        return len(self.ids)

    @property
    def full_range(self) -> Range:

        return 0, len(self.ids)

    def span(self, interval: Range) -> Ids:
        """
        :param interval: A half-open position interval.
        :return: The ids inside ``interval``.
        """

        return self.ids[interval[0]:interval[1]]

    def text(self, interval: Range | None = None) -> str:

        return self.vocab.decode(self.span(interval=interval or self.full_range))


def encode_corpus(
    text: str,
    valid_fraction: float
) -> EncodedCorpus:
    """
    Encodes ``text`` over its own sorted character set and holds out the last ``ceil(valid_fraction * T)``
    characters for validation.

    :param text: The corpus text, nonempty.
    :param valid_fraction: The validation share, strictly between 0 and 1.
    :return: The ``EncodedCorpus``.
    :raise DataError: If ``text`` is empty or too short to leave any training characters.
    :raise UsageError: If ``valid_fraction`` is not strictly between 0 and 1.
    """

    if not text:
        raise DataError("Cannot encode an empty corpus.")

    if not 0.0 < valid_fraction < 1.0:
        raise UsageError(f"valid_fraction must lie strictly between 0 and 1, got {valid_fraction}.")

    vocab = Vocab.from_text(text=text)
    total = len(text)
    n_valid = math.ceil(valid_fraction * total)

    if n_valid >= total:
        raise DataError(f"A corpus of {total} characters leaves no training data at valid_fraction={valid_fraction}.")

    split = total - n_valid

    return EncodedCorpus(ids=vocab.encode(text=text), vocab=vocab, train_range=(0, split), valid_range=(split, total))
