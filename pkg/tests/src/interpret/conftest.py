import numpy as np
import pytest

from src.core import RandomSource
from src.interpret import WindowSamples, build_window_samples
from src.lstm import Vocab

SLASH_ALPHABET = 'ab/c'


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=23)


@pytest.fixture
def slash_samples(rng) -> WindowSamples:
    """
    A random text whose target is 1 right after a '/' and 0 elsewhere.
    """

    vocab = Vocab(chars=sorted(SLASH_ALPHABET))
    ids = rng.integers(low=0, high=len(vocab), size=2000)

    previous = np.concatenate([[-1], ids[:-1]])
    targets = (previous == vocab.index['/']).astype(np.float64)

    return build_window_samples(ids=ids, targets=targets, vocab_size=len(vocab), window=5)


@pytest.fixture
def symbols() -> list[str]:
    return sorted(SLASH_ALPHABET)
