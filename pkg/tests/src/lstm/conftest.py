import pytest

from src.core import RandomSource
from src.lstm import EncodedCorpus, LstmConfig, LstmParams, encode_corpus

TEXT = 'the cat sat on the mat. ' * 40

SEED = 5


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=SEED)


@pytest.fixture
def corpus() -> EncodedCorpus:
    return encode_corpus(text=TEXT, valid_fraction=0.1)


@pytest.fixture
def config() -> LstmConfig:
    return LstmConfig(hidden_dim=8, bptt_len=20, epochs=3, lr0=0.5)


@pytest.fixture
def params(corpus, rng) -> LstmParams:
    return LstmParams.init(vocab_size=len(corpus.vocab), hidden_dim=6, layers=2, rng=rng, scale=0.5)
