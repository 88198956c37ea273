import pytest

from src.core import RandomSource
from src.hmm import DiscreteHmmParams, HmmHyper, gibbs_train
from src.lstm import EncodedCorpus, LstmConfig, LstmParams, encode_corpus

TEXT = 'abab cdcd abab cdcd ' * 30


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=17)


@pytest.fixture
def corpus() -> EncodedCorpus:
    return encode_corpus(text=TEXT, valid_fraction=0.1)


@pytest.fixture
def config() -> LstmConfig:
    return LstmConfig(hidden_dim=4, bptt_len=25, epochs=2, lr0=0.5)


@pytest.fixture
def lstm(corpus, rng) -> LstmParams:
    return LstmParams.init(vocab_size=len(corpus.vocab), hidden_dim=5, layers=1, rng=rng, scale=0.5)


@pytest.fixture
def hmm(corpus) -> DiscreteHmmParams:
    return gibbs_train(obs=corpus.span(interval=corpus.train_range), n=3, iters=5, hyper=HmmHyper(),
                       rng=RandomSource(seed=1), vocab_size=len(corpus.vocab)).params
