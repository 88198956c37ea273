import numpy as np
import pytest

from src.core import DataError, UsageError
from src.lstm import EncodedCorpus, Vocab, encode_corpus


def test_split_holds_out_the_tail():

    corpus = encode_corpus(text='abcdefghij', valid_fraction=0.25)

    assert corpus.train_range == (0, 7)
    assert corpus.valid_range == (7, 10)
    assert corpus.text(interval=corpus.valid_range) == 'hij'
    assert corpus.text() == 'abcdefghij'


def test_span(corpus):

    assert np.array_equal(corpus.span(interval=(0, 3)), corpus.vocab.encode(text='the'))


def test_empty_text():

    with pytest.raises(DataError):
        encode_corpus(text='', valid_fraction=0.1)


def test_no_training_left():

    with pytest.raises(DataError):
        encode_corpus(text='a', valid_fraction=0.5)


@pytest.mark.parametrize('valid_fraction', [0.0, 1.0, -0.1])
def test_valid_fraction_range(valid_fraction):

    with pytest.raises(UsageError):
        encode_corpus(text='abc', valid_fraction=valid_fraction)


def test_invariants():

    vocab = Vocab(chars='ab')

    with pytest.raises(DataError):
        EncodedCorpus(ids=np.array([0, 2]), vocab=vocab, train_range=(0, 1), valid_range=(1, 2))

    with pytest.raises(DataError):
        EncodedCorpus(ids=np.array([0, 1, 1]), vocab=vocab, train_range=(0, 1), valid_range=(2, 3))
