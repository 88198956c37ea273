import pytest

from src.core import RandomSource, UsageError
from src.harness import excerpt_range, fit_dim_trees, interpretation_report
from src.lstm import LstmParams, extract_hidden_states

from tests.src.hmm.conftest import random_discrete_hmm


@pytest.fixture
def lstm(corpus, rng) -> LstmParams:
    return LstmParams.init(vocab_size=len(corpus.vocab), hidden_dim=4, layers=1, rng=rng, scale=0.5)


def test_excerpt_range(corpus):

    start = corpus.valid_range[0]

    assert excerpt_range(corpus=corpus, length=10) == (start, start + 10)
    assert excerpt_range(corpus=corpus, length=10 ** 6) == (start, len(corpus))

    with pytest.raises(UsageError):
        excerpt_range(corpus=corpus, length=0)


def test_fit_dim_trees(corpus, lstm):

    hidden = extract_hidden_states(params=lstm, corpus=corpus, interval=corpus.train_range)
    trees = fit_dim_trees(corpus=corpus, hidden=hidden, dims=[0, 3], window=4, max_depth=3)

    assert sorted(trees) == [0, 3]
    assert all(tree.window == 4 for tree in trees.values())
    assert len(trees[0].leaves()) <= 2 ** 3

    with pytest.raises(UsageError):
        fit_dim_trees(corpus=corpus, hidden=hidden, dims=[4])


def test_full_report(corpus, lstm, rng):

    hmm = random_discrete_hmm(n=3, vocab_size=len(corpus.vocab), rng=rng)
    document = interpretation_report(corpus=corpus, rng=rng, lstm=lstm, hmm=hmm, clusters=4, excerpt=100,
                                     tree_dims=[1], title='Sample states')

    assert document.startswith('<!DOCTYPE html>')
    assert '<h1>Sample states</h1>' in document
    assert document.count('<pre class="colored">') == 2
    assert 'hidden dimension 1' in document


def test_reproducible(corpus, lstm):

    first = interpretation_report(corpus=corpus, rng=RandomSource(seed=5), lstm=lstm, clusters=3, excerpt=50)
    second = interpretation_report(corpus=corpus, rng=RandomSource(seed=5), lstm=lstm, clusters=3, excerpt=50)

    assert first == second


def test_needs_a_model(corpus, rng):

    with pytest.raises(UsageError):
        interpretation_report(corpus=corpus, rng=rng)


def test_more_labels_than_swatches(corpus, lstm, rng):

    hmm = random_discrete_hmm(n=25, vocab_size=len(corpus.vocab), rng=rng)
    document = interpretation_report(corpus=corpus, rng=rng, lstm=lstm, hmm=hmm, clusters=25, excerpt=300)

    assert document.count('<pre class="colored">') == 2
    assert any(f'<span class="label-{label}">' in document for label in range(20, 25))
