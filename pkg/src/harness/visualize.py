import logging

from src.core import RandomSource, UsageError, fields
from src.hmm import DiscreteHmmParams, forward_filter
from src.interpret import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_LEAF,
    DEFAULT_WINDOW,
    ColoredText,
    RegressionTree,
    build_report,
    build_window_samples,
    cluster_states,
    fit_state_dim_tree,
    hmm_state_labels,
    pca_report,
)
from src.lstm import EncodedCorpus, LstmParams, Range, extract_hidden_states
from src.numeric import Matrix

logger = logging.getLogger(__name__)

DEFAULT_EXCERPT = 2000
DEFAULT_CLUSTERS = 10


def excerpt_range(
    corpus: EncodedCorpus,
    length: int
) -> Range:
    """
    The first ``length`` characters of the validation range, or of the corpus when there is no validation range.
    """

    if length < 1:
        raise UsageError(f"The excerpt must hold at least one character, got {length}.")

    start = corpus.valid_range[0] if corpus.valid_range[1] > corpus.valid_range[0] else 0

    return start, min(start + length, len(corpus))


def fit_dim_trees(
    corpus: EncodedCorpus,
    hidden: Matrix,
    dims: list[int],
    window: int = DEFAULT_WINDOW,
    max_depth: int = DEFAULT_MAX_DEPTH,
    min_leaf: int = DEFAULT_MIN_LEAF
) -> dict[int, RegressionTree]:
    """
    Fits one decision tree per hidden dimension in ``dims``, predicting the dimension from the preceding characters.

    :param corpus: The corpus; ``hidden`` row ``t`` belongs to position ``t``.
    :param hidden: The LSTM hidden states of the first ``len(hidden)`` positions.
    :param dims: The hidden dimensions.
    :return: The trees by dimension.
    :raise UsageError: If a dimension is out of range.
    """

    bad = [dim for dim in dims if not 0 <= dim < hidden.shape[1]]

    if bad:
        raise UsageError(f"Hidden dimensions {bad} are outside [0, {hidden.shape[1]}).")

    ids = corpus.ids[:hidden.shape[0]]
    symbols = list(corpus.vocab.chars)

    return {
        dim: fit_state_dim_tree(samples=build_window_samples(ids=ids, targets=hidden[:, dim],
                                                             vocab_size=len(corpus.vocab), window=window),
                                max_depth=max_depth, min_leaf=min_leaf, symbols=symbols)
        for dim in dims
    }


def interpretation_report(
    corpus: EncodedCorpus,
    rng: RandomSource,
    lstm: LstmParams | None = None,
    hmm: DiscreteHmmParams | None = None,
    clusters: int = DEFAULT_CLUSTERS,
    excerpt: int = DEFAULT_EXCERPT,
    tree_dims: list[int] | None = None,
    window: int = DEFAULT_WINDOW,
    max_depth: int = DEFAULT_MAX_DEPTH,
    min_leaf: int = DEFAULT_MIN_LEAF,
    title: str = 'HMM and LSTM states'
) -> str:
    """
    Builds the standalone HTML report of whichever models are given: an excerpt colored by HMM state, the same excerpt
    colored by k-means cluster of the LSTM states, the PCA of the LSTM states and one decision tree per dimension of
    ``tree_dims``.

    States are computed by streaming from the start of the corpus, so the excerpt sees the same context as in
    evaluation.

    :param corpus: The corpus.
    :param rng: The random source; k-means draws from its ``'visualize.kmeans'`` substream.
    :param lstm: The LSTM, if any.
    :param hmm: The discrete HMM, if any.
    :param clusters: The number of k-means clusters.
    :param excerpt: The number of colored characters.
    :param tree_dims: The hidden dimensions explained by trees.
    :return: The HTML document.
    :raise UsageError: If neither model is given.
    """

    if lstm is None and hmm is None:
        raise UsageError("The report needs an LSTM, an HMM, or both.")

    start, stop = excerpt_range(corpus=corpus, length=excerpt)
    text = corpus.text(interval=(start, stop))

    hmm_text = cluster_text = pca = trees = None

    if hmm is not None:
        dists = forward_filter(params=hmm, obs=corpus.ids[:stop])[start:stop]
        hmm_text = ColoredText(chars=text, labels=hmm_state_labels(dists=dists))

    if lstm is not None:
        hidden = extract_hidden_states(params=lstm, corpus=corpus, interval=(0, stop))

        cluster_text = ColoredText(chars=text, labels=cluster_states(hidden=hidden[start:stop], k=clusters,
                                                                     rng=rng.substream(name='visualize.kmeans')))
        pca = pca_report(hidden=hidden)
        trees = fit_dim_trees(corpus=corpus, hidden=hidden, dims=tree_dims or [], window=window,
                              max_depth=max_depth, min_leaf=min_leaf)

    logger.info("Built interpretation report.", extra=fields(excerpt=stop - start, hmm=hmm is not None,
                                                             lstm=lstm is not None, trees=len(trees or {})))

    return build_report(title=title, hmm_text=hmm_text, cluster_text=cluster_text, pca=pca, trees=trees)
