import numpy as np

from src.core import UsageError
from src.hybrid.HybridParams import HybridParams
from src.hybrid.joint import joint_hybrid_forward, joint_zero_state
from src.hybrid.JointHybridParams import JointHybridParams
from src.hybrid.sequential import HmmFeatureTrack, hybrid_forward
from src.lstm import EncodedCorpus, Range, zero_state
from src.lstm.model import EVAL_CHUNK
from src.numeric import log_softmax_rows


def eval_hybrid(
    params: HybridParams | JointHybridParams,
    corpus: EncodedCorpus,
    interval: Range,
    track: HmmFeatureTrack | None = None
) -> float:
    """
    Mean log probability, in nats per character, of every next character inside ``interval``, streaming from a fresh
    state at the start of the range.

    The sequential hybrid reads its HMM features from ``track``, which continues the filter across the range start;
    the joint hybrid restarts its own filter from the initial distribution.

    :param params: Sequential or joint hybrid parameters.
    :param corpus: The corpus.
    :param interval: The scored range, at least two characters long.
    :param track: The HMM track of a sequential hybrid.
    :return: The mean predictive log likelihood.
    :raise UsageError: If the range is too short, or a sequential hybrid comes without a track.
    """

    start, stop = interval

    if not 0 <= start <= stop <= len(corpus) or stop - start < 2:
        raise UsageError(f"The range {interval} must lie inside the corpus and hold at least 2 positions.")

    sequential = isinstance(params, HybridParams)

    if sequential and track is None:
        raise UsageError("Evaluating a sequential hybrid needs its HMM track.")

    ids = corpus.ids
    state = zero_state(params=params) if sequential else joint_zero_state(params=params)
    total = 0.0

    for s in range(start, stop - 1, EVAL_CHUNK):

        e = min(s + EVAL_CHUNK, stop - 1)

        if sequential:
            logits, state = hybrid_forward(params=params, ids=ids[s:e], dists=track.rows(start=s, stop=e),
                                           state0=state)

        else:
            logits, state = joint_hybrid_forward(params=params, ids=ids[s:e], state0=state)

        total += float(log_softmax_rows(m=logits)[np.arange(e - s), ids[s + 1:e + 1]].sum())

    return total / (stop - start - 1)
