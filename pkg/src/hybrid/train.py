from src.core import RandomSource
from src.hmm import DiscreteHmmParams
from src.hybrid.evaluate import eval_hybrid
from src.hybrid.HybridParams import HybridParams
from src.hybrid.joint import JointState, joint_hybrid_loss_grad, joint_zero_state
from src.hybrid.JointHybridParams import JointHybridParams
from src.hybrid.sequential import HmmFeatureTrack, hybrid_loss_grad, precompute_hmm_track
from src.lstm import EncodedCorpus, LstmConfig, LstmState, SgdTrainer, TrainTrace, zero_state


def _has_validation(corpus: EncodedCorpus) -> bool:

    return corpus.valid_range[1] - corpus.valid_range[0] >= 2


def train_sequential_hybrid(
    config: LstmConfig,
    corpus: EncodedCorpus,
    hmm: DiscreteHmmParams,
    rng: RandomSource,
    track: HmmFeatureTrack | None = None
) -> tuple[HybridParams, TrainTrace]:
    """
    Trains the LSTM and the augmented output layer next to a frozen HMM, with the schedule of ``train_lstm()``.

    :param config: The LSTM settings.
    :param corpus: The encoded corpus.
    :param hmm: The trained discrete HMM; never modified.
    :param rng: The random source.
    :param track: The precomputed HMM track; computed from ``hmm`` when ``None``.
    :return: The trained ``HybridParams`` and the ``TrainTrace``.
    """

    track = track if track is not None else precompute_hmm_track(hmm=hmm, corpus=corpus)

    params = HybridParams.init(vocab_size=len(corpus.vocab), hidden_dim=config.hidden_dim, layers=config.layers,
                               n_hmm=hmm.n_states, rng=rng, scale=config.init_scale)

    def loss_grad(p: HybridParams, start: int, stop: int, state: LstmState):
        return hybrid_loss_grad(params=p, ids=corpus.ids[start:stop], dists=track.rows(start=start, stop=stop),
                                state0=state)

    trace = SgdTrainer(config=config).fit(params=params, loss_grad=loss_grad,
                                          initial_state=lambda: zero_state(params=params),
                                          interval=corpus.train_range)

    if _has_validation(corpus=corpus):
        trace.final_valid_ll = eval_hybrid(params=params, corpus=corpus, interval=corpus.valid_range, track=track)

    return params, trace


def train_joint_hybrid(
    config: LstmConfig,
    corpus: EncodedCorpus,
    n_hmm: int,
    rng: RandomSource
) -> tuple[JointHybridParams, TrainTrace]:
    """
    Trains the LSTM, the HMM logits and the output layer together by SGD on the next-character NLL.

    :param config: The LSTM settings, shared schedule and clipping.
    :param corpus: The encoded corpus.
    :param n_hmm: The number of HMM states.
    :param rng: The random source.
    :return: The trained ``JointHybridParams`` and the ``TrainTrace``.
    """

    params = JointHybridParams.init(vocab_size=len(corpus.vocab), hidden_dim=config.hidden_dim,
                                    layers=config.layers, n_hmm=n_hmm, rng=rng, scale=config.init_scale)

    def loss_grad(p: JointHybridParams, start: int, stop: int, state: JointState):
        return joint_hybrid_loss_grad(params=p, ids=corpus.ids[start:stop], state0=state)

    trace = SgdTrainer(config=config).fit(params=params, loss_grad=loss_grad,
                                          initial_state=lambda: joint_zero_state(params=params),
                                          interval=corpus.train_range)

    if _has_validation(corpus=corpus):
        trace.final_valid_ll = eval_hybrid(params=params, corpus=corpus, interval=corpus.valid_range)

    return params, trace
