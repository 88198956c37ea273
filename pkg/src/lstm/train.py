import logging
import math
from typing import Any, Callable

import numpy as np

from src.core import NumericalError, ParamSet, RandomSource, Tensors, UsageError, fields
from src.lstm.EncodedCorpus import EncodedCorpus, Range
from src.lstm.LstmConfig import LstmConfig
from src.lstm.LstmParams import LstmParams
from src.lstm.model import clip_gradients, eval_loglik, lstm_loss_grad, zero_state
from src.lstm.TrainTrace import TrainTrace

logger = logging.getLogger(__name__)

# (params, start, stop, state) -> (mean nll over stop - start - 1 predictions, grads, state after the window)
LossGrad = Callable[[Any, int, int, Any], tuple[float, Tensors, Any]]


def should_halve_lr(
    previous_ll: float,
    ll: float
) -> bool:
    """
    The learning-rate rule: halve when the per-character perplexity grew by more than 1,
    ``exp(-l_t) > exp(-l_{t-1}) + 1``.

    :param previous_ll: The mean training log likelihood of the previous epoch.
    :param ll: The mean training log likelihood of the epoch just finished.
    :return: ``True`` if the learning rate must be halved.
    """

    return math.exp(-ll) > math.exp(-previous_ll) + 1.0


class SgdTrainer:
    """
    ``SgdTrainer`` class running plain SGD with batch size 1 over successive BPTT windows of one character stream.

    The recurrent state is carried from window to window and reset at every epoch boundary. Every update is clipped
    to the configured global norm, and the learning rate is halved after an epoch whose training perplexity exceeds
    the previous one by more than 1.
    """

    def __init__(
        self,
        config: LstmConfig
    ):

        # public

        self.config = config

    def __str__(self):

        return f"{self.__class__.__name__}({self.config})"

    def windows(
        self,
        interval: Range
    ) -> list[tuple[int, int]]:
        """
        Splits ``interval`` into windows of ``bptt_len`` predictions; consecutive windows overlap by one position,
        the last target of a window being the first input of the next.

        :param interval: The training range.
        :return: The ``(start, stop)`` of every window.
        """

        start, stop = interval

        return [(s, min(s + self.config.bptt_len + 1, stop)) for s in range(start, stop - 1, self.config.bptt_len)]

    def fit(
        self,
        params: ParamSet,
        loss_grad: LossGrad,
        initial_state: Callable[[], Any],
        interval: Range
    ) -> TrainTrace:
        """
        Trains ``params`` in place for ``config.epochs`` epochs.

        :param params: The model, updated in place.
        :param loss_grad: The loss and gradients of one window, see ``LossGrad``.
        :param initial_state: Builds the state entering the first window of an epoch.
        :param interval: The training range, at least two characters long.
        :return: The ``TrainTrace``, without a validation score.
        :raise UsageError: If the training range is shorter than two characters.
        :raise NumericalError: If the loss becomes non-finite.
        """

        if interval[1] - interval[0] < 2:
            raise UsageError(f"Training needs at least two characters, got range {interval}.")

        windows = self.windows(interval=interval)
        trace = TrainTrace()
        lr = self.config.lr0

        for epoch in range(1, self.config.epochs + 1):

            state = initial_state()
            total_nll = 0.0
            count = 0

            for start, stop in windows:

                nll, grads, state = loss_grad(params, start, stop, state)

                if not np.isfinite(nll):
                    raise NumericalError(f"Non-finite loss in epoch {epoch} at window starting {start}.")

                params.sgd_step(grads=clip_gradients(grads=grads, threshold=self.config.clip_threshold), lr=lr)

                total_nll += nll * (stop - start - 1)
                count += stop - start - 1

            ll = -total_nll / count

            trace.epoch_ll.append(ll)
            trace.epoch_lr.append(lr)

            logger.info("Epoch finished.", extra=fields(model=params.KIND, epoch=epoch, lr=lr, train_ll=ll,
                                                         perplexity=math.exp(-ll)))

            if epoch >= 2 and should_halve_lr(previous_ll=trace.epoch_ll[-2], ll=ll):
                lr /= 2.0
                trace.halvings += 1

                logger.info("Halved the learning rate.", extra=fields(epoch=epoch, lr=lr))

        return trace


def train_lstm(
    config: LstmConfig,
    corpus: EncodedCorpus,
    rng: RandomSource
) -> tuple[LstmParams, TrainTrace]:
    """
    Trains a character-level LSTM on the training range of ``corpus`` and scores it on the validation range.

    :param config: The architecture and optimizer settings.
    :param corpus: The encoded corpus.
    :param rng: The random source; the initialization draws from its ``'lstm.init'`` substream.
    :return: The trained parameters and the ``TrainTrace``.
    """

    params = LstmParams.init(vocab_size=len(corpus.vocab), hidden_dim=config.hidden_dim, layers=config.layers,
                             rng=rng.substream(name='lstm.init'), scale=config.init_scale)

    def loss_grad(p: LstmParams, start: int, stop: int, state):
        return lstm_loss_grad(params=p, ids=corpus.ids[start:stop], state0=state)

    trace = SgdTrainer(config=config).fit(params=params, loss_grad=loss_grad,
                                          initial_state=lambda: zero_state(params=params),
                                          interval=corpus.train_range)

    if corpus.valid_range[1] - corpus.valid_range[0] >= 2:
        trace.final_valid_ll = eval_loglik(params=params, corpus=corpus, interval=corpus.valid_range)

    return params, trace
