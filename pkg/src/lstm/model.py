from typing import NamedTuple

import numpy as np
from scipy.special import expit

from src.core import DataError, NumericalError, RandomSource, Tensors, UsageError
from src.lstm.EncodedCorpus import EncodedCorpus, Range
from src.lstm.LstmParams import B_OUT, EMBEDDING, W_OUT, RecurrentParams, layer_names
from src.lstm.Vocab import Ids, Vocab
from src.numeric import Matrix, log_softmax_rows, row_affine, softmax_rows

LayerState = tuple[np.ndarray, np.ndarray]
LstmState = tuple[LayerState, ...]

# positions processed per forward call when streaming over long ranges
EVAL_CHUNK = 4096

# relative slack on the clipping threshold, so clipping an already clipped gradient is a no-op
CLIP_SLACK = 1e-12


class LayerCache(NamedTuple):
    x: Matrix
    hs: Matrix
    cs: Matrix
    gates: Matrix
    tanh_c: Matrix


class CoreCache(NamedTuple):
    ids: Ids
    layers: list[LayerCache]


def zero_state(params: RecurrentParams) -> LstmState:
    """
    :return: The all-zero ``(h, c)`` pair of every layer.
    """

    return tuple((np.zeros(params.hidden_dim), np.zeros(params.hidden_dim)) for _ in range(params.layers))


def check_ids(
    ids: Ids,
    vocab_size: int
) -> Ids:
    """
    :return: ``ids`` as an int64 array.
    :raise DataError: If an id is negative or not below ``vocab_size``; the message names the first position.
    """

    ids = np.asarray(ids, dtype=np.int64)
    bad = (ids < 0) | (ids >= vocab_size)

    if bad.any():
        position = int(np.argmax(bad))
        raise DataError(f"Id {int(ids[position])} at position {position} is outside the vocabulary of {vocab_size}.")

    return ids


def _layer_forward(
    w_x: Matrix,
    w_h: Matrix,
    b: np.ndarray,
    x: Matrix,
    state: LayerState
) -> LayerCache:

    hd = state[0].shape[0]
    steps = x.shape[0]

    z_in = row_affine(x=x, w=w_x, b=b)

    hs = np.empty((steps + 1, hd))
    cs = np.empty((steps + 1, hd))
    hs[0], cs[0] = state

    gates = np.empty((steps, 4 * hd))
    tanh_c = np.empty((steps, hd))

    for t in range(steps):

        z = z_in[t] + w_h @ hs[t]

        act = expit(z)
        act[2 * hd:3 * hd] = np.tanh(z[2 * hd:3 * hd])

        c = act[hd:2 * hd] * cs[t] + act[:hd] * act[2 * hd:3 * hd]
        tc = np.tanh(c)

        cs[t + 1] = c
        hs[t + 1] = act[3 * hd:] * tc
        gates[t] = act
        tanh_c[t] = tc

    return LayerCache(x=x, hs=hs, cs=cs, gates=gates, tanh_c=tanh_c)


def _layer_backward(
    w_x: Matrix,
    w_h: Matrix,
    cache: LayerCache,
    d_out: Matrix
) -> tuple[Matrix, Matrix, np.ndarray, Matrix]:

    steps, hd = cache.tanh_c.shape

    i = cache.gates[:, :hd]
    f = cache.gates[:, hd:2 * hd]
    g = cache.gates[:, 2 * hd:3 * hd]
    o = cache.gates[:, 3 * hd:]
    tc = cache.tanh_c

    dc_from_h = o * (1.0 - tc * tc)
    from_dc = np.stack([g * i * (1.0 - i), cache.cs[:-1] * f * (1.0 - f), i * (1.0 - g * g)], axis=1)
    from_dh = tc * o * (1.0 - o)

    w_h_t = np.ascontiguousarray(w_h.T)

    d_z = np.empty((steps, 4 * hd))
    dh_next = np.zeros(hd)
    dc_next = np.zeros(hd)

    for t in range(steps - 1, -1, -1):

        dh = d_out[t] + dh_next
        dc = dh * dc_from_h[t] + dc_next

        row = d_z[t]
        row[:3 * hd] = (from_dc[t] * dc).ravel()
        row[3 * hd:] = from_dh[t] * dh

        dh_next = w_h_t @ row
        dc_next = dc * f[t]

    return d_z.T @ cache.x, d_z.T @ cache.hs[:-1], d_z.sum(axis=0), d_z @ w_x


def lstm_core_forward(
    params: RecurrentParams,
    ids: Ids,
    state0: LstmState | None = None
) -> tuple[Matrix, CoreCache, LstmState]:
    """
    Runs the embedding and the stacked LSTM layers over ``ids``.

    Cell equations, gates in (input, forget, cell, output) order::

        i, f, o = sigmoid(.)    g = tanh(.)    c_t = f * c_{t-1} + i * g    h_t = o * tanh(c_t)

    :param params: Any model built on the LSTM stack.
    :param ids: The input character ids, nonempty.
    :param state0: The ``(h, c)`` pair of every layer; zeros when ``None``.
    :return: The top-layer hidden states ``T x h``, the cache needed by ``lstm_core_backward()``, and the final state.
    :raise DataError: If an id is outside the vocabulary.
    """

    ids = check_ids(ids=ids, vocab_size=params.vocab_size)

    if ids.size == 0:
        raise UsageError("The LSTM needs at least one input id.")

    state0 = state0 if state0 is not None else zero_state(params=params)

    x = params[EMBEDDING][ids]
    caches = []
    state_t = []

    for layer in range(params.layers):

        w_x, w_h, b = (params[name] for name in layer_names(layer=layer))

        cache = _layer_forward(w_x=w_x, w_h=w_h, b=b, x=x, state=state0[layer])

        caches.append(cache)
        state_t.append((cache.hs[-1].copy(), cache.cs[-1].copy()))

        x = cache.hs[1:]

    return x, CoreCache(ids=ids, layers=caches), tuple(state_t)


def lstm_core_backward(
    params: RecurrentParams,
    cache: CoreCache,
    d_hidden: Matrix
) -> Tensors:
    """
    Backpropagates ``d_hidden``, the loss gradient with respect to the top-layer hidden states, through the stack.
    No gradient flows into the initial state: truncated BPTT.

    :param params: The model used in the forward pass.
    :param cache: The cache returned by ``lstm_core_forward()``.
    :param d_hidden: The ``T x h`` upstream gradient.
    :return: The gradients of the embedding and of every layer tensor.
    """

    grads: Tensors = {}
    d_out = d_hidden

    for layer in range(params.layers - 1, -1, -1):

        w_x_name, w_h_name, b_name = layer_names(layer=layer)

        d_w_x, d_w_h, d_b, d_out = _layer_backward(
            w_x=params[w_x_name], w_h=params[w_h_name], cache=cache.layers[layer], d_out=d_out
        )

        grads[w_x_name] = d_w_x
        grads[w_h_name] = d_w_h
        grads[b_name] = d_b

    d_embedding = np.zeros_like(params[EMBEDDING])
    np.add.at(d_embedding, cache.ids, d_out)
    grads[EMBEDDING] = d_embedding

    return grads


def softmax_cross_entropy(
    features: Matrix,
    targets: Ids,
    w: Matrix,
    b: np.ndarray
) -> tuple[float, Matrix, np.ndarray, Matrix]:
    """
    Mean next-character negative log likelihood of a softmax output layer and its gradients.

    :param features: The ``T x k`` inputs of the output layer.
    :param targets: The ``T`` target ids.
    :param w: The ``V x k`` output weights.
    :param b: The ``V`` output bias.
    :return: The mean NLL and its gradients with respect to ``w``, ``b`` and ``features``.
    """

    steps = features.shape[0]
    rows = np.arange(steps)

    log_p = log_softmax_rows(m=row_affine(x=features, w=w, b=b))
    nll = -float(log_p[rows, targets].mean())

    d_logits = np.exp(log_p)
    d_logits[rows, targets] -= 1.0
    d_logits /= steps

    return nll, d_logits.T @ features, d_logits.sum(axis=0), d_logits @ w


def lstm_forward(
    params: RecurrentParams,
    ids: Ids,
    state0: LstmState | None = None
) -> tuple[Matrix, Matrix, LstmState]:
    """
    Deterministic forward pass of the language model.
    Row ``t`` of the hidden states is the top-layer state after consuming ``ids[t]``; row ``t`` of the logits
    predicts ``ids[t + 1]``. Feeding the returned state into the next call continues the sequence bitwise.

    :param params: The LSTM parameters.
    :param ids: The input ids.
    :param state0: The initial state; zeros when ``None``.
    :return: The ``T x h`` hidden states, the ``T x V`` logits and the final state.
    """

    hidden, _, state_t = lstm_core_forward(params=params, ids=ids, state0=state0)

    return hidden, row_affine(x=hidden, w=params[W_OUT], b=params[B_OUT]), state_t


def lstm_loss_grad(
    params: RecurrentParams,
    ids: Ids,
    state0: LstmState | None = None
) -> tuple[float, Tensors, LstmState]:
    """
    Mean NLL of predicting ``ids[1:]`` from ``ids[:-1]`` and its exact gradients by backpropagation through time.

    :param params: The LSTM parameters.
    :param ids: The id window, at least two long.
    :param state0: The state entering the window; treated as a constant.
    :return: The NLL, the gradient of every tensor, and the state after consuming ``ids[:-1]``.
    :raise UsageError: If the window is shorter than two.
    """

    ids = check_ids(ids=ids, vocab_size=params.vocab_size)

    if ids.size < 2:
        raise UsageError(f"A training window needs at least two ids, got {ids.size}.")

    hidden, cache, state_t = lstm_core_forward(params=params, ids=ids[:-1], state0=state0)

    nll, d_w, d_b, d_hidden = softmax_cross_entropy(features=hidden, targets=ids[1:], w=params[W_OUT],
                                                    b=params[B_OUT])

    grads = lstm_core_backward(params=params, cache=cache, d_hidden=d_hidden)
    grads[W_OUT] = d_w
    grads[B_OUT] = d_b

    return nll, grads, state_t


def global_norm(grads: Tensors) -> float:

    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


def clip_gradients(
    grads: Tensors,
    threshold: float
) -> Tensors:
    """
    Rescales all gradients together when the L2 norm of their concatenation exceeds ``threshold``.

    :param grads: The gradients by tensor name.
    :param threshold: The maximum global norm, strictly positive.
    :return: ``grads`` itself when within the threshold, otherwise a rescaled copy with norm ``threshold``.
    :raise UsageError: If ``threshold`` is not positive.
    """

    if threshold <= 0.0:
        raise UsageError(f"The clipping threshold must be positive, got {threshold}.")

    norm = global_norm(grads=grads)

    if not np.isfinite(norm):
        raise NumericalError("Non-finite gradient norm.")

    if norm <= threshold * (1.0 + CLIP_SLACK):
        return grads

    scale = threshold / norm

    return {name: g * scale for name, g in grads.items()}


def _check_interval(
    corpus: EncodedCorpus,
    interval: Range,
    minimum: int
) -> None:

    start, stop = interval

    if not 0 <= start <= stop <= len(corpus) or stop - start < minimum:
        raise UsageError(f"The range {interval} must lie inside the corpus and hold at least {minimum} positions.")


def eval_loglik(
    params: RecurrentParams,
    corpus: EncodedCorpus,
    interval: Range
) -> float:
    """
    Mean log probability, in nats per character, of every next character inside ``interval``, in one deterministic
    streaming pass that starts from the zero state at the start of the range.

    :param params: The LSTM parameters.
    :param corpus: The corpus.
    :param interval: The scored range, at least two characters long.
    :return: The mean predictive log likelihood.
    """

    _check_interval(corpus=corpus, interval=interval, minimum=2)

    start, stop = interval
    ids = corpus.ids
    state = zero_state(params=params)
    total = 0.0

    for s in range(start, stop - 1, EVAL_CHUNK):

        e = min(s + EVAL_CHUNK, stop - 1)

        hidden, _, state = lstm_core_forward(params=params, ids=ids[s:e], state0=state)
        log_p = log_softmax_rows(m=row_affine(x=hidden, w=params[W_OUT], b=params[B_OUT]))

        total += float(log_p[np.arange(e - s), ids[s + 1:e + 1]].sum())

    return total / (stop - start - 1)


def extract_hidden_states(
    params: RecurrentParams,
    corpus: EncodedCorpus,
    interval: Range
) -> Matrix:
    """
    Top-layer hidden state at every position of ``interval``, streaming from the zero state at its start.

    :param params: Any model built on the LSTM stack.
    :param corpus: The corpus.
    :param interval: The range, nonempty.
    :return: The ``T x h`` hidden states, ``T`` the range length.
    """

    _check_interval(corpus=corpus, interval=interval, minimum=1)

    start, stop = interval
    state = zero_state(params=params)
    chunks = []

    for s in range(start, stop, EVAL_CHUNK):

        hidden, _, state = lstm_core_forward(params=params, ids=corpus.ids[s:min(s + EVAL_CHUNK, stop)],
                                             state0=state)
        chunks.append(hidden)

    return np.concatenate(chunks, axis=0)


def sample_text(
    params: RecurrentParams,
    vocab: Vocab,
    prime: str,
    length: int,
    rng: RandomSource,
    temperature: float = 1.0
) -> str:
    """
    Draws ``length`` characters from the model after priming it with ``prime``.

    :param params: The LSTM parameters.
    :param vocab: The vocabulary of the model.
    :param prime: The nonempty priming text.
    :param length: The number of characters to draw.
    :param rng: The random source of the draws.
    :param temperature: The softmax temperature, strictly positive.
    :return: The drawn characters, without the prime.
    """

    if not prime or temperature <= 0.0:
        raise UsageError("Sampling needs a nonempty prime and a positive temperature.")

    _, logits, state = lstm_forward(params=params, ids=vocab.encode(text=prime))
    last = logits[-1]
    drawn = []

    for _ in range(length):

        p = softmax_rows(m=(last / temperature)[None, :])[0]
        next_id = rng.choice(p=p)
        drawn.append(next_id)

        _, logits, state = lstm_forward(params=params, ids=np.array([next_id]), state0=state)
        last = logits[-1]

    return vocab.decode(ids=drawn)
