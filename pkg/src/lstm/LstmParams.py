from abc import ABC
from typing import Any

import numpy as np

from src.core import ParamSet, RandomSource, Tensors

EMBEDDING, W_OUT, B_OUT = 'embedding', 'w_out', 'b_out'

# gate blocks inside the 4h rows of every layer
GATE_INPUT, GATE_FORGET, GATE_CELL, GATE_OUTPUT = 0, 1, 2, 3


def layer_names(layer: int) -> tuple[str, str, str]:
    """
    :return: The names of the input weights, recurrent weights and bias of ``layer``.
    """

    return f"layer{layer}.w_x", f"layer{layer}.w_h", f"layer{layer}.b"


def core_shapes(
    vocab_size: int,
    hidden_dim: int,
    layers: int
) -> dict[str, tuple[int, ...]]:
    """
    Shapes of the embedding and recurrent stack, without any output layer.
    """

    shapes: dict[str, tuple[int, ...]] = {EMBEDDING: (vocab_size, hidden_dim)}

    for layer in range(layers):
        w_x, w_h, b = layer_names(layer=layer)
        shapes[w_x] = (4 * hidden_dim, hidden_dim)
        shapes[w_h] = (4 * hidden_dim, hidden_dim)
        shapes[b] = (4 * hidden_dim,)

    return shapes


def init_core(
    vocab_size: int,
    hidden_dim: int,
    layers: int,
    rng: RandomSource,
    scale: float
) -> Tensors:
    """
    Draws every weight uniformly from ``(-scale, scale)``; biases start at zero except the forget gate at +1.
    """

    tensors = {}

    for name, shape in core_shapes(vocab_size=vocab_size, hidden_dim=hidden_dim, layers=layers).items():

        if name.endswith('.b'):
            bias = np.zeros(shape)
            bias[GATE_FORGET * hidden_dim:(GATE_FORGET + 1) * hidden_dim] = 1.0
            tensors[name] = bias

        else:
            tensors[name] = rng.uniform(low=-scale, high=scale, size=shape)

    return tensors


class RecurrentParams(ParamSet, ABC):
    """
    Common base of every model built on the LSTM stack; ``meta`` carries ``vocab_size``, ``hidden_dim`` and
    ``layers``.
    """

    @property
    def vocab_size(self) -> int:

        return int(self.meta['vocab_size'])

    @property
    def hidden_dim(self) -> int:

        return int(self.meta['hidden_dim'])

    @property
    def layers(self) -> int:

        return int(self.meta['layers'])


class LstmParams(RecurrentParams):
    """
    Parameters of a character-level LSTM language model: a ``V x h`` embedding, ``layers`` LSTM layers with gate
    blocks ordered (input, forget, cell, output), and a ``V x h`` output projection with its bias.
    """

    KIND = 'lstm'

    @classmethod
    def zeros(
        cls,
        vocab_size: int,
        hidden_dim: int,
        layers: int = 1
    ) -> 'LstmParams':

        shapes = core_shapes(vocab_size=vocab_size, hidden_dim=hidden_dim, layers=layers)
        shapes[W_OUT] = (vocab_size, hidden_dim)
        shapes[B_OUT] = (vocab_size,)

        return cls(tensors={name: np.zeros(shape) for name, shape in shapes.items()},
                   meta={'vocab_size': vocab_size, 'hidden_dim': hidden_dim, 'layers': layers})

    @classmethod
    def init(
        cls,
        vocab_size: int,
        hidden_dim: int,
        layers: int,
        rng: RandomSource,
        scale: float = 0.08
    ) -> 'LstmParams':
        """
        Initializes a fresh model: uniform ``(-scale, scale)`` weights, zero biases, forget-gate bias +1.

        :param vocab_size: The vocabulary size ``V``.
        :param hidden_dim: The hidden width ``h``.
        :param layers: The number of stacked layers.
        :param rng: The random source of the initialization.
        :param scale: The half-width of the uniform weight distribution.
        :return: The new ``LstmParams``.
        """

        tensors = init_core(vocab_size=vocab_size, hidden_dim=hidden_dim, layers=layers, rng=rng, scale=scale)
        tensors[W_OUT] = rng.uniform(low=-scale, high=scale, size=(vocab_size, hidden_dim))
        tensors[B_OUT] = np.zeros(vocab_size)

        return cls(tensors=tensors, meta={'vocab_size': vocab_size, 'hidden_dim': hidden_dim, 'layers': layers})

    @classmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> 'LstmParams':

        params = cls(tensors=tensors, meta=meta)

        shapes = core_shapes(vocab_size=params.vocab_size, hidden_dim=params.hidden_dim, layers=params.layers)
        shapes[W_OUT] = (params.vocab_size, params.hidden_dim)
        shapes[B_OUT] = (params.vocab_size,)
        params.expect_shapes(shapes=shapes)

        return params
