from abc import ABC, abstractmethod
from typing import Any, Self

import numpy as np

from src.core.errors import DataError, NumericalError

Tensors = dict[str, np.ndarray]


class ParamSet(ABC):
    """
    ``ParamSet`` class for every model that can be trained, counted and checkpointed.
    A model is an ordered bundle of named float64 tensors plus a small JSON-friendly ``meta`` mapping describing its
    architecture. Each ``ParamSet`` implementation must declare its ``KIND`` and implement ``from_tensors()``.
    """

    KIND: str = ''

    def __init__(
        self,
        tensors: Tensors,
        meta: dict[str, Any]
    ):
        """
        Initializes the ``ParamSet`` with its named ``tensors`` and architecture ``meta``.

        :param tensors: The named tensors, converted to C-contiguous float64 arrays.
        :param meta: The JSON-friendly architecture description echoed into checkpoints.
        """

        # public

        self.tensors: Tensors = {
            name: np.ascontiguousarray(value, dtype=np.float64) for name, value in tensors.items()
        }
        self.meta = dict(meta)

    def __str__(self):

        return f"{self.__class__.__name__}({', '.join(f'{k}={v}' for k, v in self.meta.items())})"

    def __getitem__(
        self,
        name: str
    ) -> np.ndarray:

        return self.tensors[name]

    @classmethod
    @abstractmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> Self:
        """
        Rebuilds the model from named ``tensors`` and ``meta``, validating shapes.

        :param tensors: The named tensors.
        :param meta: The architecture description.
        :return: The rebuilt model.
        :raise DataError: If a tensor is missing or has the wrong shape.
        """

        ...

    def expect_shapes(
        self,
        shapes: dict[str, tuple[int, ...]]
    ) -> None:
        """
        Checks that exactly the expected tensors are present with the expected shapes.

        :param shapes: The expected shape of every tensor by name.
        :return: ``None``
        :raise DataError: If a tensor is missing, unexpected, or has the wrong shape.
        """

        if set(shapes) != set(self.tensors):
            raise DataError(f"{self} expects tensors {sorted(shapes)}, got {sorted(self.tensors)}.")

        for name, shape in shapes.items():
            if self.tensors[name].shape != shape:
                raise DataError(f"{self} tensor {name} has shape {self.tensors[name].shape}, expected {shape}.")

    def check_finite(self) -> None:
        """
        :raise NumericalError: If any tensor holds a NaN or an infinity.
        """

        for name, value in self.tensors.items():
            if not np.isfinite(value).all():
                raise NumericalError(f"{self} tensor {name} holds non-finite values.")

    def copy(self) -> Self:

        return self.from_tensors(tensors={k: v.copy() for k, v in self.tensors.items()}, meta=self.meta)

    def size(self) -> int:
        """
        :return: The total number of scalars held by the tensors.
        """

        return int(sum(value.size for value in self.tensors.values()))

    def parameter_count(self) -> int:
        """
        Returns the number of free trainable scalars. Defaults to every scalar; constrained models override it.

        :return: The parameter count.
        """

        return self.size()

    def sgd_step(
        self,
        grads: Tensors,
        lr: float
    ) -> None:
        """
        Applies one in-place plain SGD update ``theta <- theta - lr * grad`` for every tensor in ``grads``.

        :param grads: The gradients by tensor name.
        :param lr: The learning rate.
        :return: ``None``
        """

        for name, grad in grads.items():
            self.tensors[name] -= lr * grad
