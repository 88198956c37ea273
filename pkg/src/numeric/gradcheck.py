from typing import Callable

import numpy as np

from src.core import NumericalError, ParamSet, Tensors, UsageError
from src.numeric.linalg import Vector

# gradients smaller than this are compared in absolute rather than relative terms
RELATIVE_FLOOR = 1e-5


def finite_diff_grad(
    f: Callable[[Vector], float],
    x: Vector,
    eps: float = 1e-5
) -> Vector:
    """
    Central finite-difference gradient ``(f(x + eps e_i) - f(x - eps e_i)) / (2 eps)``.

    :param f: A scalar function of a real vector.
    :param x: The evaluation point.
    :param eps: The step, strictly positive.
    :return: The numerical gradient, same length as ``x``.
    :raise UsageError: If ``eps`` is not positive.
    :raise NumericalError: If ``f`` is non-finite at a probe; the message names the coordinate.
    """

    if eps <= 0.0:
        raise UsageError(f"finite_diff_grad needs eps > 0, got {eps}.")

    x = np.array(x, dtype=np.float64).ravel()
    grad = np.zeros_like(x)

    for i in range(x.size):

        original = x[i]

        x[i] = original + eps
        upper = float(f(x))

        x[i] = original - eps
        lower = float(f(x))

        x[i] = original

        if not (np.isfinite(upper) and np.isfinite(lower)):
            raise NumericalError(f"Non-finite function value probing coordinate {i}.")

        grad[i] = (upper - lower) / (2.0 * eps)

    return grad


def max_relative_error(
    analytic: Vector,
    numeric: Vector,
    floor: float = RELATIVE_FLOOR
) -> float:
    """
    :return: ``max |a - n| / max(|a|, |n|, floor)`` over all coordinates.
    """

    analytic = np.asarray(analytic, dtype=np.float64).ravel()
    numeric = np.asarray(numeric, dtype=np.float64).ravel()

    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)

    return float(np.max(np.abs(analytic - numeric) / scale)) if analytic.size else 0.0


def param_grad_errors(
    loss: Callable[[ParamSet], float],
    params: ParamSet,
    grads: Tensors,
    eps: float = 1e-5
) -> dict[str, float]:
    """
    Compares analytic ``grads`` of ``loss`` against central finite differences, tensor by tensor.

    :param loss: The scalar loss as a function of the model.
    :param params: The model at which gradients were taken; restored unchanged on return.
    :param grads: The analytic gradients by tensor name.
    :param eps: The finite-difference step.
    :return: The maximum relative error of every tensor.
    """

    errors = {}

    for name, analytic in grads.items():

        tensor = params.tensors[name]
        original = tensor.copy()

        def probe(flat: Vector) -> float:
            tensor[...] = flat.reshape(tensor.shape)
            return loss(params)

        numeric = finite_diff_grad(f=probe, x=original.ravel(), eps=eps)
        tensor[...] = original

        errors[name] = max_relative_error(analytic=analytic, numeric=numeric)

    return errors
