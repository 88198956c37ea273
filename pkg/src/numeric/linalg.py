import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp as _scipy_logsumexp

from src.core.errors import NumericalError, UsageError

Matrix = NDArray[np.float64]
Vector = NDArray[np.float64]

# relative size below which the total variance of a sample counts as zero
ZERO_VARIANCE = 1e-20


def _check_finite_rows(m: Matrix) -> None:

    finite = np.isfinite(m)

    if not finite.all():
        row = int(np.argmin(finite.all(axis=1)))
        raise NumericalError(f"Non-finite entry in row {row}.")


def softmax_rows(m: Matrix) -> Matrix:
    """
    Row-wise softmax computed with max-subtraction, so rows such as ``[1000, 1000]`` never overflow.

    :param m: A nonempty 2-D matrix of finite reals.
    :return: A matrix of the same shape whose rows sum to 1.
    :raise UsageError: If ``m`` is empty or not 2-D.
    :raise NumericalError: If ``m`` holds a non-finite entry; the message names the first offending row.
    """

    m = np.asarray(m, dtype=np.float64)

    if m.ndim != 2 or m.size == 0:
        raise UsageError(f"softmax_rows expects a nonempty matrix, got shape {m.shape}.")

    _check_finite_rows(m=m)

    e = np.exp(m - m.max(axis=1, keepdims=True))

    return e / e.sum(axis=1, keepdims=True)


def log_softmax_rows(m: Matrix) -> Matrix:
    """
    Row-wise log-softmax, ``m - logsumexp(m)`` per row.

    :param m: A nonempty 2-D matrix of finite reals.
    :return: The row-normalized log probabilities.
    """

    m = np.asarray(m, dtype=np.float64)

    if m.ndim != 2 or m.size == 0:
        raise UsageError(f"log_softmax_rows expects a nonempty matrix, got shape {m.shape}.")

    _check_finite_rows(m=m)

    return m - _scipy_logsumexp(m, axis=1, keepdims=True)


def row_affine(
    x: Matrix,
    w: Matrix,
    b: Vector | None = None
) -> Matrix:
    """
    ``x @ w.T + b`` accumulated column by column of ``x``, so every output row depends only on its input row and is
    bitwise identical however the rows are batched. Columns of ``w`` that are exactly zero leave the result
    bitwise unchanged.

    :param x: The ``T x k`` inputs.
    :param w: The ``m x k`` weights.
    :param b: The optional length ``m`` bias, added last.
    :return: The ``T x m`` result.
    """

    out = np.zeros((x.shape[0], w.shape[0]))

    for j in range(x.shape[1]):
        out += x[:, j, None] * w[None, :, j]

    if b is not None:
        out += b

    return out


def logsumexp(v: Vector) -> float:
    """
    ``log(sum(exp(v)))`` evaluated with max-subtraction: ``[-700, -700]`` gives ``-700 + ln 2`` without underflow.

    :param v: A nonempty real vector.
    :return: The log-sum-exp of ``v``.
    :raise UsageError: If ``v`` is empty.
    """

    v = np.asarray(v, dtype=np.float64).ravel()

    if v.size == 0:
        raise UsageError("logsumexp of an empty vector.")

    return float(_scipy_logsumexp(v))


def pca_explained_variance(points: Matrix) -> Vector:
    """
    Explained-variance ratios of the principal components of ``points``: the eigenvalues of the sample covariance of
    the mean-centered rows, sorted descending and normalized to sum to 1.

    :param points: A ``T x d`` matrix with ``T >= 2``.
    :return: The ``d`` nonnegative ratios, largest first.
    :raise UsageError: If there are fewer than two points.
    :raise NumericalError: If the points have zero total variance.
    """

    points = np.asarray(points, dtype=np.float64)

    if points.ndim != 2 or points.shape[0] < 2:
        raise UsageError(f"PCA needs at least two points, got shape {points.shape}.")

    _check_finite_rows(m=points)

    centered = points - points.mean(axis=0)
    covariance = centered.T @ centered / (points.shape[0] - 1)

    eigenvalues = np.clip(np.linalg.eigvalsh(covariance), a_min=0.0, a_max=None)[::-1]
    total = eigenvalues.sum()

    scale = max(1.0, float(np.abs(points).max()) ** 2)

    if total <= ZERO_VARIANCE * scale:
        raise NumericalError("PCA of points with zero total variance.")

    return eigenvalues / total
