import numpy as np
import pytest

from src.core import NumericalError, UsageError
from src.numeric import log_softmax_rows, logsumexp, pca_explained_variance, row_affine, softmax_rows


def test_softmax_rows_is_stable():

    probs = softmax_rows(m=np.array([[1000.0, 1000.0], [0.0, np.log(3.0)]]))

    assert np.allclose(probs, [[0.5, 0.5], [0.25, 0.75]])


def test_softmax_rows_names_the_row():

    with pytest.raises(NumericalError, match='row 1'):
        softmax_rows(m=np.array([[0.0, 1.0], [np.nan, 0.0]]))


@pytest.mark.parametrize('m', [np.zeros((0, 3)), np.zeros(3)])
def test_softmax_rows_shape(m):

    with pytest.raises(UsageError):
        softmax_rows(m=m)


def test_log_softmax_matches_softmax(rng):

    m = rng.normal(size=(4, 6))

    assert np.allclose(np.exp(log_softmax_rows(m=m)), softmax_rows(m=m), atol=1e-14)


def test_logsumexp_underflow():

    assert logsumexp(v=np.array([-700.0, -700.0])) == pytest.approx(-700.0 + np.log(2.0), abs=1e-12)

    with pytest.raises(UsageError):
        logsumexp(v=np.array([]))


def test_row_affine_is_batch_invariant(rng):

    x, w, b = rng.normal(size=(7, 3)), rng.normal(size=(4, 3)), rng.normal(size=4)

    full = row_affine(x=x, w=w, b=b)

    assert np.allclose(full, x @ w.T + b)
    assert all(np.array_equal(full[t], row_affine(x=x[t:t + 1], w=w, b=b)[0]) for t in range(7))


def test_row_affine_zero_columns_are_exact(rng):

    x, w = rng.normal(size=(5, 3)), rng.normal(size=(2, 3))

    padded_x = np.concatenate([x, rng.uniform(size=(5, 2))], axis=1)
    padded_w = np.concatenate([w, np.zeros((2, 2))], axis=1)

    assert np.array_equal(row_affine(x=x, w=w), row_affine(x=padded_x, w=padded_w))


def test_pca_explained_variance(rng):

    points = rng.normal(size=(500, 3)) * np.array([10.0, 1.0, 0.1])
    ratios = pca_explained_variance(points=points)

    assert ratios.sum() == pytest.approx(1.0)
    assert np.all(np.diff(ratios) <= 0.0)
    assert ratios[0] > 0.95


def test_pca_degenerate_inputs():

    with pytest.raises(UsageError):
        pca_explained_variance(points=np.ones((1, 3)))

    with pytest.raises(NumericalError):
        pca_explained_variance(points=np.ones((10, 3)))
