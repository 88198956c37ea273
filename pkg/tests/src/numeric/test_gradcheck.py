import numpy as np
import pytest

from src.core import NumericalError, UsageError
from src.numeric import finite_diff_grad, max_relative_error, param_grad_errors
from tests.src.core.conftest import Affine


def test_quadratic_gradient():

    x = np.array([1.0, -2.0, 0.5])

    assert np.allclose(finite_diff_grad(f=lambda v: float((v ** 2).sum()), x=x), 2.0 * x, atol=1e-8)


def test_input_is_not_modified():

    x = np.array([1.0, 2.0])
    finite_diff_grad(f=lambda v: float(v.sum()), x=x)

    assert np.array_equal(x, [1.0, 2.0])


def test_rejects_bad_step():

    with pytest.raises(UsageError):
        finite_diff_grad(f=lambda v: 0.0, x=np.zeros(2), eps=0.0)


def test_names_the_non_finite_coordinate():

    with pytest.raises(NumericalError, match='coordinate 1'):
        finite_diff_grad(f=lambda v: np.inf if v[1] < 0.0 else float(v.sum()), x=np.array([1.0, 0.0]))


def test_relative_error_floor():

    assert max_relative_error(analytic=np.array([1e-9]), numeric=np.array([0.0])) == pytest.approx(1e-4)
    assert max_relative_error(analytic=np.array([2.0]), numeric=np.array([1.0])) == pytest.approx(0.5)


def test_param_grad_errors_restores_the_model():

    model = Affine.from_tensors(tensors={'w': np.ones((1, 2)), 'b': np.zeros(1)}, meta={'m': 1, 'k': 2})
    x = np.array([3.0, -1.0])

    def loss(params: Affine) -> float:
        return float(((params['w'] @ x + params['b']) ** 2).sum())

    residual = model['w'] @ x + model['b']
    grads = {'w': 2.0 * residual[:, None] * x[None, :], 'b': 2.0 * residual}

    errors = param_grad_errors(loss=loss, params=model, grads=grads)

    assert max(errors.values()) < 1e-6
    assert np.array_equal(model['w'], np.ones((1, 2)))
