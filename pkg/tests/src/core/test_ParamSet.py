import numpy as np
import pytest

from src.core import DataError, NumericalError
from tests.src.core.conftest import Affine


def test_tensors_are_float64(affine):

    assert all(t.dtype == np.float64 and t.flags['C_CONTIGUOUS'] for t in affine.tensors.values())


def test_str(affine):

    assert str(affine) == 'Affine(m=2, k=3)'


def test_size_and_count(affine):

    assert affine.size() == 8
    assert affine.parameter_count() == 8


@pytest.mark.parametrize('tensors', [
    {'w': np.zeros((2, 3))},
    {'w': np.zeros((3, 2)), 'b': np.zeros(2)},
    {'w': np.zeros((2, 3)), 'b': np.zeros(2), 'extra': np.zeros(1)},
])
def test_expect_shapes(tensors):

    with pytest.raises(DataError):
        Affine.from_tensors(tensors=tensors, meta={'m': 2, 'k': 3})


def test_check_finite(affine):

    affine.check_finite()
    affine['b'][0] = np.nan

    with pytest.raises(NumericalError):
        affine.check_finite()


def test_copy_is_deep(affine):

    clone = affine.copy()
    clone['w'][0, 0] = 100.0

    assert affine['w'][0, 0] == 0.0
    assert clone.meta == affine.meta


def test_sgd_step(affine):

    affine.sgd_step(grads={'b': np.array([1.0, -2.0])}, lr=0.5)

    assert np.array_equal(affine['b'], [0.5, 2.0])
    assert np.array_equal(affine['w'], np.arange(6.0).reshape(2, 3))
