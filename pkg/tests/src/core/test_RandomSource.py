import numpy as np
import pytest

from src.core import RandomSource, UsageError
from tests.src.core.conftest import SEED


def test_same_seed_replays(rng):

    assert np.array_equal(rng.normal(size=5), RandomSource(seed=SEED).normal(size=5))


def test_substreams_are_independent_of_draw_order():

    a, b = RandomSource(seed=SEED), RandomSource(seed=SEED)

    a.uniform(size=100)
    a.substream(name='other').normal(size=10)

    assert np.array_equal(a.substream(name='lstm.init').normal(size=4), b.substream(name='lstm.init').normal(size=4))


def test_substream_names_differ(rng):

    assert not np.array_equal(rng.substream(name='x').normal(size=4), rng.substream(name='y').normal(size=4))


def test_nested_substreams(rng):

    nested = rng.substream(name='gibbs').substream(name='ffbs')

    assert len(nested.spawn_key) == 2
    assert str(nested).startswith('RandomSource(seed=7')


@pytest.mark.parametrize('seed', [-1, 2 ** 64])
def test_seed_range(seed):

    with pytest.raises(UsageError):
        RandomSource(seed=seed)


def test_dirichlet_sums_to_one(rng):

    draw = rng.dirichlet(alpha=np.full(5, 0.1))

    assert draw.shape == (5,)
    assert abs(draw.sum() - 1.0) < 1e-15


def test_choice_respects_zero_mass(rng):

    assert {rng.choice(p=np.array([0.0, 1.0, 0.0])) for _ in range(20)} == {1}
