from typing import Any, Self

import numpy as np
import pytest

from src.core import ParamSet, RandomSource, Tensors

SEED = 7


class Affine(ParamSet):

    KIND = 'affine'

    @classmethod
    def from_tensors(
        cls,
        tensors: Tensors,
        meta: dict[str, Any]
    ) -> Self:

        model = cls(tensors=tensors, meta=meta)
        model.expect_shapes(shapes={'w': (meta['m'], meta['k']), 'b': (meta['m'],)})

        return model


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=SEED)


@pytest.fixture
def affine() -> Affine:
    return Affine.from_tensors(tensors={'w': np.arange(6.0).reshape(2, 3), 'b': np.ones(2)}, meta={'m': 2, 'k': 3})


@pytest.fixture
def settings_file(tmp_path):

    path = tmp_path / 'lab.toml'
    path.write_text(
        'seed = 3\n'
        'valid_fraction = 0.1\n'
        '\n'
        '[datasets.tiny]\n'
        'path = "corpora/tiny.txt"\n'
        'sha256 = "00"\n'
    )

    return path
