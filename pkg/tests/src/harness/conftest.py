import uuid
from pathlib import Path

import pytest

from src.core import DatasetEntry, LabSettings, RandomSource, load_settings
from src.harness import ExperimentConfig, ResultsRow
from src.lstm import EncodedCorpus, encode_corpus

ROOT = Path(__file__).resolve().parents[3]
SETTINGS_FILE = ROOT / 'lab.toml'
SAMPLE = ROOT / 'data' / 'sample.txt'

MAX_CHARS = 3000


@pytest.fixture
def settings() -> LabSettings:
    return load_settings(path=SETTINGS_FILE)


@pytest.fixture
def local_settings(tmp_path) -> LabSettings:
    """
    A registry rooted at ``tmp_path`` with a corpus file ``tiny`` and a downloadable ``remote``.
    """

    (tmp_path / 'tiny.txt').write_text('hello world, hello lab. ' * 20, encoding='utf-8')

    return LabSettings(root=str(tmp_path), datasets={
        'tiny': DatasetEntry(path='tiny.txt'),
        'remote': DatasetEntry(path='corpora/remote.txt', url='https://example.org/remote.txt'),
    })


@pytest.fixture
def corpus() -> EncodedCorpus:
    return encode_corpus(text=SAMPLE.read_text(encoding='utf-8')[:MAX_CHARS], valid_fraction=0.1)


@pytest.fixture
def reference() -> str:
    return f"hmm-lstm-lab-test-{uuid.uuid4().hex[:8]}"


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=23)


@pytest.fixture
def small_config(tmp_path):
    """
    Builds a quick ``ExperimentConfig`` on the bundled sample.
    """

    def build(method: str, **overrides) -> ExperimentConfig:

        values = {
            'dataset': 'sample',
            'method': method,
            'hidden_dim': 4,
            'n_hmm': 3,
            'epochs': 1,
            'iters': 3,
            'bptt_len': 30,
            'valid_fraction': 0.1,
            'max_chars': MAX_CHARS,
            'output_dir': str(tmp_path / 'runs'),
        }
        values.update(overrides)

        return ExperimentConfig(**values)

    return build


@pytest.fixture
def rows() -> list[ResultsRow]:

    return [
        ResultsRow(dataset='shakespeare', method='lstm', parameter_count=935, h=5, n_hmm=None, validation_ll=-2.41,
                   training_ll=-2.35, seed=0, wall_time_s=12.5),
        ResultsRow(dataset='linux', method='discrete_hmm', parameter_count=1090, h=None, n_hmm=10,
                   validation_ll=-2.993, training_ll=-2.96, seed=0, wall_time_s=3.25),
        ResultsRow(dataset='shakespeare', method='hybrid', parameter_count=1135, h=5, n_hmm=10, validation_ll=-2.38,
                   training_ll=-2.31, seed=1, wall_time_s=20.0),
        ResultsRow(dataset='shakespeare', method='discrete_hmm', parameter_count=1090, h=None, n_hmm=10,
                   validation_ll=-2.69, training_ll=-2.66, seed=0, wall_time_s=4.0),
    ]
