import msgspec
import pytest

from src.core import UsageError
from src.harness import ExperimentConfig
from src.hmm import DEFAULT_ITERS


@pytest.mark.parametrize('method, missing', [
    ('lstm', 'hidden_dim'),
    ('discrete_hmm', 'n_hmm'),
    ('hybrid', 'hidden_dim'),
    ('joint_hybrid', 'n_hmm'),
])
def test_required_fields(method, missing):

    values = {'hidden_dim': 5, 'n_hmm': 10}
    values.pop(missing)

    with pytest.raises(UsageError, match=missing):
        ExperimentConfig(dataset='sample', method=method, **values)


@pytest.mark.parametrize('overrides', [
    {'hidden_dim': 0},
    {'iters': 0},
    {'valid_fraction': 0.0},
    {'valid_fraction': 1.0},
    {'seed': -1},
    {'epochs': -1},
])
def test_invalid_values(overrides):

    values = {'dataset': 'sample', 'method': 'hybrid', 'hidden_dim': 5, 'n_hmm': 10}
    values.update(overrides)

    with pytest.raises(UsageError):
        ExperimentConfig(**values)


def test_hmm_checkpoint_only_for_sequential_hybrid():

    ExperimentConfig(dataset='sample', method='hybrid', hidden_dim=5, n_hmm=10, hmm_checkpoint='runs/hmm')

    with pytest.raises(UsageError):
        ExperimentConfig(dataset='sample', method='joint_hybrid', hidden_dim=5, n_hmm=10, hmm_checkpoint='runs/hmm')


def test_names():

    config = ExperimentConfig(dataset='data/sample.txt', method='discrete_hmm', n_hmm=10, seed=2)

    assert config.run_name() == 'data_sample.txt-discrete_hmm-h0-n10-s2'
    assert config.context() == 'dataset=data/sample.txt method=discrete_hmm h=None n_hmm=10 seed=2'
    assert str(config) == f"ExperimentConfig({config.context()})"


def test_gibbs_iters():

    config = ExperimentConfig(dataset='sample', method='continuous_hmm', hidden_dim=5, n_hmm=10)

    assert config.gibbs_iters(kind='continuous') == DEFAULT_ITERS['continuous']
    assert msgspec.structs.replace(config, iters=7).gibbs_iters(kind='continuous') == 7


def test_lstm_config():

    config = ExperimentConfig(dataset='sample', method='lstm', hidden_dim=5, layers=2, bptt_len=50, epochs=3, lr0=0.5,
                              clip_threshold=1.0)
    lstm = config.lstm_config()

    assert (lstm.hidden_dim, lstm.layers, lstm.bptt_len, lstm.epochs) == (5, 2, 50, 3)
    assert (lstm.lr0, lstm.clip_threshold) == (0.5, 1.0)


def test_toml_decoding():

    config = msgspec.toml.decode(b'dataset = "sample"\nmethod = "lstm"\nhidden_dim = 5\n', type=ExperimentConfig)

    assert config == ExperimentConfig(dataset='sample', method='lstm', hidden_dim=5)

    with pytest.raises(msgspec.ValidationError):
        msgspec.toml.decode(b'dataset = "sample"\nmethod = "rnn"\nhidden_dim = 5\n', type=ExperimentConfig)
