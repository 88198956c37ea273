import re

import msgspec
import numpy as np
import pytest
from scipy.linalg import LinAlgError

from src.core import DataError, NumericalError
from src.harness import count_parameters, load_checkpoint, read_manifest, run_experiment
from src.hybrid import HybridParams, JointHybridParams, hybrid_loss_grad, joint_hybrid_loss_grad
from src.lstm import LstmParams, lstm_loss_grad

from tests.src.harness.conftest import SAMPLE


def _stable(row):

    return msgspec.structs.replace(row, wall_time_s=0.0)


@pytest.mark.parametrize('method', ['lstm', 'discrete_hmm', 'continuous_hmm', 'hybrid', 'joint_hybrid'])
def test_methods(method, small_config, settings):

    config = small_config(method=method)
    row = run_experiment(config=config, settings=settings)

    assert (row.dataset, row.method, row.seed) == ('sample', method, 0)
    assert row.validation_ll < 0.0
    assert row.training_ll < 0.0
    assert row.wall_time_s > 0.0
    assert row.parameter_count > 0


@pytest.mark.parametrize('method', ['lstm', 'discrete_hmm', 'hybrid'])
def test_reproducible(method, small_config, settings):

    config = small_config(method=method)

    assert _stable(run_experiment(config=config, settings=settings)) == \
           _stable(run_experiment(config=config, settings=settings))


def test_seed_matters(small_config, settings):

    first = run_experiment(config=small_config(method='lstm', seed=0), settings=settings)
    second = run_experiment(config=small_config(method='lstm', seed=1), settings=settings)

    assert first.validation_ll != second.validation_ll


def test_checkpoint_matches_row(small_config, settings, tmp_path):

    config = small_config(method='lstm')
    row = run_experiment(config=config, settings=settings)

    model = load_checkpoint(directory=tmp_path / 'runs' / config.run_name() / 'lstm', kind='lstm').model

    assert count_parameters(model=model) == row.parameter_count


def test_dataset_as_path(small_config, settings):

    row = run_experiment(config=small_config(method='discrete_hmm', dataset=str(SAMPLE), output_dir=None),
                         settings=settings)

    assert row.dataset == str(SAMPLE)


def test_continuous_references_lstm(small_config, settings, tmp_path):

    config = small_config(method='continuous_hmm')
    run_experiment(config=config, settings=settings)

    run = tmp_path / 'runs' / config.run_name()

    assert read_manifest(directory=run / 'hmm').references == \
           {'lstm': read_manifest(directory=run / 'lstm').content_hash}


def test_hybrid_reuses_hmm_checkpoint(small_config, settings, tmp_path):

    hmm_config = small_config(method='discrete_hmm')
    run_experiment(config=hmm_config, settings=settings)

    hmm_dir = tmp_path / 'runs' / hmm_config.run_name() / 'hmm'
    config = small_config(method='hybrid', hmm_checkpoint=str(hmm_dir))
    row = run_experiment(config=config, settings=settings)

    run = tmp_path / 'runs' / config.run_name()
    digest = read_manifest(directory=hmm_dir).content_hash

    assert read_manifest(directory=run / 'hmm').content_hash == digest
    assert read_manifest(directory=run / 'hybrid').references == {'hmm': digest}
    assert row.n_hmm == 3


def test_hmm_checkpoint_vocabulary(small_config, settings, tmp_path):

    hmm_config = small_config(method='discrete_hmm')
    run_experiment(config=hmm_config, settings=settings)

    other = tmp_path / 'other.txt'
    other.write_text('abc ' * 200, encoding='utf-8')

    config = small_config(method='hybrid', dataset=str(other), max_chars=None,
                          hmm_checkpoint=str(tmp_path / 'runs' / hmm_config.run_name() / 'hmm'))

    with pytest.raises(DataError, match='another vocabulary'):
        run_experiment(config=config, settings=settings)


def test_error_context(small_config, settings, tmp_path):

    config = small_config(method='lstm', dataset=str(tmp_path / 'absent.txt'))

    with pytest.raises(DataError) as info:
        run_experiment(config=config, settings=settings)

    assert str(info.value).startswith(f"[{config.context()}] Cannot read the corpus")
    assert isinstance(info.value.__cause__, DataError)


def test_short_validation_range(small_config, settings):

    with pytest.raises(DataError, match='fewer than two'):
        run_experiment(config=small_config(method='discrete_hmm', max_chars=10), settings=settings)


def test_numerical_failure_keeps_class(mocker, small_config, settings):

    mocker.patch('src.harness.experiment.predictive_loglik', return_value=float('nan'))

    with pytest.raises(NumericalError, match=r'^\[dataset=sample'):
        run_experiment(config=small_config(method='discrete_hmm'), settings=settings)


def _updated_scalars(params, loss_grad) -> int:

    _, grads, _ = loss_grad(params)
    stepped = params.copy()
    stepped.sgd_step(grads={name: np.ones_like(grad) for name, grad in grads.items()}, lr=1.0)

    return int(sum(np.count_nonzero(stepped[name] != params[name]) for name in params.tensors))


def test_parameter_count_is_what_sgd_updates(corpus, rng):

    vocab_size, n_hmm = len(corpus.vocab), 3
    ids = corpus.ids[:30]
    dists = np.full((30, n_hmm), 1.0 / n_hmm)

    lstm = LstmParams.init(vocab_size=vocab_size, hidden_dim=5, layers=2, rng=rng)
    hybrid = HybridParams.init(vocab_size=vocab_size, hidden_dim=5, layers=2, n_hmm=n_hmm, rng=rng)
    joint = JointHybridParams.init(vocab_size=vocab_size, hidden_dim=5, layers=2, n_hmm=n_hmm, rng=rng)

    assert count_parameters(model=lstm) == _updated_scalars(lstm, lambda p: lstm_loss_grad(params=p, ids=ids))
    assert count_parameters(model=hybrid) == _updated_scalars(
        hybrid, lambda p: hybrid_loss_grad(params=p, ids=ids, dists=dists))
    assert count_parameters(model=joint) == _updated_scalars(
        joint, lambda p: joint_hybrid_loss_grad(params=p, ids=ids))

    assert count_parameters(model=hybrid) == count_parameters(model=lstm) + vocab_size * n_hmm


@pytest.mark.parametrize('failure, expected', [
    (LinAlgError('not positive definite'), NumericalError),
    (FloatingPointError('overflow'), NumericalError),
    (PermissionError('read-only'), DataError),
])
def test_foreign_failures_get_context(mocker, small_config, settings, failure, expected):

    mocker.patch('src.harness.experiment.gibbs_train', side_effect=failure)
    config = small_config(method='discrete_hmm')

    with pytest.raises(expected, match=rf'^\[{re.escape(config.context())}\] ') as info:
        run_experiment(config=config, settings=settings)

    assert info.value.__cause__ is failure
