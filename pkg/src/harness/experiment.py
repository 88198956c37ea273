import logging
import time
from pathlib import Path
from typing import Callable, NamedTuple

import msgspec
from scipy.linalg import LinAlgError

from src.core import DataError, LabError, LabSettings, NumericalError, ParamSet, RandomSource, fields
from src.harness.checkpoint import load_checkpoint, model_hash, save_checkpoint
from src.harness.datasets import load_dataset
from src.harness.ExperimentConfig import ExperimentConfig
from src.harness.results import ResultsRow
from src.hmm import DiscreteHmmParams, HmmHyper, gibbs_train, predictive_loglik, readout_loglik
from src.hybrid import eval_hybrid, precompute_hmm_track, train_joint_hybrid, train_sequential_hybrid
from src.lstm import EncodedCorpus, eval_loglik, extract_hidden_states, train_lstm

logger = logging.getLogger(__name__)


class Outcome(NamedTuple):
    model: ParamSet
    training_ll: float
    validation_ll: float


class Run(NamedTuple):
    """
    Everything a pipeline reads: the configuration, the corpus, the root random source and where checkpoints go.
    """

    config: ExperimentConfig
    corpus: EncodedCorpus
    rng: RandomSource
    out: Path | None

    def save(self, name: str, model: ParamSet, references: dict[str, str] | None = None) -> str:
        """
        Writes ``model`` under ``out/name`` when the run has an output directory.

        :return: The content hash of ``model``.
        """

        if self.out is None:
            return model_hash(model=model, vocab=self.corpus.vocab)

        return save_checkpoint(model=model, directory=self.out / name, vocab=self.corpus.vocab,
                               config=msgspec.structs.asdict(self.config), references=references)


def count_parameters(model: ParamSet) -> int:
    """
    The number of free trainable scalars of ``model``: every weight of the LSTM and hybrid models, the simplex degrees
    of freedom of an HMM.
    """

    return model.parameter_count()


def _training_ids(run: Run):

    return run.corpus.span(interval=run.corpus.train_range)


def _run_lstm(run: Run) -> Outcome:

    params, trace = train_lstm(config=run.config.lstm_config(), corpus=run.corpus, rng=run.rng)
    run.save(name='lstm', model=params)

    return Outcome(model=params,
                   training_ll=eval_loglik(params=params, corpus=run.corpus, interval=run.corpus.train_range),
                   validation_ll=trace.final_valid_ll)


def _train_discrete_hmm(run: Run) -> DiscreteHmmParams:

    result = gibbs_train(obs=_training_ids(run=run), n=run.config.n_hmm, iters=run.config.gibbs_iters(kind='discrete'),
                         hyper=HmmHyper(), rng=run.rng, kind='discrete', vocab_size=len(run.corpus.vocab))

    return result.params


def _run_discrete_hmm(run: Run) -> Outcome:

    hmm = _train_discrete_hmm(run=run)
    run.save(name='hmm', model=hmm)

    start, stop = run.corpus.valid_range

    return Outcome(model=hmm,
                   training_ll=predictive_loglik(params=hmm, obs=_training_ids(run=run)),
                   validation_ll=predictive_loglik(params=hmm, obs=run.corpus.ids[:stop], score_from=start))


def _run_continuous_hmm(run: Run) -> Outcome:

    lstm, _ = train_lstm(config=run.config.lstm_config(), corpus=run.corpus, rng=run.rng)
    lstm_hash = run.save(name='lstm', model=lstm)

    # one stream over the whole corpus, so validation states continue from the training ones
    hidden = extract_hidden_states(params=lstm, corpus=run.corpus, interval=run.corpus.full_range)
    split = run.corpus.train_range[1]

    result = gibbs_train(obs=hidden[:split], n=run.config.n_hmm, iters=run.config.gibbs_iters(kind='continuous'),
                         hyper=HmmHyper(), rng=run.rng, kind='continuous', vocab_size=len(run.corpus.vocab),
                         init_hidden=hidden[:split], readout_ids=_training_ids(run=run))

    hmm = result.params
    run.save(name='hmm', model=hmm, references={'lstm': lstm_hash})

    return Outcome(model=hmm,
                   training_ll=readout_loglik(params=hmm, hidden=hidden[:split], ids=_training_ids(run=run)),
                   validation_ll=readout_loglik(params=hmm, hidden=hidden, ids=run.corpus.ids,
                                                score_from=run.corpus.valid_range[0]))


def _frozen_hmm(run: Run) -> DiscreteHmmParams:

    if run.config.hmm_checkpoint is None:
        return _train_discrete_hmm(run=run)

    checkpoint = load_checkpoint(directory=Path(run.config.hmm_checkpoint), kind=DiscreteHmmParams.KIND)

    if checkpoint.vocab is not None and checkpoint.vocab != run.corpus.vocab:
        raise DataError(f"The HMM checkpoint {run.config.hmm_checkpoint} was trained on another vocabulary.")

    return checkpoint.model


def _run_hybrid(run: Run) -> Outcome:

    hmm = _frozen_hmm(run=run)
    hmm_hash = run.save(name='hmm', model=hmm)

    track = precompute_hmm_track(hmm=hmm, corpus=run.corpus)
    params, trace = train_sequential_hybrid(config=run.config.lstm_config(), corpus=run.corpus, hmm=hmm, rng=run.rng,
                                            track=track)
    run.save(name='hybrid', model=params, references={'hmm': hmm_hash})

    return Outcome(model=params,
                   training_ll=eval_hybrid(params=params, corpus=run.corpus, interval=run.corpus.train_range,
                                           track=track),
                   validation_ll=trace.final_valid_ll)


def _run_joint_hybrid(run: Run) -> Outcome:

    params, trace = train_joint_hybrid(config=run.config.lstm_config(), corpus=run.corpus, n_hmm=run.config.n_hmm,
                                       rng=run.rng)
    run.save(name='joint_hybrid', model=params)

    return Outcome(model=params,
                   training_ll=eval_hybrid(params=params, corpus=run.corpus, interval=run.corpus.train_range),
                   validation_ll=trace.final_valid_ll)


PIPELINES: dict[str, Callable[[Run], Outcome]] = {
    'lstm': _run_lstm,
    'discrete_hmm': _run_discrete_hmm,
    'continuous_hmm': _run_continuous_hmm,
    'hybrid': _run_hybrid,
    'joint_hybrid': _run_joint_hybrid,
}


def run_experiment(
    config: ExperimentConfig,
    settings: LabSettings
) -> ResultsRow:
    """
    Loads the dataset, trains the configured method from ``RandomSource(config.seed)`` and scores it.

    Validation is scored causally on the held-out tail; training on the training range with the final model. Given the
    configuration and the corpus bytes the row is reproducible bitwise, except ``wall_time_s``. Checkpoints are written
    under ``output_dir/<run name>/`` when ``output_dir`` is set.

    :param config: The experiment.
    :param settings: The settings holding the dataset registry.
    :return: The ``ResultsRow``.
    :raise LabError: Any error of the pipeline, its message prefixed by the experiment context, its class kept; a
        linear algebra failure becomes a ``NumericalError`` and an I/O failure a ``DataError``.
    """

    started = time.perf_counter()

    logger.info("Starting experiment.", extra=fields(dataset=config.dataset, method=config.method,
                                                     h=config.hidden_dim, n_hmm=config.n_hmm, seed=config.seed))

    try:
        corpus = load_dataset(source=config.dataset, valid_fraction=config.valid_fraction, settings=settings,
                              max_chars=config.max_chars)

        if corpus.valid_range[1] - corpus.valid_range[0] < 2:
            raise DataError(f"The validation range {corpus.valid_range} holds fewer than two characters.")

        run = Run(config=config, corpus=corpus, rng=RandomSource(seed=config.seed),
                  out=Path(config.output_dir) / config.run_name() if config.output_dir else None)

        outcome = PIPELINES[config.method](run)

        row = ResultsRow(dataset=config.dataset, method=config.method,
                         parameter_count=count_parameters(model=outcome.model), h=config.hidden_dim,
                         n_hmm=config.n_hmm, validation_ll=float(outcome.validation_ll),
                         training_ll=float(outcome.training_ll), seed=config.seed,
                         wall_time_s=time.perf_counter() - started)

    except LabError as error:
        raise type(error)(f"[{config.context()}] {error}") from error

    except (LinAlgError, FloatingPointError) as error:
        raise NumericalError(f"[{config.context()}] {error}") from error

    except OSError as error:
        raise DataError(f"[{config.context()}] {error}") from error

    logger.info("Finished experiment.", extra=fields(dataset=config.dataset, method=config.method,
                                                     validation_ll=row.validation_ll, training_ll=row.training_ll,
                                                     parameters=row.parameter_count, wall_time_s=row.wall_time_s))

    return row
