import argparse
import logging
import sys
from pathlib import Path
from typing import Callable

from src.core import (
    DataError,
    HashMismatchError,
    LabError,
    LabSettings,
    RandomSource,
    UsageError,
    configure_logging,
    fields,
    load_settings,
)
from src.harness.checkpoint import Checkpoint, load_checkpoint
from src.harness.datasets import fetch_dataset, load_dataset
from src.harness.experiment import run_experiment
from src.harness.ExperimentConfig import METHODS, ExperimentConfig
from src.harness.messages import FailedRun, JobDone
from src.harness.results import ResultsRow, emit_results_table, parse_results_csv, write_results
from src.harness.sweep import load_sweep_plan, run_sweep
from src.harness.visualize import DEFAULT_CLUSTERS, DEFAULT_EXCERPT, fit_dim_trees, interpretation_report
from src.hmm import DiscreteHmmParams, HmmHyper, gibbs_train, predictive_loglik, readout_loglik
from src.hybrid import eval_hybrid, precompute_hmm_track
from src.interpret import DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF, DEFAULT_WINDOW, render_tree
from src.lstm import (
    EncodedCorpus,
    LstmConfig,
    LstmParams,
    eval_loglik,
    extract_hidden_states,
    sample_text,
    train_lstm,
)

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, LabSettings], int]

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

VISUALIZE_HIDDEN_DIM = 10
VISUALIZE_HMM_STATES = 10
VISUALIZE_EPOCHS = 1
VISUALIZE_ITERS = 20


class LabArgumentParser(argparse.ArgumentParser):
    """
    ``ArgumentParser`` reporting bad flags as a ``UsageError`` instead of exiting.
    """

    def error(self, message: str):

        raise UsageError(f"{self.prog}: {message}")


def _dims(text: str) -> list[int]:

    try:
        return [int(part) for part in text.split(',') if part.strip()]

    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# settings and shared flags

def _seed(args: argparse.Namespace, settings: LabSettings) -> int:

    return args.seed if args.seed is not None else settings.seed


def _valid_fraction(args: argparse.Namespace, settings: LabSettings) -> float:

    return args.valid_fraction if args.valid_fraction is not None else settings.valid_fraction


def _out(args: argparse.Namespace, settings: LabSettings) -> Path:

    return Path(args.out if args.out is not None else settings.output_dir)


def _corpus(args: argparse.Namespace, settings: LabSettings) -> EncodedCorpus:

    return load_dataset(source=args.dataset, valid_fraction=_valid_fraction(args=args, settings=settings),
                        settings=settings, max_chars=args.max_chars)


def _lstm_config(args: argparse.Namespace, hidden_dim: int | None = None, epochs: int | None = None) -> LstmConfig:

    return LstmConfig(hidden_dim=hidden_dim if hidden_dim is not None else args.hidden_dim,
                      layers=args.layers, bptt_len=args.bptt_len,
                      epochs=epochs if epochs is not None else args.epochs, lr0=args.lr, clip_threshold=args.clip)


def _print_rows(rows: list[ResultsRow]) -> None:

    _, markdown = emit_results_table(rows=rows)
    sys.stdout.write(markdown)


def _matching_vocab(checkpoint: Checkpoint, corpus: EncodedCorpus, path: Path) -> None:

    if checkpoint.vocab is not None and checkpoint.vocab != corpus.vocab:
        raise DataError(f"The checkpoint {path} was trained on another vocabulary than the corpus.")


# experiments

def _run_and_report(args: argparse.Namespace, settings: LabSettings, method: str) -> int:

    config = ExperimentConfig(
        dataset=args.dataset,
        method=method,
        hidden_dim=args.hidden_dim,
        n_hmm=args.hmm_states,
        seed=_seed(args=args, settings=settings),
        epochs=args.epochs,
        iters=args.iters,
        valid_fraction=_valid_fraction(args=args, settings=settings),
        output_dir=str(_out(args=args, settings=settings)),
        layers=args.layers,
        bptt_len=args.bptt_len,
        lr0=args.lr,
        clip_threshold=args.clip,
        max_chars=args.max_chars,
        hmm_checkpoint=getattr(args, 'hmm_checkpoint', None),
    )

    row = run_experiment(config=config, settings=settings)

    write_results(rows=[row], out=Path(config.output_dir) / config.run_name())
    _print_rows(rows=[row])

    return 0


def _train(args: argparse.Namespace, settings: LabSettings) -> int:

    return _run_and_report(args=args, settings=settings, method=args.method)


def _gibbs(args: argparse.Namespace, settings: LabSettings) -> int:

    return _run_and_report(args=args, settings=settings, method=f"{args.kind}_hmm")


def _hybrid(args: argparse.Namespace, settings: LabSettings) -> int:

    method = 'hybrid' if args.mode == 'sequential' else 'joint_hybrid'

    return _run_and_report(args=args, settings=settings, method=method)


def _sweep(args: argparse.Namespace, settings: LabSettings) -> int:

    plan = load_sweep_plan(path=Path(args.plan))
    workers = args.workers if args.workers is not None else plan.workers

    replies = run_sweep(configs=plan.experiments, workers=workers, settings=settings,
                        log_level=logging.getLogger().level)

    rows = [reply.row for reply in replies if isinstance(reply, JobDone)]
    failures = [reply for reply in replies if isinstance(reply, FailedRun)]

    for failure in failures:
        logger.error("Sweep experiment failed.", extra=fields(index=failure.index, context=failure.context,
                                                              kind=failure.kind, error=failure.error))

    if rows:
        write_results(rows=rows, out=_out(args=args, settings=settings))
        _print_rows(rows=rows)

    return failures[0].exit_code if failures else 0


# evaluation and inspection

def _eval(args: argparse.Namespace, settings: LabSettings) -> int:

    path = Path(args.checkpoint)
    checkpoint = load_checkpoint(directory=path)
    corpus = _corpus(args=args, settings=settings)

    _matching_vocab(checkpoint=checkpoint, corpus=corpus, path=path)

    start, stop = corpus.valid_range if args.range == 'valid' else corpus.train_range
    model = checkpoint.model
    kind = checkpoint.manifest.kind

    def referenced(role: str, flag: str | None) -> Checkpoint:

        if flag is None:
            raise UsageError(f"Evaluating a {kind} checkpoint needs --{role}-checkpoint.")

        other = load_checkpoint(directory=Path(flag))
        expected = checkpoint.manifest.references.get(role)

        if expected is not None and other.manifest.content_hash != expected:
            raise HashMismatchError(f"The {role} checkpoint {flag} is not the one {path} was trained with.")

        return other

    if kind == 'lstm':
        ll = eval_loglik(params=model, corpus=corpus, interval=(start, stop))

    elif kind == 'discrete_hmm':
        ll = predictive_loglik(params=model, obs=corpus.ids[:stop], score_from=max(start, 1))

    elif kind == 'continuous_hmm':

        if model.readout is None:
            raise UsageError(f"The continuous HMM {path} has no character readout to score.")

        lstm = referenced(role='lstm', flag=args.lstm_checkpoint).model
        hidden = extract_hidden_states(params=lstm, corpus=corpus, interval=(0, stop))
        ll = readout_loglik(params=model, hidden=hidden, ids=corpus.ids[:stop], score_from=max(start, 1))

    elif kind == 'sequential_hybrid':
        hmm = referenced(role='hmm', flag=args.hmm_checkpoint).model
        ll = eval_hybrid(params=model, corpus=corpus, interval=(start, stop),
                         track=precompute_hmm_track(hmm=hmm, corpus=corpus))

    else:
        ll = eval_hybrid(params=model, corpus=corpus, interval=(start, stop))

    sys.stdout.write(f"{args.range}_ll={ll:.6f}\n")

    return 0


def _sample(args: argparse.Namespace, settings: LabSettings) -> int:

    checkpoint = load_checkpoint(directory=Path(args.checkpoint), kind=LstmParams.KIND)

    if checkpoint.vocab is None:
        raise DataError(f"The checkpoint {args.checkpoint} carries no vocabulary.")

    prime = args.prime if args.prime is not None else checkpoint.vocab.chars[0]

    text = sample_text(params=checkpoint.model, vocab=checkpoint.vocab, prime=prime, length=args.length,
                       rng=RandomSource(seed=_seed(args=args, settings=settings)).substream(name='sample'),
                       temperature=args.temperature)

    sys.stdout.write(prime + text + '\n')

    return 0


def _lstm_for(args: argparse.Namespace, corpus: EncodedCorpus, rng: RandomSource) -> LstmParams:

    if args.lstm_checkpoint is not None:
        checkpoint = load_checkpoint(directory=Path(args.lstm_checkpoint), kind=LstmParams.KIND)
        _matching_vocab(checkpoint=checkpoint, corpus=corpus, path=Path(args.lstm_checkpoint))

        return checkpoint.model

    config = _lstm_config(args=args, hidden_dim=args.hidden_dim or VISUALIZE_HIDDEN_DIM,
                          epochs=args.epochs if args.epochs is not None else VISUALIZE_EPOCHS)

    return train_lstm(config=config, corpus=corpus, rng=rng)[0]


def _hmm_for(args: argparse.Namespace, corpus: EncodedCorpus, rng: RandomSource) -> DiscreteHmmParams:

    if args.hmm_checkpoint is not None:
        checkpoint = load_checkpoint(directory=Path(args.hmm_checkpoint), kind=DiscreteHmmParams.KIND)
        _matching_vocab(checkpoint=checkpoint, corpus=corpus, path=Path(args.hmm_checkpoint))

        return checkpoint.model

    return gibbs_train(obs=corpus.span(interval=corpus.train_range), n=args.hmm_states or VISUALIZE_HMM_STATES,
                       iters=args.iters or VISUALIZE_ITERS, hyper=HmmHyper(), rng=rng, kind='discrete',
                       vocab_size=len(corpus.vocab)).params


def _visualize(args: argparse.Namespace, settings: LabSettings) -> int:

    corpus = _corpus(args=args, settings=settings)
    rng = RandomSource(seed=_seed(args=args, settings=settings))

    document = interpretation_report(
        corpus=corpus,
        rng=rng,
        lstm=_lstm_for(args=args, corpus=corpus, rng=rng),
        hmm=_hmm_for(args=args, corpus=corpus, rng=rng),
        clusters=args.clusters,
        excerpt=args.excerpt,
        tree_dims=args.tree_dims,
        window=args.window,
        max_depth=args.max_depth,
        min_leaf=args.min_leaf,
        title=f"HMM and LSTM states on {args.dataset}",
    )

    out = _out(args=args, settings=settings)
    out.mkdir(parents=True, exist_ok=True)

    path = out / 'report.html'
    path.write_text(document, encoding='utf-8')

    logger.info("Wrote report.", extra=fields(path=str(path), bytes=len(document)))
    sys.stdout.write(f"{path}\n")

    return 0


def _tree(args: argparse.Namespace, settings: LabSettings) -> int:

    corpus = _corpus(args=args, settings=settings)
    rng = RandomSource(seed=_seed(args=args, settings=settings))

    lstm = _lstm_for(args=args, corpus=corpus, rng=rng)
    hidden = extract_hidden_states(params=lstm, corpus=corpus, interval=corpus.train_range)

    trees = fit_dim_trees(corpus=corpus, hidden=hidden, dims=args.dims, window=args.window, max_depth=args.max_depth,
                          min_leaf=args.min_leaf)

    documents = []

    for dim, tree in trees.items():
        rendered = render_tree(tree=tree, format=args.format)
        documents.append(rendered if args.format == 'dot' else f"# hidden dimension {dim}\n{rendered}")

    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)

        for (dim, _), document in zip(trees.items(), documents):
            (out / f"tree-dim{dim}.{'dot' if args.format == 'dot' else 'txt'}").write_text(document, encoding='utf-8')

    sys.stdout.write(''.join(documents))

    return 0


# tables and data

def _table(args: argparse.Namespace, settings: LabSettings) -> int:

    rows: list[ResultsRow] = []

    for name in args.results:

        try:
            text = Path(name).read_text(encoding='utf-8')

        except OSError as exception:
            raise DataError(f"Cannot read the results file {name}: {exception}") from exception

        rows.extend(parse_results_csv(text=text))

    if args.out is not None:
        write_results(rows=rows, out=Path(args.out))

    csv_text, markdown = emit_results_table(rows=rows)
    sys.stdout.write(csv_text if args.csv else markdown)

    return 0


def _fetch_data(args: argparse.Namespace, settings: LabSettings) -> int:

    names = args.names or sorted(name for name, entry in settings.datasets.items() if entry.url is not None)

    for name in names:
        path = fetch_dataset(name=name, settings=settings, force=args.force)
        sys.stdout.write(f"{name}\t{path}\n")

    return 0


# parser

def _common_flags() -> argparse.ArgumentParser:

    common = LabArgumentParser(add_help=False)
    common.add_argument('--config', help="The settings file (default: $HMM_LSTM_LAB_CONFIG or ./lab.toml).")
    common.add_argument('--log-level', choices=LOG_LEVELS, default='INFO')
    common.add_argument('--seed', type=int, help="The root seed (default: from the settings).")

    return common


def _data_flags() -> argparse.ArgumentParser:

    data = LabArgumentParser(add_help=False)
    data.add_argument('--dataset', default='sample', help="A registered dataset name or a corpus file path.")
    data.add_argument('--valid-fraction', type=float, help="The held-out share (default: from the settings).")
    data.add_argument('--max-chars', type=int, help="Use only the first characters of the corpus.")
    data.add_argument('--out', help="The output directory (default: from the settings).")

    return data


def _model_flags() -> argparse.ArgumentParser:

    model = LabArgumentParser(add_help=False)
    model.add_argument('--hidden-dim', type=int, help="The LSTM state size.")
    model.add_argument('--hmm-states', type=int, help="The number of HMM states.")
    model.add_argument('--epochs', type=int, help="SGD epochs.")
    model.add_argument('--iters', type=int, help="Gibbs iterations.")
    model.add_argument('--layers', type=int, default=1)
    model.add_argument('--bptt-len', type=int, default=100)
    model.add_argument('--lr', type=float, default=1.0, help="The initial learning rate.")
    model.add_argument('--clip', type=float, default=5.0, help="The gradient norm clipping threshold.")

    return model


def _tree_flags() -> argparse.ArgumentParser:

    tree = LabArgumentParser(add_help=False)
    tree.add_argument('--lstm-checkpoint', help="Explain this LSTM instead of training one.")
    tree.add_argument('--window', type=int, default=DEFAULT_WINDOW)
    tree.add_argument('--max-depth', type=int, default=DEFAULT_MAX_DEPTH)
    tree.add_argument('--min-leaf', type=int, default=DEFAULT_MIN_LEAF)

    return tree


def build_parser() -> LabArgumentParser:

    common, data, model, tree = _common_flags(), _data_flags(), _model_flags(), _tree_flags()

    parser = LabArgumentParser(prog='hmm-lstm-lab', description="Character-level LSTMs, Bayesian HMMs and hybrids.")
    commands = parser.add_subparsers(dest='command', required=True)

    def command(name: str, handler: Handler, parents: list[argparse.ArgumentParser], summary: str):
        sub = commands.add_parser(name, parents=parents, help=summary)
        sub.set_defaults(handler=handler)
        return sub

    train = command('train', _train, [common, data, model], "Train and score one model.")
    train.add_argument('--method', choices=METHODS, default='lstm')
    train.set_defaults(epochs=10)

    gibbs = command('gibbs', _gibbs, [common, data, model], "Train and score an HMM by Gibbs sampling.")
    gibbs.add_argument('--kind', choices=('discrete', 'continuous'), default='discrete')
    gibbs.set_defaults(epochs=10)

    hybrid = command('hybrid', _hybrid, [common, data, model], "Train and score a hybrid.")
    hybrid.add_argument('--mode', choices=('sequential', 'joint'), default='sequential')
    hybrid.add_argument('--hmm-checkpoint', help="Reuse this discrete HMM in a sequential hybrid.")
    hybrid.set_defaults(epochs=10)

    evaluate = command('eval', _eval, [common, data], "Score a checkpoint on the corpus.")
    evaluate.add_argument('--checkpoint', required=True)
    evaluate.add_argument('--range', choices=('valid', 'train'), default='valid')
    evaluate.add_argument('--hmm-checkpoint', help="The HMM of a sequential hybrid.")
    evaluate.add_argument('--lstm-checkpoint', help="The LSTM of a continuous HMM.")

    sample = command('sample', _sample, [common], "Generate text from an LSTM checkpoint.")
    sample.add_argument('--checkpoint', required=True)
    sample.add_argument('--prime', help="The priming text (default: the first vocabulary character).")
    sample.add_argument('--length', type=int, default=200)
    sample.add_argument('--temperature', type=float, default=1.0)

    visualize = command('visualize', _visualize, [common, data, model, tree], "Write the interpretation report.")
    visualize.add_argument('--hmm-checkpoint', help="Color by this discrete HMM instead of training one.")
    visualize.add_argument('--clusters', type=int, default=DEFAULT_CLUSTERS)
    visualize.add_argument('--excerpt', type=int, default=DEFAULT_EXCERPT)
    visualize.add_argument('--tree-dims', type=_dims, default=[0, 1])

    trees = command('tree', _tree, [common, data, model, tree], "Explain hidden dimensions with decision trees.")
    trees.add_argument('--dims', type=_dims, default=[0])
    trees.add_argument('--format', choices=('text', 'dot'), default='text')

    table = command('table', _table, [common], "Merge results files into one table.")
    table.add_argument('results', nargs='+', help="results.csv files.")
    table.add_argument('--out')
    table.add_argument('--csv', action='store_true', help="Print CSV instead of markdown.")

    fetch = command('fetch-data', _fetch_data, [common], "Download registered corpora.")
    fetch.add_argument('names', nargs='*', help="Dataset names (default: every dataset with a URL).")
    fetch.add_argument('--force', action='store_true')

    sweep = command('sweep', _sweep, [common], "Run a TOML sweep in parallel worker processes.")
    sweep.add_argument('--plan', required=True)
    sweep.add_argument('--workers', type=int)
    sweep.add_argument('--out')

    return parser


def main(argv: list[str] | None = None) -> int:
    """
    The command line front door.

    :param argv: The arguments, ``sys.argv[1:]`` when ``None``.
    :return: The exit code: 0 on success, 1 on a usage error, 2 on a data error, 3 on a numerical failure.
    """

    configure_logging()

    try:
        args = build_parser().parse_args(argv)

        configure_logging(level=args.log_level)

        return args.handler(args, load_settings(path=args.config))

    except LabError as error:
        logger.error("Command failed.", extra=fields(kind=type(error).__name__, exit_code=error.exit_code,
                                                     error=str(error)))

        return error.exit_code


if __name__ == '__main__':
    sys.exit(main())
