import csv
import io
import logging
import math
from pathlib import Path

from msgspec import Struct

from src.core import DataError, NumericalError, UsageError, fields

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('dataset', 'method', 'parameter_count', 'h', 'n_hmm', 'validation_ll', 'training_ll', 'seed',
               'wall_time_s')

MARKDOWN_COLUMNS = ('Data', 'Method', 'Parameters', 'LSTM dims', 'HMM states', 'Validation', 'Training')

METHOD_TITLES = {
    'lstm': 'LSTM',
    'discrete_hmm': 'Discrete HMM',
    'continuous_hmm': 'Continuous HMM',
    'hybrid': 'Hybrid',
    'joint_hybrid': 'Joint hybrid',
}


class ResultsRow(Struct, kw_only=True, frozen=True):
    """
    The outcome of one experiment; log likelihoods are mean nats per character.
    """

    dataset: str
    method: str
    parameter_count: int
    h: int | None
    n_hmm: int | None
    validation_ll: float
    training_ll: float
    seed: int
    wall_time_s: float

    def __post_init__(self):

        if not (math.isfinite(self.validation_ll) and math.isfinite(self.training_ll)):
            raise NumericalError(f"Non-finite log likelihoods for {self.dataset}/{self.method}: "
                                 f"validation={self.validation_ll} training={self.training_ll}.")

        if self.parameter_count < 1:
            raise UsageError(f"parameter_count must be positive, got {self.parameter_count}.")


def sort_rows(rows: list[ResultsRow]) -> list[ResultsRow]:
    """
    Groups by dataset, in name order, then sorts by ascending validation log likelihood inside a group.
    """

    return sorted(rows, key=lambda row: (row.dataset, row.validation_ll))


def _optional(value: int | None) -> str:

    return '' if value is None else str(value)


def emit_results_table(rows: list[ResultsRow]) -> tuple[str, str]:
    """
    Formats results the way the comparison table reads.

    :param rows: The results, at least one.
    :return: The CSV text, header line first, and the markdown table.
    :raise UsageError: If ``rows`` is empty.
    """

    if not rows:
        raise UsageError("Cannot emit a results table without rows.")

    ordered = sort_rows(rows=rows)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)

    for row in ordered:
        writer.writerow([row.dataset, row.method, row.parameter_count, _optional(row.h), _optional(row.n_hmm),
                         f"{row.validation_ll:.2f}", f"{row.training_ll:.2f}", row.seed, f"{row.wall_time_s:.3f}"])

    lines = [
        '| ' + ' | '.join(MARKDOWN_COLUMNS) + ' |',
        '|' + '|'.join('---' for _ in MARKDOWN_COLUMNS) + '|',
    ]

    previous = None

    for row in ordered:
        data = row.dataset if row.dataset != previous else ''
        previous = row.dataset

        lines.append(f"| {data} | {METHOD_TITLES.get(row.method, row.method)} | {row.parameter_count} | "
                     f"{_optional(row.h)} | {_optional(row.n_hmm)} | {row.validation_ll:.2f} | "
                     f"{row.training_ll:.2f} |")

    return buffer.getvalue(), '\n'.join(lines) + '\n'


def parse_results_csv(text: str) -> list[ResultsRow]:
    """
    Reads rows written by ``emit_results_table()``.

    :raise DataError: If the header or a value is malformed.
    """

    reader = csv.DictReader(io.StringIO(text))

    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise DataError(f"Unexpected results header {reader.fieldnames}.")

    rows = []

    for line, record in enumerate(reader, start=2):

        try:
            rows.append(ResultsRow(
                dataset=record['dataset'],
                method=record['method'],
                parameter_count=int(record['parameter_count']),
                h=int(record['h']) if record['h'] else None,
                n_hmm=int(record['n_hmm']) if record['n_hmm'] else None,
                validation_ll=float(record['validation_ll']),
                training_ll=float(record['training_ll']),
                seed=int(record['seed']),
                wall_time_s=float(record['wall_time_s']),
            ))

        except (TypeError, ValueError, ArithmeticError) as exception:
            raise DataError(f"Malformed results line {line}: {exception}") from exception

    return rows


def write_results(
    rows: list[ResultsRow],
    out: Path
) -> tuple[Path, Path]:
    """
    Writes ``results.csv`` and ``results.md`` into ``out``.

    :return: The two paths.
    :raise DataError: If the files cannot be written.
    """

    csv_text, markdown = emit_results_table(rows=rows)
    csv_path, markdown_path = out / 'results.csv', out / 'results.md'

    try:
        out.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(csv_text, encoding='utf-8')
        markdown_path.write_text(markdown, encoding='utf-8')

    except OSError as exception:
        raise DataError(f"Cannot write the results into {out}: {exception}") from exception

    logger.info("Wrote results.", extra=fields(rows=len(rows), csv=str(csv_path), markdown=str(markdown_path)))

    return csv_path, markdown_path
