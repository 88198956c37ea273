import logging
import multiprocessing
import os
import uuid
from pathlib import Path

import msgspec
from msgspec import Struct

from src.actor import start_actor
from src.core import DataError, LabSettings, UsageError, configure_logging, fields
from src.harness.ExperimentConfig import ExperimentConfig
from src.harness.messages import FailedRun, JobDone
from src.harness.SweepCoordinator import SweepCoordinator
from src.harness.SweepWorker import SweepWorker

logger = logging.getLogger(__name__)

JOIN_TIMEOUT_S = 10.0


class SweepPlan(Struct, kw_only=True, frozen=True):
    """
    A TOML sweep file: ``workers`` and a list of ``[[experiments]]`` tables.
    """

    experiments: list[ExperimentConfig]
    workers: int = 1


def load_sweep_plan(path: Path) -> SweepPlan:
    """
    :raise DataError: If the file is missing or does not describe a sweep.
    """

    try:
        return msgspec.toml.decode(path.read_bytes(), type=SweepPlan)

    except OSError as exception:
        raise DataError(f"Cannot read the sweep file {path}: {exception}") from exception

    except msgspec.DecodeError as exception:
        raise DataError(f"Invalid sweep file {path}: {exception}") from exception


def _worker_main(
    name: str,
    jobs_reference: str,
    results_reference: str,
    settings: LabSettings,
    log_level: int
) -> None:

    configure_logging(level=log_level)

    start_actor(actor=SweepWorker(name=name, jobs_reference=jobs_reference, results_reference=results_reference,
                                  settings=settings))


def run_sweep(
    configs: list[ExperimentConfig],
    workers: int,
    settings: LabSettings,
    log_level: int = logging.INFO
) -> list[JobDone | FailedRun]:
    """
    Runs every experiment of ``configs`` in ``workers`` worker processes.

    The coordinator lives in this process; the workers are spawned processes talking to it over two IPC sockets. A
    failed experiment becomes a ``FailedRun`` and does not stop the others.

    :param configs: The experiments, at least one.
    :param workers: The number of worker processes, at least 1; capped at the number of experiments.
    :param settings: The settings handed to every worker.
    :param log_level: The logging level of the workers.
    :return: One reply per experiment, in order.
    :raise UsageError: If there is no experiment or no worker.
    :raise LabError: If a worker dies before the sweep finishes.
    """

    if not configs:
        raise UsageError("A sweep needs at least one experiment.")

    if workers < 1:
        raise UsageError(f"A sweep needs at least one worker, got {workers}.")

    workers = min(workers, len(configs))

    stem = f"hmm-lstm-lab-{os.getpid()}-{uuid.uuid4().hex[:8]}"
    jobs_reference, results_reference = f"{stem}-jobs", f"{stem}-results"

    coordinator = SweepCoordinator(name='coordinator', jobs_reference=jobs_reference,
                                   results_reference=results_reference)

    context = multiprocessing.get_context('spawn')
    processes = [
        context.Process(target=_worker_main, name=f"sweep-worker-{k}", kwargs={
            'name': f"worker-{k}",
            'jobs_reference': jobs_reference,
            'results_reference': results_reference,
            'settings': settings,
            'log_level': log_level,
        })
        for k in range(workers)
    ]

    def healthy() -> bool:
        # a crashed worker takes its queued jobs with it
        return all(p.exitcode in (None, 0) for p in processes) and any(p.exitcode is None for p in processes)

    for process in processes:
        process.start()

    logger.info("Started sweep workers.", extra=fields(workers=workers, jobs=len(configs), reference=stem))

    try:
        replies = start_actor(actor=coordinator, configs=configs, workers=workers, healthy=healthy)

    finally:
        for process in processes:
            process.join(timeout=JOIN_TIMEOUT_S)

            if process.is_alive():
                logger.warning("Terminating a sweep worker.", extra=fields(worker=process.name))
                process.terminate()
                process.join()

    return replies
