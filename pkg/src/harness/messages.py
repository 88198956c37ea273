from msgspec import Struct

from src.harness.ExperimentConfig import ExperimentConfig
from src.harness.results import ResultsRow

JOB_TOPIC = b'sweep.job'
RESULT_TOPIC = b'sweep.result'


class SweepJob(Struct, tag='job', frozen=True):
    index: int
    config: ExperimentConfig


class StopSignal(Struct, tag='stop', frozen=True):
    pass


class WorkerReady(Struct, tag='ready', frozen=True):
    worker: str


class JobDone(Struct, tag='done', frozen=True):
    index: int
    worker: str
    row: ResultsRow


class FailedRun(Struct, tag='failed', frozen=True):
    """
    An experiment that raised a library error; ``kind`` is the error class name and ``exit_code`` its exit code.
    """

    index: int
    worker: str
    context: str
    kind: str
    error: str
    exit_code: int


WorkerInbox = SweepJob | StopSignal
CoordinatorInbox = WorkerReady | JobDone | FailedRun
