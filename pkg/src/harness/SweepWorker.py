import logging
from asyncio import to_thread

from src.actor import AbstractActor
from src.core import LabError, LabSettings, fields
from src.harness.experiment import run_experiment
from src.harness.messages import RESULT_TOPIC, FailedRun, JobDone, StopSignal, WorkerInbox, WorkerReady
from src.harness.SweepCoordinator import JOBS, RESULTS

logger = logging.getLogger(__name__)


class SweepWorker(AbstractActor):
    """
    ``SweepWorker`` actor pulling ``SweepJob`` messages, running each experiment and pushing back a ``JobDone`` or a
    ``FailedRun``, until it pulls a ``StopSignal``.

    Inherits ``AbstractActor`` class for managing its ``SocketManager``.
    """

    def __init__(
        self,
        name: str,
        jobs_reference: str,
        results_reference: str,
        settings: LabSettings
    ):

        super().__init__(name=name, message_type=WorkerInbox)

        # public

        self.settings = settings

        self.create_pull_socket_manager(name=JOBS).connect_via_ipc(reference=jobs_reference)
        self.create_push_socket_manager(name=RESULTS).connect_via_ipc(reference=results_reference)

    async def start(self) -> int:
        """
        :return: The number of jobs handled.
        """

        await super().start()
        await self.emit(name=RESULTS, topic=RESULT_TOPIC, message=WorkerReady(worker=self.name))

        handled = 0

        while True:

            message = await self.recv(name=JOBS)

            if isinstance(message, StopSignal):
                break

            try:
                # the event loop keeps serving the sockets while the experiment runs
                row = await to_thread(run_experiment, config=message.config, settings=self.settings)
                reply = JobDone(index=message.index, worker=self.name, row=row)

            except LabError as error:
                logger.error("Sweep job failed.", extra=fields(index=message.index, worker=self.name,
                                                               kind=type(error).__name__, error=str(error)))

                reply = FailedRun(index=message.index, worker=self.name, context=message.config.context(),
                                  kind=type(error).__name__, error=str(error), exit_code=error.exit_code)

            await self.emit(name=RESULTS, topic=RESULT_TOPIC, message=reply)
            handled += 1

        await self.flush()

        logger.info("Worker stopped.", extra=fields(worker=self.name, handled=handled))

        return handled
