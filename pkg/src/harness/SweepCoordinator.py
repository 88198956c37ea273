import logging
from asyncio import TimeoutError, wait_for
from typing import Callable

from src.actor import AbstractActor
from src.core import LabError, UsageError, fields
from src.harness.ExperimentConfig import ExperimentConfig
from src.harness.messages import (
    JOB_TOPIC,
    CoordinatorInbox,
    FailedRun,
    JobDone,
    StopSignal,
    SweepJob,
    WorkerReady,
)

logger = logging.getLogger(__name__)

JOBS, RESULTS = 'jobs', 'results'

POLL_S = 1.0


class SweepCoordinator(AbstractActor):
    """
    ``SweepCoordinator`` actor binding a PUSH socket that deals ``SweepJob`` messages to the workers and a PULL socket
    collecting their replies.

    Inherits ``AbstractActor`` class for managing its ``SocketManager``.
    """

    def __init__(
        self,
        name: str,
        jobs_reference: str,
        results_reference: str
    ):
        """
        :param name: The actor name.
        :param jobs_reference: The IPC reference the job socket binds to.
        :param results_reference: The IPC reference the result socket binds to.
        """

        super().__init__(name=name, message_type=CoordinatorInbox)

        self.create_push_socket_manager(name=JOBS).bind_via_ipc(reference=jobs_reference)
        self.create_pull_socket_manager(name=RESULTS).bind_via_ipc(reference=results_reference)

    async def _next(
        self,
        healthy: Callable[[], bool]
    ) -> CoordinatorInbox:
        """
        Waits for the next reply, checking ``healthy`` whenever ``POLL_S`` passes in silence; two failed checks in a row
        end the sweep.
        """

        strikes = 0

        while True:

            try:
                return await wait_for(self.recv(name=RESULTS), timeout=POLL_S)

            except TimeoutError:
                strikes = 0 if healthy() else strikes + 1

                if strikes >= 2:
                    raise LabError(f"{self} lost its workers before the sweep finished.") from None

    async def start(
        self,
        configs: list[ExperimentConfig],
        workers: int,
        healthy: Callable[[], bool] = lambda: True
    ) -> list[JobDone | FailedRun]:
        """
        Waits for ``workers`` workers to report ready, deals one job per configuration and one ``StopSignal`` per
        worker, then collects one reply per job.

        :param configs: The experiments.
        :param workers: The number of workers that will connect.
        :param healthy: Tells whether the workers can still reply.
        :return: The replies, in the order of ``configs``.
        :raise LabError: If the workers stop replying.
        """

        if workers < 1:
            raise UsageError(f"A sweep needs at least one worker, got {workers}.")

        await super().start()

        ready: set[str] = set()

        while len(ready) < workers:
            message = await self._next(healthy=healthy)

            if isinstance(message, WorkerReady):
                ready.add(message.worker)

        for index, config in enumerate(configs):
            await self.emit(name=JOBS, topic=JOB_TOPIC, message=SweepJob(index=index, config=config))

        for _ in range(workers):
            await self.emit(name=JOBS, topic=JOB_TOPIC, message=StopSignal())

        logger.info("Dispatched sweep.", extra=fields(jobs=len(configs), workers=workers))

        replies: dict[int, JobDone | FailedRun] = {}

        while len(replies) < len(configs):

            message = await self._next(healthy=healthy)

            if isinstance(message, WorkerReady):
                continue

            replies[message.index] = message

            logger.info("Sweep job finished.", extra=fields(index=message.index, worker=message.worker,
                                                            ok=isinstance(message, JobDone), done=len(replies),
                                                            total=len(configs)))

        await self.flush()

        return [replies[index] for index in range(len(configs))]
