import asyncio

import pytest

from src.core import LabError, UsageError
from src.harness import ExperimentConfig, FailedRun, JobDone, StopSignal, SweepCoordinator, SweepJob, WorkerReady
from src.harness.SweepCoordinator import JOBS


@pytest.fixture
def coordinator(mocker, reference):

    coordinator = SweepCoordinator(name='coordinator', jobs_reference=f"{reference}-jobs",
                                   results_reference=f"{reference}-results")

    mocker.patch.object(coordinator, 'boot_socket_managers')
    mocker.patch.object(coordinator, 'emit', new_callable=mocker.AsyncMock)
    mocker.patch.object(coordinator, 'flush', new_callable=mocker.AsyncMock)

    yield coordinator

    coordinator._context.destroy(linger=0)


@pytest.fixture
def configs() -> list[ExperimentConfig]:

    return [ExperimentConfig(dataset='sample', method='discrete_hmm', n_hmm=n) for n in (2, 3)]


@pytest.mark.asyncio
async def test_dispatch(mocker, coordinator, configs, rows):

    done = JobDone(index=1, worker='worker-1', row=rows[0])
    failed = FailedRun(index=0, worker='worker-0', context=configs[0].context(), kind='DataError', error='boom',
                       exit_code=2)

    mocker.patch.object(coordinator, 'recv', new_callable=mocker.AsyncMock, side_effect=[
        WorkerReady(worker='worker-0'),
        WorkerReady(worker='worker-0'),
        WorkerReady(worker='worker-1'),
        done,
        WorkerReady(worker='worker-2'),
        failed,
    ])

    replies = await coordinator.start(configs=configs, workers=2)

    assert replies == [failed, done]
    assert [call.kwargs['message'] for call in coordinator.emit.call_args_list] == [
        SweepJob(index=0, config=configs[0]),
        SweepJob(index=1, config=configs[1]),
        StopSignal(),
        StopSignal(),
    ]
    assert {call.kwargs['name'] for call in coordinator.emit.call_args_list} == {JOBS}
    coordinator.flush.assert_awaited_once()


@pytest.mark.asyncio
async def test_lost_workers(mocker, coordinator, configs):

    async def silent(name):
        await asyncio.sleep(3600)

    mocker.patch('src.harness.SweepCoordinator.POLL_S', 0.01)
    mocker.patch.object(coordinator, 'recv', side_effect=silent)

    with pytest.raises(LabError, match='lost its workers'):
        await coordinator.start(configs=configs, workers=1, healthy=lambda: False)

    coordinator.emit.assert_not_awaited()


@pytest.mark.asyncio
async def test_needs_a_worker(coordinator, configs):

    with pytest.raises(UsageError):
        await coordinator.start(configs=configs, workers=0)


def test_str(coordinator):

    assert str(coordinator) == 'SweepCoordinator(coordinator)'
