import pytest

from src.core import DataError
from src.harness import ExperimentConfig, FailedRun, JobDone, StopSignal, SweepJob, SweepWorker, WorkerReady
from src.harness.SweepCoordinator import RESULTS


@pytest.fixture
def worker(mocker, reference, settings):

    worker = SweepWorker(name='worker-0', jobs_reference=f"{reference}-jobs", results_reference=f"{reference}-results",
                         settings=settings)

    mocker.patch.object(worker, 'boot_socket_managers')
    mocker.patch.object(worker, 'emit', new_callable=mocker.AsyncMock)
    mocker.patch.object(worker, 'flush', new_callable=mocker.AsyncMock)

    yield worker

    worker._context.destroy(linger=0)


@pytest.mark.asyncio
async def test_runs_jobs_until_stopped(mocker, worker, settings, rows):

    config = ExperimentConfig(dataset='sample', method='discrete_hmm', n_hmm=3)
    run = mocker.patch('src.harness.SweepWorker.run_experiment', side_effect=[rows[0], DataError('boom')])

    mocker.patch.object(worker, 'recv', new_callable=mocker.AsyncMock, side_effect=[
        SweepJob(index=4, config=config),
        SweepJob(index=5, config=config),
        StopSignal(),
    ])

    assert await worker.start() == 2

    assert run.call_args.kwargs == {'config': config, 'settings': settings}
    assert [call.kwargs['message'] for call in worker.emit.call_args_list] == [
        WorkerReady(worker='worker-0'),
        JobDone(index=4, worker='worker-0', row=rows[0]),
        FailedRun(index=5, worker='worker-0', context=config.context(), kind='DataError', error='boom',
                  exit_code=2),
    ]
    assert {call.kwargs['name'] for call in worker.emit.call_args_list} == {RESULTS}
    worker.flush.assert_awaited_once()
