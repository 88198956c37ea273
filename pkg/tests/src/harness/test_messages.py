from src.actor import MessagePack
from src.harness import ExperimentConfig, FailedRun, JobDone, StopSignal, SweepJob, WorkerReady
from src.harness.messages import CoordinatorInbox, WorkerInbox


def test_worker_inbox():

    serializer = MessagePack(type=WorkerInbox)
    job = SweepJob(index=3, config=ExperimentConfig(dataset='sample', method='hybrid', hidden_dim=5, n_hmm=10,
                                                    hmm_checkpoint='runs/hmm'))

    assert serializer.decode(data=serializer.encode(obj=job)) == job
    assert isinstance(serializer.decode(data=serializer.encode(obj=StopSignal())), StopSignal)


def test_coordinator_inbox(rows):

    serializer = MessagePack(type=CoordinatorInbox)
    messages = [
        WorkerReady(worker='worker-0'),
        JobDone(index=0, worker='worker-0', row=rows[0]),
        FailedRun(index=1, worker='worker-1', context='dataset=x', kind='DataError', error='boom', exit_code=2),
    ]

    assert [serializer.decode(data=serializer.encode(obj=message)) for message in messages] == messages
