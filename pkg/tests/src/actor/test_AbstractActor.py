import asyncio

import pytest
from msgspec import Struct
from zmq import PUB

from src.actor import AbstractActor, SocketManager
from src.core import DataError, UsageError

NAME = 'sm'
TOPIC = b'test'


class Greeting(Struct, tag='greeting', frozen=True):
    text: str


class Echo(AbstractActor):

    async def start(self, *args, **kwargs) -> None:
        await super().start()


def test_str(actor):

    assert str(actor) == 'Actor(AbstractActor)'


@pytest.mark.parametrize('create', ['create_push_socket_manager', 'create_pull_socket_manager'])
def test_create_socket_manager(actor, create):

    socket_manager = getattr(actor, create)(name=NAME)

    assert isinstance(socket_manager, SocketManager)
    assert actor[NAME] is socket_manager


def test_create_socket_manager_twice(actor):

    actor.create_push_socket_manager(name=NAME)

    with pytest.raises(UsageError):
        actor.create_pull_socket_manager(name=NAME)


def test_unsupported_socket_type(actor):

    with pytest.raises(UsageError):
        actor._create_socket_manager(name=NAME, socket_type=PUB)


def test_missing_socket_manager(actor):

    with pytest.raises(KeyError):
        actor['missing']


@pytest.mark.asyncio
async def test_emit_encodes_the_message(actor, mocker):

    socket_manager = actor.create_push_socket_manager(name=NAME)
    emit = mocker.patch.object(socket_manager, 'emit', new_callable=mocker.AsyncMock)

    await actor.emit(name=NAME, topic=TOPIC, message={'a': 1})

    emit.assert_awaited_once_with(event=(TOPIC, actor._serializer.encode(obj={'a': 1})))


@pytest.mark.asyncio
async def test_recv_decodes_the_message(actor, mocker):

    socket_manager = actor.create_pull_socket_manager(name=NAME)
    mocker.patch.object(socket_manager, 'recv', new_callable=mocker.AsyncMock,
                        return_value=actor._serializer.encode(obj=[1, 2]))

    assert await actor.recv(name=NAME) == [1, 2]


@pytest.mark.asyncio
async def test_recv_rejects_a_foreign_message(mocker):

    actor = Echo(name='typed', message_type=Greeting)
    socket_manager = actor.create_pull_socket_manager(name=NAME)
    mocker.patch.object(socket_manager, 'recv', new_callable=mocker.AsyncMock, return_value=b'\x92\x01\x02')

    with pytest.raises(DataError):
        await actor.recv(name=NAME)

    await actor.terminate()


@pytest.mark.asyncio
async def test_terminate(actor):

    socket_manager = actor.create_push_socket_manager(name=NAME)

    await actor.terminate()

    assert socket_manager.socket.closed
    assert actor._context.closed
    assert actor.socket_managers == {}


@pytest.mark.asyncio
async def test_push_pull_over_ipc(reference):

    sender = Echo(name='sender', message_type=Greeting)
    receiver = Echo(name='receiver', message_type=Greeting)

    receiver.create_pull_socket_manager(name=NAME).bind_via_ipc(reference=reference)
    sender.create_push_socket_manager(name=NAME).connect_via_ipc(reference=reference)

    try:
        await receiver.start()
        await sender.start()

        await sender.emit(name=NAME, topic=TOPIC, message=Greeting(text='hello'))
        await sender.flush()

        assert await asyncio.wait_for(receiver.recv(name=NAME), timeout=5.0) == Greeting(text='hello')

    finally:
        await sender.terminate()
        await receiver.terminate()
