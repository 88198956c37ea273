import asyncio

import pytest
from zmq import PULL, PUSH, TYPE

from src.actor.socket_manager import SocketManager
from src.core import UsageError

NAME = 'sm'


def mock_socket(mocker, socket_type: int):

    socket = mocker.Mock()
    socket.getsockopt.side_effect = lambda option: socket_type if option == TYPE else 0

    return socket


def test_create_endpoints():

    assert SocketManager.get_ipc_endpoint(reference='ref', directory='/tmp') == 'ipc:///tmp/ref.ipc'


def test_bind_and_connect_endpoints(mocker):

    socket = mock_socket(mocker=mocker, socket_type=PUSH)
    manager = SocketManager(name=NAME, socket=socket)

    manager.bind_via_ipc(reference='ref')
    socket.bind.assert_called_with(addr=manager.get_ipc_endpoint(reference='ref'))

    manager.connect_via_ipc(reference='other')
    socket.connect.assert_called_with(addr=manager.get_ipc_endpoint(reference='other'))


def test_link_twice(mocker):

    manager = SocketManager(name=NAME, socket=mock_socket(mocker=mocker, socket_type=PUSH))

    manager.bind_via_ipc(reference='ref')

    with pytest.raises(UsageError):
        manager.bind_via_ipc(reference='ref')


@pytest.mark.parametrize('socket_type, emits, receives', [(PUSH, True, False), (PULL, False, True)])
def test_capabilities(mocker, socket_type, emits, receives):

    manager = SocketManager(name=NAME, socket=mock_socket(mocker=mocker, socket_type=socket_type))

    assert manager.can_emit() is emits
    assert manager.can_receive() is receives


@pytest.mark.asyncio
async def test_emit_and_receive_messages(mocker):

    manager = SocketManager(name=NAME, socket=mock_socket(mocker=mocker, socket_type=PUSH))

    await manager.emit(event=(b'topic', b'message'))
    assert not manager._emit_queue.empty()

    await manager._recv_queue.put(item=b'response')
    assert await manager.recv() == b'response'


@pytest.mark.asyncio
async def test_emit_on_a_receiving_socket(mocker):

    manager = SocketManager(name=NAME, socket=mock_socket(mocker=mocker, socket_type=PULL))

    with pytest.raises(UsageError):
        await manager.emit(event=(b'topic', b'message'))


@pytest.mark.asyncio
@pytest.mark.parametrize('socket_type', [PUSH, PULL])
async def test_boot_follows_the_socket_type(mocker, socket_type):

    socket = mock_socket(mocker=mocker, socket_type=socket_type)
    socket.send_multipart = mocker.AsyncMock()
    socket.recv_multipart = mocker.AsyncMock(side_effect=asyncio.CancelledError)

    manager = SocketManager(name=NAME, socket=socket)
    manager.boot()

    assert manager.is_emitting() is (socket_type == PUSH)
    assert manager.is_receiving() is (socket_type == PULL)

    await manager.stop()

    assert not manager.is_emitting()
    assert not manager.is_receiving()


@pytest.mark.asyncio
async def test_flush_waits_for_the_emitter(mocker):

    socket = mock_socket(mocker=mocker, socket_type=PUSH)
    socket.send_multipart = mocker.AsyncMock()

    manager = SocketManager(name=NAME, socket=socket)
    manager.boot()

    for k in range(3):
        await manager.emit(event=(b'topic', bytes([k])))

    await asyncio.wait_for(manager.flush(), timeout=5.0)

    assert socket.send_multipart.await_count == 3

    await manager.terminate()

    socket.close.assert_called_once()
