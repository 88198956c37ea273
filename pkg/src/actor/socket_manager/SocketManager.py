import logging
import tempfile
from asyncio import CancelledError, Queue, Task, create_task
from pathlib import Path
from typing import Literal

from zmq import PULL, PUSH, TYPE, Socket

from src.core import UsageError, fields

logger = logging.getLogger(__name__)

Name = str
Method = str
Endpoint = str
Topic = bytes

IPC = 'ipc'
BIND, CONNECT = 'bind', 'connect'

EMITTING_TYPES = (PUSH,)
RECEIVING_TYPES = (PULL,)

LINGER_MS = 2000


class SocketManager:
    """
    ``SocketManager`` class owning one ZeroMQ socket and the background tasks moving events between it and two asyncio
    queues. An event is a ``(topic, payload)`` pair sent as a two-part message.
    """

    @staticmethod
    def get_ipc_endpoint(
        reference: str,
        directory: str | None = None
    ) -> str:
        """
        Returns the IPC endpoint of ``reference``, a socket file in ``directory`` or the temporary directory.

        :param reference: The unique identifier used to construct the IPC endpoint.
        :param directory: The directory of the socket file.
        :return: The constructed IPC endpoint.
        """

        return f"{IPC}://{Path(directory or tempfile.gettempdir()) / reference}.ipc"

    def __init__(
        self,
        name: Name,
        socket: Socket
    ):
        """
        Initializes a ``SocketManager`` with the provided ``name`` and ``socket``.

        :param name: The name associated with the ``SocketManager``.
        :param socket: The ZeroMQ socket to be managed, of a type in ``EMITTING_TYPES`` or ``RECEIVING_TYPES``.
        """

        # private

        self._emit_queue: Queue = Queue()
        self._recv_queue: Queue = Queue()

        self._emit_task: Task | None = None
        self._recv_task: Task | None = None

        # public

        self.name = name
        self.socket = socket

        self.endpoints: dict[Method, set[Endpoint]] = {BIND: set(), CONNECT: set()}

    def __str__(self):

        return f"{self.__class__.__name__}({self.name})"

    # private

    async def _background_emit(self) -> None:
        """
        Sends every event put into the emit queue, in order, until cancelled.
        """

        try:
            while True:

                await self.socket.send_multipart(msg_parts=await self._emit_queue.get())

                self._emit_queue.task_done()

        except CancelledError:
            return None

        except Exception:
            logger.exception("The emitter failed.", extra=fields(socket=self.name))

    async def _background_recv(self) -> None:
        """
        Puts the payload of every received event into the receive queue, until cancelled.
        """

        try:
            while True:

                _, payload = await self.socket.recv_multipart()

                await self._recv_queue.put(item=payload)

        except CancelledError:
            return None

        except Exception:
            logger.exception("The receiver failed.", extra=fields(socket=self.name))

    def _link(
        self,
        method: Literal['bind', 'connect'],
        endpoint: Endpoint
    ) -> None:
        """
        :raise UsageError: If the socket is already linked to ``endpoint`` with ``method``.
        """

        if endpoint in self.endpoints[method]:
            raise UsageError(f"{self} can't {method} the socket multiple times to the endpoint {endpoint}.")

        getattr(self.socket, method)(addr=endpoint)

        # update
        self.endpoints[method].add(endpoint)

        logger.debug("Linked socket.", extra=fields(socket=self.name, method=method, endpoint=endpoint))

    # public

    def bind_via_ipc(
        self,
        reference: str
    ) -> None:

        self._link(method=BIND, endpoint=self.get_ipc_endpoint(reference=reference))

    def connect_via_ipc(
        self,
        reference: str
    ) -> None:

        self._link(method=CONNECT, endpoint=self.get_ipc_endpoint(reference=reference))

    def can_emit(self) -> bool:

        return self.socket.getsockopt(TYPE) in EMITTING_TYPES

    def can_receive(self) -> bool:

        return self.socket.getsockopt(TYPE) in RECEIVING_TYPES

    async def emit(
        self,
        event: tuple[Topic, bytes]
    ) -> None:
        """
        Queues ``event`` for the background emitter.

        :param event: The ``topic`` and the serialized message.
        :return: ``None``
        :raise UsageError: If the socket cannot send.
        """

        if not self.can_emit():
            raise UsageError(f"{self} holds a socket that cannot send.")

        await self._emit_queue.put(item=event)

    async def recv(self) -> bytes:
        """
        :return: The payload of the next received event.
        """

        payload = await self._recv_queue.get()
        self._recv_queue.task_done()

        return payload

    async def flush(self) -> None:
        """
        Waits until the background emitter has handed every queued event to the socket.
        """

        if self.is_emitting():
            await self._emit_queue.join()

    def is_emitting(self) -> bool:

        return self._emit_task is not None

    def is_receiving(self) -> bool:

        return self._recv_task is not None

    def boot(self) -> None:
        """
        Starts the background emitter of a sending socket or the background receiver of a receiving one.

        :return: ``None``
        """

        if self.can_emit() and not self.is_emitting():
            self._emit_task = create_task(coro=self._background_emit())

        if self.can_receive() and not self.is_receiving():
            self._recv_task = create_task(coro=self._background_recv())

    async def stop(self) -> None:
        """
        Cancels the background tasks; queued events that were not sent are dropped.

        :return: ``None``
        """

        for attribute in ('_emit_task', '_recv_task'):

            task = getattr(self, attribute)

            if task is not None:
                task.cancel()

                try:
                    await task

                except CancelledError:
                    pass

                finally:
                    setattr(self, attribute, None)

        self._emit_queue = Queue()
        self._recv_queue = Queue()

    async def terminate(self) -> None:
        """
        Stops the background tasks and closes the socket, giving messages already handed to it ``LINGER_MS`` to leave.

        :return: ``None``
        """

        await self.stop()

        self.socket.close(linger=LINGER_MS)

        for endpoints in self.endpoints.values():
            endpoints.clear()
