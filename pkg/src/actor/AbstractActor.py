import logging
from abc import ABC, abstractmethod
from typing import Any

from zmq import PULL, PUSH
from zmq.asyncio import Context

from src.actor.serializer import MessagePack
from src.actor.socket_manager.SocketManager import SocketManager
from src.core import UsageError, fields

logger = logging.getLogger(__name__)

Name = str
SocketType = int
Topic = bytes
Message = Any


class AbstractActor(ABC):
    """
    ``AbstractActor`` class for managing named ``SocketManager`` over one ZeroMQ context.
    Every message is encoded with ``MessagePack``; received payloads are decoded into the actor's ``message_type``.
    """

    SOCKET_TYPES = (PUSH, PULL)

    def __init__(
        self,
        name: str,
        message_type: Any = Any
    ):
        """
        :param name: The ``name`` of the actor.
        :param message_type: The type of every message this actor receives, usually a union of tagged structs.
        """

        # private

        self._context = Context(io_threads=1)
        self._serializer = MessagePack(type=message_type)

        # public

        self.name = name
        self.socket_managers: dict[Name, SocketManager] = {}

    def __str__(self):

        return f"{self.__class__.__name__}({self.name})"

    def __getitem__(
        self,
        name: Name
    ) -> SocketManager:
        """
        :raise KeyError: If no such ``SocketManager`` is found in this ``AbstractActor``.
        """

        return self.socket_managers[name]

    # private

    def _create_socket_manager(
        self,
        name: Name,
        socket_type: SocketType
    ) -> SocketManager:
        """
        :raise UsageError: If the ``name`` is taken or the ``socket_type`` is unsupported.
        """

        if name in self.socket_managers:
            raise UsageError(f"{self} already has a socket named {name}.")

        if socket_type not in self.SOCKET_TYPES:
            raise UsageError(f"{self} does not support the socket type {socket_type}.")

        self.socket_managers[name] = SocketManager(name=name, socket=self._context.socket(socket_type=socket_type))

        return self.socket_managers[name]

    # public

    def create_push_socket_manager(
        self,
        name: Name
    ) -> SocketManager:

        return self._create_socket_manager(name=name, socket_type=PUSH)

    def create_pull_socket_manager(
        self,
        name: Name
    ) -> SocketManager:

        return self._create_socket_manager(name=name, socket_type=PULL)

    async def emit(
        self,
        name: Name,
        topic: Topic,
        message: Message
    ) -> None:
        """
        Encodes ``message`` and queues it, under ``topic``, on the ``SocketManager`` called ``name``.

        :param name: The ``name`` of the sending ``SocketManager``.
        :param topic: The topic frame of the event.
        :param message: The message.
        :return: ``None``
        """

        await self.socket_managers[name].emit(event=(topic, self._serializer.encode(obj=message)))

    async def recv(
        self,
        name: Name
    ) -> Message:
        """
        :param name: The ``name`` of the receiving ``SocketManager``.
        :return: The next message, decoded into the actor's message type.
        :raise DataError: If the payload does not decode into the message type.
        """

        return self._serializer.decode(data=await self.socket_managers[name].recv())

    async def flush(self) -> None:
        """
        Waits until every queued message has been handed to its socket.
        """

        for socket_manager in self.socket_managers.values():
            await socket_manager.flush()

    def boot_socket_managers(self) -> None:

        for socket_manager in self.socket_managers.values():
            socket_manager.boot()

    async def terminate_socket_managers(self) -> None:

        for socket_manager in self.socket_managers.values():
            await socket_manager.terminate()

    @abstractmethod
    async def start(self, *args, **kwargs) -> Any:
        """
        Starts the ``AbstractActor`` instance by booting all associated ``SocketManager``.
        Child implementations must override this method and call ``await super().start()`` before exchanging messages.

        :return: Whatever the implementation produces.
        """

        self.boot_socket_managers()

        logger.debug("Actor started.", extra=fields(actor=self.name, sockets=len(self.socket_managers)))

    async def terminate(self) -> None:
        """
        Terminates all associated ``SocketManager`` and the ZeroMQ context.

        :return: ``None``
        """

        await self.terminate_socket_managers()

        self._context.term()

        # init
        self.socket_managers = {}

        logger.debug("Actor terminated.", extra=fields(actor=self.name))
