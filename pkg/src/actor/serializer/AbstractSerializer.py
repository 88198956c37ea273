from abc import ABC, abstractmethod
from typing import Any


class AbstractSerializer(ABC):
    """
    ``AbstractSerializer`` class turning the messages exchanged by actors into bytes and back.
    Each ``AbstractSerializer`` implementation must override and implement the ``decode()`` and ``encode()`` methods.
    """

    @abstractmethod
    def decode(
        self,
        data: bytes
    ) -> Any:
        """
        Decodes ``data`` into a message.

        :param data: The payload received from a socket.
        :return: The message.
        :raise DataError: If ``data`` is not a valid message.
        """

        ...

    @abstractmethod
    def encode(
        self,
        obj: Any
    ) -> bytes:
        """
        Encodes a message into the payload sent over a socket.

        :param obj: The message.
        :return: The payload.
        """

        ...
