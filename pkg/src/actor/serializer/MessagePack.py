from typing import Any

from msgspec import DecodeError
from msgspec.msgpack import Decoder, Encoder

from src.actor.serializer.AbstractSerializer import AbstractSerializer
from src.core import DataError


class MessagePack(AbstractSerializer):
    """
    MessagePack serializer decoding into a declared message ``type``, typically a union of tagged ``msgspec.Struct``
    messages, so a payload is validated and dispatched on its tag in one step.

    Inherits ``AbstractSerializer`` class for implementing the ``decode()`` and ``encode()`` methods.
    """

    def __init__(
        self,
        type: Any = Any
    ):
        """
        :param type: The type every decoded payload must match; ``Any`` accepts plain MessagePack values.
        """

        # private

        self._decoder = Decoder(type=type)
        self._encoder = Encoder()

        # public

        self.type = type

    def decode(
        self,
        data: bytes
    ) -> Any:

        try:
            return self._decoder.decode(data)

        except DecodeError as error:
            raise DataError(f"Undecodable message: {error}") from error

    def encode(
        self,
        obj: Any
    ) -> bytes:

        return self._encoder.encode(obj)
