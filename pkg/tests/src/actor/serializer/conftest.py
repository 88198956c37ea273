import pytest
from msgspec import Struct

from src.actor.serializer import MessagePack


class Ping(Struct, tag='ping', frozen=True):
    sequence: int


class Pong(Struct, tag='pong', frozen=True):
    sequence: int
    payload: list[float]


@pytest.fixture
def msgpack_serializer() -> MessagePack:
    return MessagePack()


@pytest.fixture
def typed_serializer() -> MessagePack:
    return MessagePack(type=Ping | Pong)
