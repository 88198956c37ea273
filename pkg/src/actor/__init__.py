from src.actor.AbstractActor import AbstractActor
from src.actor.serializer import AbstractSerializer, MessagePack
from src.actor.socket_manager import SocketManager
from src.actor.utils import setup_event_loop, start_actor


__all__ = [
    'AbstractActor',
    'AbstractSerializer', 'MessagePack',
    'SocketManager',
    'setup_event_loop', 'start_actor',
]
