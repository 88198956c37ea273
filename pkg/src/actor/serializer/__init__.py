from src.actor.serializer.AbstractSerializer import AbstractSerializer
from src.actor.serializer.MessagePack import MessagePack


__all__ = [
    'AbstractSerializer',
    'MessagePack',
]
