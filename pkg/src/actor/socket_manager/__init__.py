from src.actor.socket_manager.SocketManager import SocketManager


__all__ = [
    'SocketManager',
]
