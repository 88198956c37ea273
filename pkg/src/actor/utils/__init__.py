from src.actor.utils.start_actor import setup_event_loop, start_actor


__all__ = [
    'setup_event_loop', 'start_actor',
]
