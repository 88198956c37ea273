import sys
from asyncio import run, set_event_loop_policy
from typing import Any

from src.actor.AbstractActor import AbstractActor


def setup_event_loop() -> None:
    """
    Installs ``uvloop`` as the event loop policy when the platform is not ``'win32'`` and ``uvloop`` is installed.

    :return: ``None``
    """

    if sys.platform != 'win32':

        try:
            from uvloop import EventLoopPolicy

            set_event_loop_policy(policy=EventLoopPolicy())

        except ImportError:
            # uvloop is not installed, fallback to default asyncio event loop
            pass


async def _lifecycle(
    actor: AbstractActor,
    **kwargs
) -> Any:

    try:
        return await actor.start(**kwargs)

    finally:
        await actor.terminate()


def start_actor(
    actor: AbstractActor,
    **kwargs
) -> Any:
    """
    Runs the ``actor``'s ``start()`` to completion on a fresh event loop, then terminates the ``actor`` even if
    ``start()`` raised or was interrupted.

    :param actor: The ``AbstractActor`` instance to start.
    :param kwargs: Additional keyword arguments to pass to the ``actor``'s ``start()`` method.
    :return: The result of ``start()``.
    """

    setup_event_loop()

    return run(main=_lifecycle(actor=actor, **kwargs))
