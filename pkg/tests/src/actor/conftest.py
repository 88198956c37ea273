import uuid

import pytest

from src.actor import AbstractActor


@pytest.fixture
def actor():

    class Actor(AbstractActor):

        async def start(self, *args, **kwargs) -> None:
            # basic abc implementation
            pass

    actor = Actor(name='AbstractActor')

    yield actor

    actor._context.destroy(linger=0)


@pytest.fixture
def reference() -> str:

    return f"hmm-lstm-lab-test-{uuid.uuid4().hex[:8]}"
