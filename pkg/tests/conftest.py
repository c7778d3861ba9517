from __future__ import annotations

import random

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(12345)


def state_of(game, *strategies):
    """Build a state from resource-id lists, one per player."""
    return game.make_state([frozenset(s) for s in strategies])
