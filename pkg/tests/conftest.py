"""Shared fixtures: preset systems paired with their automata, built once."""

import pytest

from numera.numeration import PRESET_NAMES
from numera.numlang import preset_pair


@pytest.fixture(scope="session")
def presets():
    return {name: preset_pair(name) for name in PRESET_NAMES}
