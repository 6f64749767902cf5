import pytest

import livetune


@pytest.fixture(autouse=True)
def clean_process_state():
    """Each test starts with an empty registry and no directory running."""
    livetune.shutdown()
    yield
    livetune.shutdown()
