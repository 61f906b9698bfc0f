import os
import sys
from pathlib import Path

import pytest

_build = os.environ.get("SCIRANK_PYTHONPATH")
if _build:
    sys.path.insert(0, _build)

FIXTURES = Path(os.environ.get("SCIRANK_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))


@pytest.fixture
def fixtures():
    return FIXTURES
