import os
import sys

import pytest

# Add repository root to path for the flat module layout
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from numeric import get_evaluator  # noqa: E402


@pytest.fixture(scope="session")
def evaluator():
    return get_evaluator(40)


@pytest.fixture
def ledger(tmp_path, monkeypatch):
    import config

    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    monkeypatch.setattr(config, "DATABASE_URL", url)
    return url
