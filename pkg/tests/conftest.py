import sys
from pathlib import Path

import pytest

# Add the project root to the path so tests import src.modcalc.* and utils.*
sys.path.insert(0, str(Path(__file__).parent.parent))


@pytest.fixture
def tmp_cache(tmp_path):
    from src.modcalc.dlog_cache import DlogCache
    return DlogCache(tmp_path / "dlog", enabled=True)
