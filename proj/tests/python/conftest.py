import os
import shutil
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("PRS_CLI") or shutil.which("prs")
    if not path or not Path(path).exists():
        pytest.skip("prs CLI not available (set PRS_CLI)")
    return path
