import os
import shutil
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("IRS_OPSIM_CLI") or shutil.which("irs-opsim")
    if not path:
        pytest.skip("irs-opsim executable not found")
    return path


@pytest.fixture(scope="session")
def scenarios_dir():
    return REPO / "scenarios"
