import os
import subprocess
import sys
from pathlib import Path

import pytest

SRC_ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli_env() -> dict:
    """Environment for running the package as a module from a source checkout."""
    env = os.environ.copy()
    env.pop("CCC_THREADS", None)
    existing = env.get("PYTHONPATH", "")
    env["PYTHONPATH"] = os.pathsep.join(filter(None, [str(SRC_ROOT), existing]))
    return env


@pytest.fixture
def run_cli(cli_env):
    def run(*args, env=None):
        return subprocess.run(
            [sys.executable, "-m", "ccc_order", *args],
            capture_output=True,
            text=True,
            env={**cli_env, **(env or {})},
        )

    return run
