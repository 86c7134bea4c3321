import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ginv.coreseq import build_core  # noqa: E402
from ginv.summatory import build_summatory  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def s500():
    return build_summatory(build_core(500))


@pytest.fixture(scope="session")
def s10k():
    return build_summatory(build_core(10**4))


@pytest.fixture(scope="session")
def s1m():
    return build_summatory(build_core(10**6))


@pytest.fixture(scope="session")
def reference_table_path():
    return DATA / "reference_table.csv"


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import CRITERIA

    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
