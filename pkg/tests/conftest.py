import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict = {}


@pytest.fixture
def criterion():
    def record(key: str, ok: bool, detail: str = "") -> bool:
        _CRITERIA[key] = (ok, detail)
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else ""))
