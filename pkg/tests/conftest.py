from __future__ import annotations

import pytest

# criterion number -> (passed, message); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def record(num, ok: bool, msg: str) -> None:
    ACCEPTANCE[num] = (ok, msg)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE, key=lambda k: (int(str(k).rstrip("ab")), str(k))):
        ok, msg = ACCEPTANCE[num]
        status = "PASS" if ok is True else ("SKIP" if ok is None else "FAIL")
        terminalreporter.write_line(f"criterion {num}: {status}  {msg}")


@pytest.fixture
def out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("PADENOISE_OUT", str(tmp_path / "out"))
    return tmp_path / "out"
