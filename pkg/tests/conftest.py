import contextlib

import numpy as np
import pytest

_acceptance = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion():
    """``with criterion(7, "text") as notes:`` records PASS or FAIL, plus any notes, for the summary."""
    @contextlib.contextmanager
    def record(number, label):
        notes = []
        try:
            yield notes
        except BaseException as exc:
            why = str(exc).strip().splitlines()[0] if str(exc).strip() else type(exc).__name__
            _acceptance[number] = (label, "FAIL", "; ".join(notes + [why]))
            raise
        _acceptance[number] = (label, "PASS", "; ".join(notes))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        label, status, why = _acceptance[number]
        line = f"criterion {number:2d} {status}  {label}"
        terminalreporter.write_line(line + (f"  ({why})" if why else ""))
