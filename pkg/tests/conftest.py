import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=120, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store the outcome of one acceptance criterion for the terminal summary."""

    def _record(criterion: str, ok: bool, detail: str = ""):
        _ACCEPTANCE[criterion] = (bool(ok), detail)
        return bool(ok)

    return _record


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
