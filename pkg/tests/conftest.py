import numpy as np
import pytest

from wsntrack.calibration import calibration_config, calibration_topology
from wsntrack.config import validate_config


@pytest.fixture
def default_config():
    return validate_config({})


@pytest.fixture
def short_config():
    # default network, 20 rounds
    return validate_config({"duration_s": 40})


@pytest.fixture(scope="session")
def calib_topology():
    return calibration_topology()


@pytest.fixture
def calib_config():
    return calibration_config()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance summary, then assert."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _VERDICTS.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
