import json
from pathlib import Path

import pytest

from fpc.construct import ConstructionConfig, construct

BASELINE_PATH = Path(__file__).resolve().parent.parent / "baselines" / "rate_baseline.json"

_criterion_results: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        num, description = marker.args
        _criterion_results[num] = (
            "PASS" if report.passed else "FAIL",
            description,
        )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(_criterion_results):
        verdict, description = _criterion_results[num]
        terminalreporter.write_line(f"criterion {num:>2}: {verdict} - {description}")


def _build(c, l, q):
    cfg = ConstructionConfig(c=c, l=l, q=q, eta=0.05, seed=7)
    return cfg, *construct(cfg)


@pytest.fixture(scope="session")
def built_2_4_13():
    return _build(2, 4, 13)


@pytest.fixture(scope="session")
def built_2_5_11():
    return _build(2, 5, 11)


@pytest.fixture(scope="session")
def built_3_5_11():
    return _build(3, 5, 11)


@pytest.fixture(scope="session")
def built_all(built_2_4_13, built_2_5_11, built_3_5_11):
    return [built_2_4_13, built_2_5_11, built_3_5_11]


@pytest.fixture(scope="session")
def baseline():
    return json.loads(BASELINE_PATH.read_text())
