import numpy as np
import pytest

from reference import RSC_CODE_FILE
from ssconv import StateSpaceEncoder, rsc_example


@pytest.fixture
def rsc():
    return rsc_example()


@pytest.fixture
def code_file(tmp_path):
    path = tmp_path / "rsc.ssc"
    path.write_text(RSC_CODE_FILE)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def encoder_from(code):
    return StateSpaceEncoder.from_lists(code["A"], code["B"], code["C"], code["D"])


def random_encoder(rng, m, k, n):
    return StateSpaceEncoder.from_lists(
        rng.integers(0, 2, (m, m)), rng.integers(0, 2, (m, k)),
        rng.integers(0, 2, (n, m)), rng.integers(0, 2, (n, k)),
    )


# One PASS/FAIL line per acceptance criterion in the terminal summary.
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    failed = report.failed or (report.when == "call" and report.skipped)
    previous = _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, previous and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:>2}. {title}")
