import numpy as np
import pytest

from geosub.sysmodel import StateSpaceSystem


def make(A, B, C, D):
    return StateSpaceSystem(np.array(A, float), np.array(B, float),
                            np.array(C, float), np.array(D, float))


# hand-worked fixtures
S1 = make([[0, 1], [0, 0]], [[0], [1]], [[1, 0]], [[0]])
S2 = make([[-1]], [[1]], [[1]], [[1]])
S3 = make([[-1]], [[1]], [[1], [0]], [[0], [1]])
S5 = make([[0, 0], [0, 0]], [[1], [0]], [[0, 1]], [[0]])


@pytest.fixture
def s1():
    return S1


@pytest.fixture
def s2():
    return S2


@pytest.fixture
def s3():
    return S3


@pytest.fixture
def s5():
    return S5


# -- acceptance summary: one line per criterion ------------------------------

_criteria: dict[int, tuple[str, bool]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not report.failed:
        return
    mark = dict(report.user_properties).get("criterion")
    if mark is None:
        return
    num, title = mark
    ok = report.passed
    prev = _criteria.get(num)
    _criteria[num] = (title, ok and (prev is None or prev[1]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")
