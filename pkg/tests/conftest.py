"""Shared instances: the two worked rings used across the suite."""

import pytest

from arcurves import QQ, HypersurfaceRing, gamma_for, mf_from_ideal, poly_from_string

_VERDICTS: list[str] = []


def pytest_runtest_logreport(report):
    # harvest the acceptance verdict lines out of captured stdout so the
    # summary shows them even when -s is off
    if report.when != "call":
        return
    for line in (report.capstdout or "").splitlines():
        if line.startswith("acceptance criterion"):
            _VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)


def _make_ring(ftext):
    f = poly_from_string(QQ, 4, 3, ftext)
    return HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f, m=1, n=2)


@pytest.fixture(scope="session")
def two_branch_ring():
    # g = x^3 y + y^5: a binomial branch plus the y-axis
    return _make_ring("1*x^0*y^1")


@pytest.fixture(scope="session")
def cusp_ring():
    # g = x^3 + y^4: one branch, a domain
    return _make_ring("1*x^0*y^0")


@pytest.fixture(scope="session")
def two_branch_datum(two_branch_ring):
    return gamma_for(two_branch_ring)


@pytest.fixture(scope="session")
def cusp_datum(cusp_ring):
    return gamma_for(cusp_ring)


@pytest.fixture(scope="session")
def two_branch_ideal(two_branch_ring):
    return mf_from_ideal(two_branch_ring).cok(label="I")


@pytest.fixture(scope="session")
def cusp_ideal(cusp_ring):
    return mf_from_ideal(cusp_ring).cok(label="I")
