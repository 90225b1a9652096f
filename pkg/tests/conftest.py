import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cycprod.group import (
    Cyclic,
    Dihedral,
    DirectProduct,
    FromPermutations,
    GeneralizedQuaternion,
    build,
    cyclic_semidirect,
)

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        if report.when == "call" or report.outcome != "passed":
            prev = _ACCEPTANCE.get(name)
            if prev != "FAIL":
                _ACCEPTANCE[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")


@pytest.fixture(scope="session")
def d3():
    return build(Dihedral(3))


@pytest.fixture(scope="session")
def q8():
    return build(GeneralizedQuaternion(8))


@pytest.fixture(scope="session")
def klein():
    return build(DirectProduct(Cyclic(2), Cyclic(2)))


@pytest.fixture(scope="session")
def c3c4():
    # C3 ⋊ C4 with the generator of C4 inverting C3
    return build(cyclic_semidirect(3, 4, -1))


@pytest.fixture(scope="session")
def s4():
    return build(FromPermutations(4, ("(1 2 3 4)", "(1 2)")))


@pytest.fixture(scope="session")
def a4():
    return build(FromPermutations(4, ("(1 2 3)", "(1 2)(3 4)")))
