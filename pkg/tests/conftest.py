import pytest

from derangetropy import FAMILIES, DistributionSpec, from_analytic

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ref_specs():
    return {name: DistributionSpec(name) for name in FAMILIES}


@pytest.fixture(scope="session")
def ref_grids(ref_specs):
    # default production size; shared because construction is pure
    return {name: from_analytic(spec, 4097) for name, spec in ref_specs.items()}
