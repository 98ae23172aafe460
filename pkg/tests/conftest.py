import pytest

from congestion_coalitions import RewardModel

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


# instances used across the suite
N2_MEANS = (1.0, 0.4)
SEVERE_MEANS = (0.55, 0.52, 0.5, 0.45, 0.3)
LIMITED_MEANS = (0.6, 0.52, 0.5, 0.45, 0.1)
MAJOR_MEANS = (1.1, 0.52, 0.5, 0.45, 0.3)
BULLY_MEANS = (0.6, 0.52, 0.5, 0.45, 0.3)
FIGURE_TAIL = (0.52, 0.5, 0.45, 0.3)
TIED_GC_TABLE = [[1.0, 0.7], [0.4, 0.35]]
NO_PURE_NE_TABLE = [[0.58, 0.4, 0.81, 0.37], [0.51, 0.22, 0.46, 0.28], [0.34, 0.78, 0.35, 0.54]]


@pytest.fixture
def n2_model():
    return RewardModel.from_means(N2_MEANS, 2)


@pytest.fixture(scope="session")
def severe_model():
    return RewardModel.from_means(SEVERE_MEANS, 5)


@pytest.fixture(scope="session")
def limited_model():
    return RewardModel.from_means(LIMITED_MEANS, 5)


@pytest.fixture(scope="session")
def major_model():
    return RewardModel.from_means(MAJOR_MEANS, 5)
