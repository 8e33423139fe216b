import numpy as np
import pytest

from paraselect import golden
from paraselect.ilp_model import build_model

GOLDEN_TEXT = (
    "The cat sat on the mat which was by the door. "
    "It ate the cream ladled out by its owner. "
    "The owner, an eminent engineer, had a convertible used in a bank robbery."
)


@pytest.fixture
def golden_cs():
    return golden.load_candidate_set()


@pytest.fixture
def golden_settings():
    return golden.load_settings()


@pytest.fixture
def golden_model(golden_cs, golden_settings):
    return build_model(golden_cs, golden_settings.constraints, golden_settings.weights)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


P11, P21, P31, P32 = (1, 1), (2, 1), (3, 1), (3, 2)


# Acceptance tests record one line per criterion here; the summary hook prints them.
_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
