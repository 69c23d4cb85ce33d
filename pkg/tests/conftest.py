import os
import random
import sys

import numpy as np
import pytest

from linfact._impl import AVAILABLE
from linfact.marked_ancestor import BACKENDS

HERE = os.path.dirname(__file__)
DATA = os.path.join(HERE, "data")
ROOT = os.path.dirname(HERE)
sys.path.insert(0, HERE)

FIVE_WORDS = [b"aaba", b"bbba", b"ababa", b"aabba", b"babba"]
FIVE_WORDS_ORDER = [
    "", "$", "a$", "ba$", "aba$", "bba$", "aaba$", "baba$", "abba$", "bbba$",
    "ababa$", "aabba$", "babba$",
]

# filled by test_acceptance, printed once at the end of the session
ACCEPTANCE_LINES = {}


@pytest.fixture(params=AVAILABLE)
def impl(request):
    return request.param


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def nprng():
    return np.random.default_rng(20240601)


def five_words_path():
    return os.path.join(DATA, "five_words.cst")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
