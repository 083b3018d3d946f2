import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import SEGMENT_4X4  # noqa: E402

from pcmflow.pcm import complete_upper_triangle, consistent_pcm, validate_pcm  # noqa: E402

Z_STAR_A3 = (33**0.5 - 5) / 2


@pytest.fixture
def a3():
    return complete_upper_triangle({(1, 2): 2, (1, 3): 6, (2, 3): 2}, 3)


@pytest.fixture
def a4():
    return validate_pcm(SEGMENT_4X4)


@pytest.fixture
def consistent3():
    return consistent_pcm([1, 2, 4])


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion; usage ``with criterion(k, text): ...``."""

    class _Recorder:
        def __call__(self, number, text):
            self.number, self.text = number, text
            return self

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            verdict = "PASS" if exc_type is None else "FAIL"
            detail = self.text if exc is None else f"{self.text} ({type(exc).__name__}: {exc})".splitlines()[0]
            CRITERIA[self.number] = f"criterion {self.number}: {verdict}  {detail}"
            return False

    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])
