import functools

import numpy as np
import pytest

from scatter2d import CurveSpec, assemble_T, make_curve, quadrature_grid

TEST_CURVES = {
    "circle": CurveSpec.circle(1.0),
    "ellipse": CurveSpec.ellipse(2.0, 1.0),
    "star": CurveSpec.star(1.0, 0.3, 5),
    "kite": CurveSpec.kite(),
}


@functools.lru_cache(maxsize=None)
def setup(name, n=256, k=1.0):
    """(curve, grid, T) for a named test curve, cached across the session."""
    curve = make_curve(TEST_CURVES[name])
    grid = quadrature_grid(curve, n)
    return curve, grid, assemble_T(curve, grid, k)


@pytest.fixture
def unit_circle():
    return setup("circle")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
