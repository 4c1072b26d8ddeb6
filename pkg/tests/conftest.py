from __future__ import annotations

import numpy as np
import pytest

from lifeinfo import (clayton_special, make_freund, make_from_copula, make_gumbel_type,
                      make_independent, make_linear_unit_square, make_lomax_tte,
                      make_reflected_triangle, make_truncated_tte, make_uniform_triangle, marginal)

#: acceptance lines collected during the run, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def builtin_models():
    """One instance of each built-in family, keyed by a short name."""
    return {
        "linear": make_linear_unit_square(),
        "triangle": make_uniform_triangle(1.0, 1.0),
        "triangle-2-3": make_uniform_triangle(2.0, 3.0),
        "reflected-triangle": make_reflected_triangle(1.0, 1.0),
        "gumbel": make_gumbel_type(1.0),
        "lomax": make_lomax_tte(1.0, 1.0, 2.0),
        "truncated": make_truncated_tte(1.0, 1.0, 1.0),
        "freund": make_freund(1.0, 2.0, 2.5, 1.5),
        "independent": make_independent(),
        "clayton": make_from_copula(clayton_special(), marginal("exponential"),
                                    marginal("weibull", shape=2.0)),
    }


@pytest.fixture(scope="session")
def models():
    return builtin_models()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
