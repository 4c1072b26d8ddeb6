"""Closed-form reference values used as test oracles."""

from __future__ import annotations

import math

import numpy as np

LOG2 = math.log(2.0)
TRIANGLE_MI = 1.0 - LOG2
CLAYTON_MI = -0.5 + LOG2
LINEAR_DIAGONAL = (2 + 40 * LOG2 - 27 * math.log(3)) / 12


def lomax_mi(r: float) -> float:
    return -1.0 / (r + 1.0) + math.log((r + 1.0) / r)


def linear_past_mi(s: float, t: float) -> float:
    """Past MI of f(x, y) = x + y on the unit square, in closed form."""
    L = np.log
    inner = (s * t * (s + t) * L(4 / (s * t))
             + (-2 * s ** 3 * L(s) - 2 * t ** 3 * L(t) + 2 * (s + t) ** 3 * L(s + t) - 5 * s * t * (s + t)) / 6
             + t / 4 * (2 * s * (s + t) + t ** 2 * L(t) - (t + 2 * s) ** 2 * L(t + 2 * s))
             + s / 4 * (2 * t * (s + t) + s ** 2 * L(s) - (s + 2 * t) ** 2 * L(s + 2 * t)))
    return float(L(s * t * (s + t) / 2) + inner / (s * t * (s + t)))
