"""Result containers shared by the measure modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MeasureResult:
    """An information measure in nats with its numerical error estimate.

    ``evaluations`` counts integrand evaluations; ``converged`` is false when
    any underlying adaptive integral exhausted its subdivision budget.
    """

    value: float
    numerical_error: float
    evaluations: int = 0
    converged: bool = True

    def __float__(self):
        return float(self.value)


_EPS = 2.220446049250313e-16


def rounding_floor(*magnitudes: float) -> float:
    """Error floor from double-precision rounding of terms of the given sizes.

    Adaptive error estimates only see discretization error; a measure built
    from O(1) log terms cannot be resolved better than a few hundred ulps of
    those terms, so reported errors never drop below this.
    """
    return 128 * _EPS * (1.0 + sum(abs(m) for m in magnitudes))
