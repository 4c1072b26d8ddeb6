"""Dynamic mutual information written through a copula.

At inspection times equal to the marginal quantiles ``s = xi_p`` and
``t = xi_q`` the past MI depends only on the copula ``C`` and the residual MI
only on the survival copula ``C~``:

    M~(xi_p, xi_q) = log C(p, q)
        + (1/C(p, q)) int_0^p int_0^q c log[c / (dC/du(u, q) dC/dv(p, v))]

and the residual measure is the same expression for ``C~`` at
``(1 - p, 1 - q)``.  The inner integrals of the density are the partial
derivatives of the copula, which the copula objects supply.
"""

from __future__ import annotations

import itertools

import numpy as np

from .copulas import Copula, clayton_special
from .dynamic_mi import past_mi, residual_mi
from .errors import ZeroRegionProbability
from .lifetime_models import make_from_copula
from .quadrature import DEFAULT_SPEC, QuadratureSpec, Rectangle, integrate_2d
from .results import MeasureResult, rounding_floor

__all__ = ["clayton_special", "past_mi_copula", "residual_mi_survival_copula", "marginal_freeness_check"]


def _corner_mi(cop: Copula, a: float, b: float, spec: QuadratureSpec) -> MeasureResult:
    """MI of ``(U, V) ~ cop`` conditioned on ``U <= a, V <= b``."""
    if not (0 < a <= 1 and 0 < b <= 1):
        raise ValueError("quantile levels must lie in (0, 1]")
    mass = float(cop.cdf(a, b))
    if not mass > 1e-12:
        raise ZeroRegionProbability(f"C({a:g}, {b:g}) = {mass:.3e}")

    def integrand(u, v):
        c = np.asarray(cop.pdf(u, v), dtype=float)
        gu = np.asarray(cop.h_u(u, np.full(np.shape(u), b)), dtype=float)
        gv = np.asarray(cop.h_v(np.full(np.shape(v), a), v), dtype=float)
        ok = (c > 0) & (gu > 0) & (gv > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = c * (np.log(np.where(ok, c, 1.0)) - np.log(np.where(ok, gu, 1.0))
                       - np.log(np.where(ok, gv, 1.0)))
        return np.where(ok, val, 0.0)

    res = integrate_2d(integrand, Rectangle(0.0, a, 0.0, b), spec.per_mass(mass))
    value = np.log(mass) + res.value / mass
    err = res.error_estimate / mass + rounding_floor(np.log(mass), value)
    return MeasureResult(float(value), float(err), res.evaluations, res.converged)


def past_mi_copula(copula: Copula, p: float, q: float,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Past MI at ``(xi_p, xi_q)`` from the copula alone."""
    return _corner_mi(copula, p, q, spec)


def residual_mi_survival_copula(copula: Copula, p: float, q: float,
                                spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Residual MI at ``(xi_p, xi_q)`` from the survival copula of ``copula``.

    The survival copula is ``C~(u, v) = u + v - 1 + C(1 - u, 1 - v)``.
    """
    return _corner_mi(copula.survival(), 1.0 - p, 1.0 - q, spec)


def marginal_freeness_check(copula: Copula, marginal_pairs, p: float, q: float,
                            spec: QuadratureSpec = DEFAULT_SPEC, measures=("past", "residual")) -> float:
    """Largest pairwise spread of the MI across marginal choices at fixed ``(p, q)``.

    ``marginal_pairs`` is a sequence of ``(marginal_x, marginal_y)`` frozen
    distributions; the MI is evaluated at their ``p`` and ``q`` quantiles.
    """
    if len(marginal_pairs) < 2:
        raise ValueError("need at least two marginal pairs")
    worst = 0.0
    for name in measures:
        fn = {"past": past_mi, "residual": residual_mi}[name]
        vals = []
        for mx, my in marginal_pairs:
            model = make_from_copula(copula, mx, my)
            vals.append(fn(model, float(mx.ppf(p)), float(my.ppf(q)), spec).value)
        for a, b in itertools.combinations(vals, 2):
            worst = max(worst, abs(a - b))
    return worst
