"""Entropies of a lifetime pair conditioned on an inspection event.

For a region with probability ``P`` and unnormalized conditional marginals
``g_x``, ``g_y`` (see :func:`lifeinfo.regions.marginal_factors`),

    H_XY = -(1/P) int int f log f + log P
    H_X  = -(1/P) int g_x log g_x + log P

Entropy is translation invariant, so the integrals are taken in original
coordinates even though residual axes are conceptually age-shifted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAProbabilityVector, ZeroRegionProbability
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_2d, integrate_batch, xlogx
from .regions import (REGION_KINDS, ConditioningRegion, marginal_factors, region_domain,
                      require_probability, y_kinks)
from .results import MeasureResult, rounding_floor

__all__ = ["conditional_density", "joint_entropy", "marginal_entropy", "discrete_entropy",
           "verify_decomposition", "EntropyBundle", "entropy_bundle", "whole_region",
           "y_extent"]


def whole_region() -> ConditioningRegion:
    """The unconditioned event, for static measures."""
    return ConditioningRegion("past_past", np.inf, np.inf)


def conditional_density(model, region: ConditioningRegion, x, y):
    """Density of the conditioned pair, residual axes measured from the anchor.

    For example ``f(x + s, y + t) / F-bar(s, t)`` for ``residual_residual``.
    Zero outside the region.
    """
    p = require_probability(model, region)
    dx, dy = region.shift
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    X, Y = x + dx, y + dy
    rx0, rx1 = region.x_range
    ry0, ry1 = region.y_range
    inside = (X >= rx0) & (X <= rx1) & (Y >= ry0) & (Y <= ry1) & (x >= 0) & (y >= 0)
    out = np.where(inside, np.asarray(model.pdf(X, Y), dtype=float) / p, 0.0)
    return out if out.ndim else float(out)


def y_extent(model, region: ConditioningRegion):
    """``(lo, hi, breakpoints)`` of the region's y-range intersected with the support."""
    ry0, ry1 = region.y_range
    return max(ry0, 0.0), min(ry1, model.support.y_max), y_kinks(model, region)


def _finish(integral, err, evals, converged, p) -> MeasureResult:
    value = -integral / p + np.log(p)
    err = abs(err) / p + rounding_floor(np.log(p), value)
    return MeasureResult(float(value), float(err), int(evals), bool(converged))


def joint_entropy(model, region: ConditioningRegion, spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Differential entropy of the conditioned pair, in nats."""
    p = require_probability(model, region)
    dom = region_domain(model, region)
    if dom is None:
        raise ZeroRegionProbability("region does not meet the support")
    res = integrate_2d(lambda x, y: xlogx(model.pdf(x, y), spec.abs_tol), dom.ysection(),
                       spec.per_mass(p), x_points=dom.x_points, y_points=dom.y_points_fn)
    return _finish(res.value, res.error_estimate, res.evaluations, res.converged, p)


def marginal_entropy(model, region: ConditioningRegion, axis: str = "X",
                     spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Entropy of one conditioned component (``axis`` is ``"X"`` or ``"Y"``)."""
    p = require_probability(model, region)
    gx, gy = marginal_factors(model, region)
    axis = axis.upper()
    if axis == "X":
        dom = region_domain(model, region)
        if dom is None:
            raise ZeroRegionProbability("region does not meet the support")
        lo, hi, pts, g = dom.lo_x, dom.hi_x, dom.x_points, gx
    elif axis == "Y":
        lo, hi, pts = y_extent(model, region)
        g = gy
    else:
        raise ValueError("axis must be 'X' or 'Y'")
    v, e, n, c = integrate_batch(lambda o, z: xlogx(g(z), spec.abs_tol), [lo], [hi],
                                 spec.per_mass(p), points=[pts])
    return _finish(v[0], e[0], n[0], c[0], p)


def discrete_entropy(p) -> float:
    """Shannon entropy ``-sum p_i log p_i`` of a probability vector, in nats."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(~np.isfinite(p)) or np.any(p < 0) \
            or abs(p.sum() - 1.0) > 1e-9:
        raise NotAProbabilityVector(f"not a probability vector: {p!r}")
    return float(-np.sum(xlogx(p)))


@dataclass(frozen=True)
class EntropyBundle:
    h_joint: float
    h_x: float
    h_y: float
    region: ConditioningRegion
    numerical_error: float


def entropy_bundle(model, region: ConditioningRegion, spec: QuadratureSpec = DEFAULT_SPEC) -> EntropyBundle:
    hj = joint_entropy(model, region, spec)
    hx = marginal_entropy(model, region, "X", spec)
    hy = marginal_entropy(model, region, "Y", spec)
    return EntropyBundle(hj.value, hx.value, hy.value, region,
                         hj.numerical_error + hx.numerical_error + hy.numerical_error)


def verify_decomposition(model, s: float, t: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Residual of the partition identity for the joint entropy.

    Returns ``(residual, combined_error)`` where ``residual`` is
    ``H_XY - [H(p_1..p_4) + sum_i p_i H_i]`` over the four regions at
    ``(s, t)``.  Raises :class:`ZeroRegionProbability` if a region is null.
    """
    total = joint_entropy(model, whole_region(), spec)
    probs, parts, err = [], [], total.numerical_error
    for kind in REGION_KINDS:
        region = ConditioningRegion(kind, s, t)
        p = require_probability(model, region)
        h = joint_entropy(model, region, spec)
        probs.append(p)
        parts.append(p * h.value)
        err += p * h.numerical_error
    probs = np.asarray(probs)
    probs = probs / probs.sum()
    residual = total.value - (discrete_entropy(probs) + float(np.sum(parts)))
    return float(residual), float(err)
