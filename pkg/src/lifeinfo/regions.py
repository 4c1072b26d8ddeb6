"""Conditioning events anchored at inspection times ``(s, t)`` and their
integration domains.

The four events are ``{X <= s, Y <= t}`` (past_past), ``{X > s, Y > t}``
(residual_residual), ``{X <= s, Y > t}`` (past_residual) and
``{X > s, Y <= t}`` (residual_past).  A past axis keeps its original
coordinate; a residual axis is measured as the remaining life beyond the
anchor.  Domains are described in original coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import ZeroRegionProbability
from .quadrature import YSection

__all__ = ["ConditioningRegion", "RegionDomain", "region_domain", "require_probability",
           "REGION_KINDS", "marginal_factors", "y_kinks"]

REGION_KINDS = ("past_past", "residual_residual", "past_residual", "residual_past")
_ALIASES = {"past": "past_past", "residual": "residual_residual"}


@dataclass(frozen=True)
class ConditioningRegion:
    """One of the four quadrant events anchored at ``(s, t)``.

    ``kind`` also accepts the shorthands ``"past"`` and ``"residual"``.
    """

    kind: str
    s: float
    t: float

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in REGION_KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}; choose from {REGION_KINDS}")
        if not (self.s >= 0 and self.t >= 0):
            raise ValueError("inspection times must be nonnegative")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "t", float(self.t))

    @property
    def x_past(self) -> bool:
        return self.kind in ("past_past", "past_residual")

    @property
    def y_past(self) -> bool:
        return self.kind in ("past_past", "residual_past")

    @property
    def x_range(self):
        return (0.0, self.s) if self.x_past else (self.s, np.inf)

    @property
    def y_range(self):
        return (0.0, self.t) if self.y_past else (self.t, np.inf)

    @property
    def shift(self):
        """Offsets subtracted from original coordinates on residual axes."""
        return (0.0 if self.x_past else self.s, 0.0 if self.y_past else self.t)

    @property
    def whole(self) -> bool:
        """True for the unconditioned event (past_past at ``s = t = inf``)."""
        return self.kind == "past_past" and np.isinf(self.s) and np.isinf(self.t)

    def probability(self, model) -> float:
        if self.whole:
            return 1.0
        return model.region_probability(self.kind, self.s, self.t)


@dataclass
class RegionDomain:
    """Effective integration domain of a region intersected with the support."""

    lo_x: float
    hi_x: float
    y_lo: Callable
    y_hi: Callable
    x_points: np.ndarray = field(default_factory=lambda: np.empty(0))
    diagonal: bool = False
    y_breaks: np.ndarray = field(default_factory=lambda: np.empty(0))

    def ysection(self) -> YSection:
        return YSection(self.lo_x, self.hi_x, self.y_lo, self.y_hi)

    def y_points(self, x):
        """Inner breakpoints per outer abscissa: the diagonal and fixed kinks."""
        x = np.asarray(x, dtype=float)
        cols = [x[:, None]] if self.diagonal else []
        if self.y_breaks.size:
            cols.append(np.broadcast_to(self.y_breaks, (x.size, self.y_breaks.size)))
        return np.concatenate(cols, axis=1)

    @property
    def y_points_fn(self):
        return self.y_points if (self.diagonal or self.y_breaks.size) else None


def require_probability(model, region: ConditioningRegion, floor: float = 1e-12) -> float:
    """Region probability, raising :class:`ZeroRegionProbability` if it is ``<= floor``."""
    p = region.probability(model)
    if not p > floor:
        raise ZeroRegionProbability(
            f"P({region.kind} at s={region.s:g}, t={region.t:g}) = {p:.3e}")
    return p


def marginal_factors(model, region: ConditioningRegion):
    """Unnormalized conditional marginals ``(g_x(x), g_y(y))`` in original coordinates.

    ``g_x`` integrates the density over the region's y-range and ``g_y`` over
    its x-range; dividing by the region probability gives the conditional
    marginal densities.
    """
    s, t = region.s, region.t
    if region.y_past:
        gx = lambda x: model.pdf_x_below(x, np.full(np.shape(x), t))
    else:
        gx = lambda x: model.pdf_x_above(x, np.full(np.shape(x), t))
    if region.x_past:
        gy = lambda y: model.pdf_y_below(np.full(np.shape(y), s), y)
    else:
        gy = lambda y: model.pdf_y_above(np.full(np.shape(y), s), y)
    return gx, gy


def _scan_grid(lo, hi, n=257):
    """Probe abscissae on ``[lo, hi]`` with geometric refinement near both ends."""
    if np.isfinite(hi):
        width = hi - lo
        rel = np.geomspace(1e-12, 1e-2, 12)
        return np.unique(np.concatenate([np.linspace(lo, hi, n), lo + width * rel, hi - width * rel]))
    u = np.concatenate([np.linspace(0, 1, n)[:-1], 1 - np.geomspace(1e-2, 1e-9, 8)])
    return np.unique(lo + u / (1 - u))


def _roots(func, grid):
    vals = np.asarray(func(grid), dtype=float)
    out = []
    ok = np.isfinite(vals)
    for i in np.flatnonzero(ok[:-1] & ok[1:] & (np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)):
        out.append(brentq(lambda z: float(func(np.array([z]))[0]), grid[i], grid[i + 1], xtol=1e-14))
    return out


def region_domain(model, region: ConditioningRegion) -> RegionDomain | None:
    """Intersection of the region with the model's support, or ``None`` if empty."""
    sup = model.support
    rx0, rx1 = region.x_range
    ry0, ry1 = region.y_range
    lo = max(rx0, sup.x_min)
    hi = min(rx1, sup.x_max)
    if not hi > lo:
        return None

    def y_lo(x):
        return np.maximum(ry0, sup.lower(x))

    def y_hi(x):
        return np.minimum(ry1, sup.upper(x))

    gap = lambda x: y_hi(x) - y_lo(x)
    points = []
    if sup.y_lower is not None or sup.y_upper is not None:
        grid = _scan_grid(lo, hi)
        g = gap(grid)
        pos = np.flatnonzero(g > 0)
        if pos.size == 0:
            return None
        # tighten the x-range to where the y-section is nonempty
        i0, i1 = pos[0], pos[-1]
        if i0 > 0:
            lo = _edge(gap, grid[i0 - 1], grid[i0])
        if i1 < grid.size - 1:
            hi = _edge(gap, grid[i1 + 1], grid[i1])
        if not hi > lo:
            return None
        # kinks where a region edge crosses a support boundary
        grid = _scan_grid(lo, hi)
        for edge in (ry0, ry1):
            if not np.isfinite(edge):
                continue
            if sup.y_upper is not None:
                points += _roots(lambda z, e=edge: sup.upper(z) - e, grid)
            if sup.y_lower is not None:
                points += _roots(lambda z, e=edge: sup.lower(z) - e, grid)
    if model.diagonal_break:
        points += [e for e in (ry0, ry1) if np.isfinite(e) and lo < e < hi]
    y_hi_c = lambda x: np.maximum(y_hi(x), y_lo(x))
    return RegionDomain(lo, hi, y_lo, y_hi_c, np.unique(np.asarray(points, dtype=float)),
                        diagonal=model.diagonal_break, y_breaks=y_kinks(model, region))


def y_kinks(model, region: ConditioningRegion) -> np.ndarray:
    """Ordinates where the conditional marginal of ``Y`` may have a kink.

    These are the heights at which the region's finite x-edges meet a
    support boundary curve or the diagonal of a model with a diagonal jump.
    """
    sup = model.support
    pts = []
    for edge in region.x_range:
        if np.isfinite(edge) and sup.x_min <= edge <= sup.x_max:
            if sup.y_upper is not None:
                pts.append(float(sup.upper(np.array([edge]))[0]))
            if sup.y_lower is not None:
                pts.append(float(sup.lower(np.array([edge]))[0]))
            if model.diagonal_break:
                pts.append(float(edge))
    ry0, ry1 = region.y_range
    return np.unique(np.asarray([p for p in pts if ry0 < p < ry1], dtype=float))


def _edge(gap, outside, inside, iters=200):
    """Bisect for the boundary between ``gap <= 0`` (outside) and ``gap > 0`` (inside)."""
    a, b = float(outside), float(inside)
    for _ in range(iters):
        m = 0.5 * (a + b)
        if gap(np.array([m]))[0] > 0:
            b = m
        else:
            a = m
        if abs(b - a) <= 1e-15 * max(1.0, abs(b)):
            break
    return 0.5 * (a + b)
