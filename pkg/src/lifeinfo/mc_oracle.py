"""Monte-Carlo oracle for the quadrature-based measures.

Conditional pairs are drawn by rejection sampling against a uniform envelope
on a mapped rectangle, and the MI is estimated as the sample mean of
``log[f_cond(x, y) / (f_X,cond(x) f_Y,cond(y))]``.

Each axis is mapped from ``[0, 1]`` or ``[0, A]``:

* finite axes use ``x = lo + (hi - lo) u^2``, whose Jacobian damps
  integrable singularities at the lower edge (a copula density blowing up at
  the origin, say) so the envelope stays finite;
* unbounded residual axes use ``x = lo + expm1(a)`` cut where the
  conditional tail mass drops below ``TAIL_MASS``.

The envelope is the largest mapped density on a scan grid, inflated by
``ENVELOPE_MARGIN``.  If a proposal ever exceeds it, the envelope is raised
and sampling restarts from scratch, so accepted draws always come from the
exact (truncated) target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamic_entropy import y_extent
from .errors import EnvelopeTooLoose, ZeroRegionProbability
from .regions import ConditioningRegion, marginal_factors, region_domain, require_probability

__all__ = ["McEstimate", "sample_conditional", "mc_mutual_information", "TAIL_MASS"]

TAIL_MASS = 1e-9
ENVELOPE_MARGIN = 1.25
MIN_ACCEPTANCE = 1e-4
_CHUNK = 1 << 16
_SCAN = 161


@dataclass(frozen=True)
class McEstimate:
    """Plug-in MI estimate with its standard error (``sample_std / sqrt(n)``)."""

    mean: float
    std_error: float
    n_samples: int
    acceptance_rate: float


class _Axis:
    """Map from a bounded proposal interval to one coordinate axis."""

    def __init__(self, lo, hi, unbounded):
        self.lo, self.hi, self.unbounded = float(lo), float(hi), unbounded

    def forward(self, u):
        if self.unbounded:
            return self.lo + np.expm1(u), np.exp(u)
        w = self.hi - self.lo
        return self.lo + w * u * u, 2.0 * w * u


def _tail_cut(mass_above, lo, target):
    """Smallest ``a`` with ``mass_above(lo + expm1(a)) <= target``, by bracketing and bisection."""
    a_lo, a_hi = 0.0, 1.0
    while mass_above(lo + np.expm1(a_hi)) > target:
        a_lo, a_hi = a_hi, 2.0 * a_hi
        if a_hi > 700:
            raise EnvelopeTooLoose("tail mass does not decay; cannot cut the domain")
    for _ in range(80):
        mid = 0.5 * (a_lo + a_hi)
        if mass_above(lo + np.expm1(mid)) > target:
            a_lo = mid
        else:
            a_hi = mid
        if a_hi - a_lo < 1e-6 * a_hi:
            break
    return a_hi


def _axes(model, region: ConditioningRegion, p: float):
    dom = region_domain(model, region)
    if dom is None:
        raise ZeroRegionProbability("region does not meet the support")
    ylo, yhi, _ = y_extent(model, region)
    kind, s, t = region.kind, region.s, region.t
    out = []
    for lo, hi, mass in ((dom.lo_x, dom.hi_x, lambda x: model.region_probability(kind, x, t)),
                         (ylo, yhi, lambda y: model.region_probability(kind, s, y))):
        if np.isfinite(hi):
            out.append((_Axis(lo, hi, False), 1.0))
        else:
            # for a residual axis the region anchored further out is exactly the tail
            a_max = _tail_cut(lambda z: mass(float(z)) / p, lo, TAIL_MASS)
            out.append((_Axis(lo, np.inf, True), a_max))
    return out


def _mapped_density(model, ax, ay):
    def g(u, v):
        x, jx = ax.forward(u)
        y, jy = ay.forward(v)
        with np.errstate(invalid="ignore", over="ignore"):
            val = np.asarray(model.pdf(x, y), dtype=float) * jx * jy
        return np.where(np.isfinite(val) & (val > 0), val, 0.0), x, y
    return g


def _scan_max(g, umax, vmax):
    ref = np.concatenate([np.linspace(0.0, 1.0, _SCAN), np.geomspace(1e-9, 1e-2, 12),
                          1.0 - np.geomspace(1e-9, 1e-2, 12)])
    ref = np.unique(np.clip(ref, 0.0, 1.0))
    U, V = np.meshgrid(ref * umax, ref * vmax, indexing="ij")
    vals, _, _ = g(U.ravel(), V.ravel())
    return float(vals.max())


def sample_conditional(model, region: ConditioningRegion, n: int, seed: int = 0,
                       return_acceptance: bool = False):
    """Draw ``n`` i.i.d. pairs from the conditional law of ``region``.

    Samples are returned as an ``(n, 2)`` array in the conditional
    coordinates of :func:`lifeinfo.dynamic_entropy.conditional_density`
    (residual axes measured from the anchor).  Unbounded axes are cut where
    the conditional tail mass falls below ``TAIL_MASS``.

    Raises
    ------
    ZeroRegionProbability
        If the region is null.
    EnvelopeTooLoose
        If the acceptance rate falls below ``1e-4``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    p = require_probability(model, region)
    (ax, umax), (ay, vmax) = _axes(model, region, p)
    g = _mapped_density(model, ax, ay)
    env = ENVELOPE_MARGIN * _scan_max(g, umax, vmax)
    if not env > 0:
        raise EnvelopeTooLoose("density vanishes on the scan grid")

    rng = np.random.default_rng(seed)
    while True:
        xs, ys, proposed, restart = [], [], 0, False
        got = 0
        while got < n:
            u = rng.uniform(0.0, umax, _CHUNK)
            v = rng.uniform(0.0, vmax, _CHUNK)
            w = rng.uniform(0.0, 1.0, _CHUNK)
            val, x, y = g(u, v)
            proposed += _CHUNK
            peak = val.max()
            if peak > env:
                env = ENVELOPE_MARGIN * peak
                restart = True
                break
            keep = w * env < val
            xs.append(x[keep])
            ys.append(y[keep])
            got += int(keep.sum())
            if proposed >= 10 * _CHUNK and got / proposed < MIN_ACCEPTANCE:
                raise EnvelopeTooLoose(f"acceptance rate {got / proposed:.2e} below {MIN_ACCEPTANCE:g}")
        if not restart:
            break
    x = np.concatenate(xs)[:n]
    y = np.concatenate(ys)[:n]
    # acceptance measured up to the n-th accepted draw's chunk
    rate = got / proposed
    if rate < MIN_ACCEPTANCE:
        raise EnvelopeTooLoose(f"acceptance rate {rate:.2e} below {MIN_ACCEPTANCE:g}")
    dx, dy = region.shift
    out = np.column_stack([x - dx, y - dy])
    return (out, rate) if return_acceptance else out


def mc_mutual_information(model, region: ConditioningRegion, n: int = 100_000,
                          seed: int = 0) -> McEstimate:
    """Monte-Carlo estimate of the dynamic MI on ``region``.

    Deterministic for a fixed ``seed`` (PCG64 via ``numpy.random.default_rng``).
    """
    if int(n) < 1000:
        raise ValueError("use at least 1000 samples")
    p = require_probability(model, region)
    pts, rate = sample_conditional(model, region, n, seed, return_acceptance=True)
    dx, dy = region.shift
    x, y = pts[:, 0] + dx, pts[:, 1] + dy
    gx, gy = marginal_factors(model, region)
    vals = (np.log(np.asarray(model.pdf(x, y), dtype=float)) + np.log(p)
            - np.log(np.asarray(gx(x), dtype=float)) - np.log(np.asarray(gy(y), dtype=float)))
    if not np.all(np.isfinite(vals)):
        raise ZeroRegionProbability("sampled a point with vanishing marginal density")
    return McEstimate(float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(vals.size)),
                      int(vals.size), float(rate))
