"""Dynamic mutual information of a lifetime pair.

For a conditioning region with probability ``P`` and unnormalized
conditional marginals ``g_x``, ``g_y`` the production route is

    M = (1/P) int int f log a + log P,        a = f / (g_x g_y),

a single 2D integral in original coordinates.  Two further routes are kept
for cross-checking: the defining integral of the normalized conditional
densities in age-shifted coordinates, and the entropy identity
``M = H_X + H_Y - H_XY``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamic_entropy import joint_entropy, marginal_entropy, whole_region
from .errors import InvalidTTE, NotBLM, NotSymmetricPair, ZeroDenominator, ZeroRegionProbability
from .quadrature import DEFAULT_SPEC, QuadratureSpec, YSection, integrate_2d
from .regions import ConditioningRegion, marginal_factors, region_domain, require_probability
from .results import MeasureResult, rounding_floor

__all__ = [
    "BoundReport", "dynamic_mi", "past_mi", "residual_mi", "mixed_mi", "mi_routes",
    "mutual_information_static", "past_mi_bound", "residual_mi_bound", "local_dependence_ratio",
    "symmetry_transfer_check", "residual_mi_tte", "blm_constancy_check", "blm_deviation",
]


def _log_ratio_integrand(model, gx, gy):
    def integrand(x, y):
        f = np.asarray(model.pdf(x, y), dtype=float)
        a = np.asarray(gx(x), dtype=float)
        b = np.asarray(gy(y), dtype=float)
        ok = (f > 0) & (a > 0) & (b > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = f * (np.log(np.where(ok, f, 1.0)) - np.log(np.where(ok, a, 1.0))
                       - np.log(np.where(ok, b, 1.0)))
        return np.where(ok, val, 0.0)
    return integrand


def _domain(model, region):
    dom = region_domain(model, region)
    if dom is None:
        raise ZeroRegionProbability("region does not meet the support")
    return dom


def dynamic_mi(model, region: ConditioningRegion, spec: QuadratureSpec = DEFAULT_SPEC,
               cross_check: bool = False) -> MeasureResult:
    """Mutual information of the pair conditioned on ``region``, in nats.

    With ``cross_check`` the entropy-identity route is also evaluated and a
    ``RuntimeWarning`` is issued if the two disagree beyond three times
    their combined error estimate.
    """
    p = require_probability(model, region)
    dom = _domain(model, region)
    gx, gy = marginal_factors(model, region)
    res = integrate_2d(_log_ratio_integrand(model, gx, gy), dom.ysection(), spec.per_mass(p),
                       x_points=dom.x_points, y_points=dom.y_points_fn)
    value = res.value / p + np.log(p)
    out = MeasureResult(float(value), float(res.error_estimate / p + rounding_floor(np.log(p), value)),
                        res.evaluations, res.converged)
    if cross_check:
        alt = _mi_entropy_identity(model, region, spec)
        tol = 3.0 * (out.numerical_error + alt.numerical_error) + 1e-9
        if abs(alt.value - out.value) > tol:
            warnings.warn(f"MI routes disagree: {out.value:.12g} vs {alt.value:.12g}",
                          RuntimeWarning, stacklevel=2)
    return out


def past_mi(model, s: float, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Mutual information of ``(X, Y)`` given ``X <= s, Y <= t``."""
    return dynamic_mi(model, ConditioningRegion("past_past", s, t), spec)


def residual_mi(model, s: float, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Mutual information of ``(X - s, Y - t)`` given ``X > s, Y > t``."""
    return dynamic_mi(model, ConditioningRegion("residual_residual", s, t), spec)


def mixed_mi(model, kind: str, s: float, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Mutual information for ``past_residual`` or ``residual_past``."""
    if kind not in ("past_residual", "residual_past"):
        raise ValueError("mixed_mi expects 'past_residual' or 'residual_past'")
    return dynamic_mi(model, ConditioningRegion(kind, s, t), spec)


def _mi_direct(model, region, spec):
    """Defining integral of the normalized densities in age-shifted coordinates."""
    p = require_probability(model, region)
    dom = _domain(model, region)
    gx, gy = marginal_factors(model, region)
    dx, dy = region.shift

    def integrand(x, y):
        X, Y = x + dx, y + dy
        fc = np.asarray(model.pdf(X, Y), dtype=float) / p
        fx = np.asarray(gx(X), dtype=float) / p
        fy = np.asarray(gy(Y), dtype=float) / p
        ok = (fc > 0) & (fx > 0) & (fy > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = fc * (np.log(np.where(ok, fc, 1.0)) - np.log(np.where(ok, fx, 1.0))
                        - np.log(np.where(ok, fy, 1.0)))
        return np.where(ok, val, 0.0)

    shifted = YSection(dom.lo_x - dx, dom.hi_x - dx,
                       lambda x: dom.y_lo(x + dx) - dy, lambda x: dom.y_hi(x + dx) - dy)
    y_pts = None
    if dom.y_points_fn is not None:
        y_pts = lambda x: dom.y_points(np.asarray(x) + dx) - dy
    res = integrate_2d(integrand, shifted, spec, x_points=dom.x_points - dx, y_points=y_pts)
    err = res.error_estimate + rounding_floor(np.log(p), res.value)
    return MeasureResult(float(res.value), float(err), res.evaluations, res.converged)


def _mi_entropy_identity(model, region, spec):
    hx = marginal_entropy(model, region, "X", spec)
    hy = marginal_entropy(model, region, "Y", spec)
    hxy = joint_entropy(model, region, spec)
    return MeasureResult(hx.value + hy.value - hxy.value,
                         hx.numerical_error + hy.numerical_error + hxy.numerical_error,
                         hx.evaluations + hy.evaluations + hxy.evaluations,
                         hx.converged and hy.converged and hxy.converged)


def mi_routes(model, region: ConditioningRegion, spec: QuadratureSpec = DEFAULT_SPEC) -> dict:
    """The three routes keyed ``"direct"``, ``"log_ratio"`` and ``"entropy"``."""
    return {
        "direct": _mi_direct(model, region, spec),
        "log_ratio": dynamic_mi(model, region, spec),
        "entropy": _mi_entropy_identity(model, region, spec),
    }


def mutual_information_static(model, spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Unconditional mutual information, cross-checked against the entropy identity."""
    return dynamic_mi(model, whole_region(), spec, cross_check=True)


# ---------------------------------------------------------------------------
# bounds

@dataclass(frozen=True)
class BoundReport:
    """Outcome of a corner-value bound.

    ``direction`` is ``"upper"`` when the a-function never exceeds its corner
    value on the probe grid, ``"lower"`` when it never falls below it, and
    ``"inapplicable"`` otherwise.  A constant a-function satisfies both; it
    is reported as ``"upper"`` and the bound is then attained.
    """

    bound_value: float
    direction: str
    monotonicity_verified: bool
    corner_value: float = float("nan")
    note: str = ""


def _a_function(model, region, p, x, y):
    gx, gy = marginal_factors(model, region)
    f = np.asarray(model.pdf(x, y), dtype=float)
    den = np.asarray(gx(x), dtype=float) * np.asarray(gy(y), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, f / den, np.nan), f


def _bound(model, region, n, rtol=1e-9):
    p = require_probability(model, region)
    dom = _domain(model, region)
    lo, hi = dom.lo_x, dom.hi_x
    if not np.isfinite(hi):
        sf = float(model.marginal_sf_x(lo))
        hi = float(model.marginal_quantile_x(1.0 - 1e-6 * sf))
    xs = np.linspace(lo, hi, n)
    ylo, yhi = np.asarray(dom.y_lo(xs), dtype=float), np.asarray(dom.y_hi(xs), dtype=float)
    if np.any(~np.isfinite(yhi)):
        y0 = float(np.min(ylo))
        sf = float(model.marginal_sf_y(y0))
        cap = float(model.marginal_quantile_y(1.0 - 1e-6 * sf))
        yhi = np.where(np.isfinite(yhi), yhi, cap)
    frac = np.linspace(0.0, 1.0, n)
    X = np.repeat(xs, n)
    Y = (ylo[:, None] + (yhi - ylo)[:, None] * frac[None, :]).ravel()
    cx, cy = (region.s, region.t)
    a, f = _a_function(model, region, p, X, Y)
    corner, _ = _a_function(model, region, p, np.array([cx]), np.array([cy]))
    corner = float(corner[0])
    use = (f > 0) & np.isfinite(a)
    a = a[use]
    bound = np.log(corner) + np.log(p) if corner > 0 else -np.inf
    tol = rtol * max(abs(corner), 1e-300)
    le = bool(np.all(a <= corner + tol))
    ge = bool(np.all(a >= corner - tol))
    if le:
        direction = "upper"
    elif ge:
        direction = "lower"
    else:
        direction = "inapplicable"
    note = ""
    if direction == "lower" and bound < 0:
        note = "bound is negative, so it adds nothing to nonnegativity"
    if le and ge:
        note = "a-function is constant on the probe grid; the bound is attained"
    return BoundReport(float(bound), direction, direction != "inapplicable", corner, note)


def past_mi_bound(model, s: float, t: float, grid: int = 32) -> BoundReport:
    """Corner bound ``log a~(s, t; s, t) + log F(s, t)`` for the past MI."""
    return _bound(model, ConditioningRegion("past_past", s, t), grid)


def residual_mi_bound(model, s: float, t: float, grid: int = 32) -> BoundReport:
    """Corner bound ``log a(s, t; s, t) + log F-bar(s, t)`` for the residual MI.

    Unbounded axes are probed up to the conditional quantile ``1 - 1e-6``.
    """
    return _bound(model, ConditioningRegion("residual_residual", s, t), grid)


def local_dependence_ratio(model, region: str, x, y, s: float, t: float):
    """Ratio ``f_cond / (f_X,cond f_Y,cond)`` at age-shifted coordinates ``(x, y)``.

    For the residual region this equals the ratio of the conditional hazard
    rates of ``X_s`` given ``Y = y + t`` and given ``Y > t``; for the past
    region the analogous ratio of reversed hazard rates.
    """
    reg = ConditioningRegion(region, s, t)
    p = require_probability(model, reg)
    dx, dy = reg.shift
    X = np.asarray(x, dtype=float) + dx
    Y = np.asarray(y, dtype=float) + dy
    gx, gy = marginal_factors(model, reg)
    den = np.asarray(gx(X), dtype=float) * np.asarray(gy(Y), dtype=float)
    if np.any(den <= 0):
        raise ZeroDenominator("a conditional marginal density vanishes at the requested point")
    out = np.asarray(model.pdf(X, Y), dtype=float) * p / den
    return out if out.ndim else float(out)


def symmetry_transfer_check(model_xy, model_uv, x0: float, y0: float, grid,
                            spec: QuadratureSpec = DEFAULT_SPEC, probes: int = 64,
                            seed: int = 0) -> float:
    """Largest ``|M~_UV(s, t) - M_XY(2 x0 - s, 2 y0 - t)|`` over ``grid``.

    ``grid`` is a sequence of ``(s, t)`` pairs for the past MI of
    ``model_uv``.  The reflection relation between the two densities is
    probed first; :class:`NotSymmetricPair` is raised if it fails.
    """
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, 2 * x0, probes)
    ys = rng.uniform(0.0, 2 * y0, probes)
    fu = np.asarray(model_uv.pdf(xs, ys), dtype=float)
    fx = np.asarray(model_xy.pdf(2 * x0 - xs, 2 * y0 - ys), dtype=float)
    if np.any(np.abs(fu - fx) > 1e-9 * (1.0 + np.abs(fx))):
        raise NotSymmetricPair("f_UV(x, y) != f_XY(2 x0 - x, 2 y0 - y) at probe points")
    worst = 0.0
    for s, t in grid:
        m_uv = past_mi(model_uv, s, t, spec).value
        m_xy = residual_mi(model_xy, 2 * x0 - s, 2 * y0 - t, spec).value
        worst = max(worst, abs(m_uv - m_xy))
    return worst


def residual_mi_tte(tte, s: float, t: float, spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """Residual MI of a TTE model through the substitution ``u = R1(x)``, ``v = R2(y)``.

    Works directly with the time transform, so the marginal hazards drop out.
    For a truncated model the domain is ``u + v <= omega``.
    """
    if not hasattr(tte, "W_bar_d2"):
        raise InvalidTTE("residual_mi_tte requires a TTE model")
    a = float(tte.R1.value(np.array([s]))[0])
    b = float(tte.R2.value(np.array([t]))[0])
    omega = tte.omega
    if not a + b < omega:
        raise ZeroRegionProbability("R1(s) + R2(t) must lie below omega")
    if np.isfinite(omega) and abs(float(tte._W1(omega))) > 1e-8:
        raise InvalidTTE("truncated model requires W_bar'(omega) = 0")
    wab = float(tte.W_bar(a + b))
    if not wab > 0:
        raise ZeroRegionProbability("joint survival vanishes at (s, t)")

    def integrand(u, v):
        w2 = np.asarray(tte.W_bar_d2(u + v), dtype=float)
        d1 = np.asarray(tte.W_bar_d1(u + b), dtype=float)
        d2 = np.asarray(tte.W_bar_d1(a + v), dtype=float)
        ok = (w2 > 0) & (d1 < 0) & (d2 < 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = w2 * (np.log(np.where(ok, w2, 1.0)) + np.log(wab)
                        - np.log(np.where(ok, -d1, 1.0)) - np.log(np.where(ok, -d2, 1.0)))
        return np.where(ok, val, 0.0)

    if np.isfinite(omega):
        dom = YSection(a, omega - b, lambda u: np.full(np.shape(u), b),
                       lambda u: np.maximum(omega - np.asarray(u), b))
    else:
        dom = YSection(a, np.inf, lambda u: np.full(np.shape(u), b),
                       lambda u: np.full(np.shape(u), np.inf))
    res = integrate_2d(integrand, dom, spec.per_mass(wab))
    value = res.value / wab
    err = res.error_estimate / wab + rounding_floor(np.log(wab), value)
    return MeasureResult(float(value), float(err), res.evaluations, res.converged)


def blm_deviation(model, probes: int = 40, seed: int = 0) -> float:
    """Largest ``|F-bar(x + t, y + t) - F-bar(x, y) F-bar(t, t)|`` over random probes."""
    rng = np.random.default_rng(seed)
    qx = rng.uniform(0.0, 0.9, (3, probes))
    x = np.asarray(model.marginal_quantile_x(qx[0]), dtype=float)
    y = np.asarray(model.marginal_quantile_y(qx[1]), dtype=float)
    t = np.asarray(model.marginal_quantile_x(qx[2] * 0.5), dtype=float)
    lhs = np.asarray(model.survival(x + t, y + t), dtype=float)
    rhs = np.asarray(model.survival(x, y), dtype=float) * np.asarray(model.survival(t, t), dtype=float)
    return float(np.max(np.abs(lhs - rhs)))


def blm_constancy_check(model, t_grid, spec: QuadratureSpec = DEFAULT_SPEC,
                        require_blm: bool = True, blm_tol: float = 1e-10) -> float:
    """Largest deviation of ``M(t, t)`` from ``M(0, 0)`` along ``t_grid``.

    The deviation is relative when ``|M(0, 0)| > 0.1`` and absolute
    otherwise.  With ``require_blm`` the bivariate lack-of-memory identity is
    probed first and :class:`NotBLM` raised if it fails.
    """
    if require_blm:
        dev = blm_deviation(model)
        if dev > blm_tol:
            raise NotBLM(f"lack-of-memory identity violated by {dev:.3e}")
    ref = residual_mi(model, 0.0, 0.0, spec).value
    worst = 0.0
    for t in t_grid:
        m = residual_mi(model, t, t, spec).value
        d = abs(m - ref)
        worst = max(worst, d / abs(ref) if abs(ref) > 0.1 else d)
    return worst
