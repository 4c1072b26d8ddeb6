"""Adaptive Gauss-Kronrod quadrature on finite and semi-infinite domains.

The workhorse is :func:`integrate_batch`, a globally adaptive G7/K15 scheme
that integrates many independent 1D problems at once, evaluating the
integrand on flat numpy arrays.  :func:`integrate_1d` is the single-problem
front end and :func:`integrate_2d` builds iterated (outer ``x``, inner ``y``)
cubature on top of the batch routine: all inner integrals belonging to the
15 nodes of a new outer interval are solved in one batch.

Semi-infinite axes are mapped onto ``(0, 1)`` before subdivision, either with
the rational map ``x = lo + u/(1-u)`` or the log map ``x = lo - log(1-u)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NegativeDensity, NonConvergenceWarning, NonFiniteIntegrand

__all__ = [
    "QuadratureSpec",
    "IntegralResult",
    "Rectangle",
    "YSection",
    "integrate_1d",
    "integrate_2d",
    "integrate_batch",
    "xlogx",
    "DEFAULT_SPEC",
]

TRANSFORMS = ("none", "rational_map", "log_map")

# Kronrod 15-point abscissae (positive half, descending) and weights, with the
# embedded 7-point Gauss weights for the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes, ascending
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[9, 11, 13]] = _WG[2::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for one adaptive integral.

    ``max_subdivisions`` bounds the number of subintervals per integral.
    ``transform`` selects the map used for semi-infinite axes.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_subdivisions: int = 400
    transform: str = "rational_map"

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.transform not in TRANSFORMS:
            raise ValueError(f"unknown transform {self.transform!r}; choose from {TRANSFORMS}")

    def tighter(self, factor: float = 0.01) -> "QuadratureSpec":
        """Spec for nested integrals, tolerances scaled by ``factor``."""
        return QuadratureSpec(self.rel_tol * factor, self.abs_tol * factor,
                              self.max_subdivisions, self.transform)

    def per_mass(self, mass: float) -> "QuadratureSpec":
        """Spec for an integral later divided by ``mass``: ``abs_tol`` scaled down to match."""
        if not 0 < mass < 1:
            return self
        return QuadratureSpec(self.rel_tol, max(self.abs_tol * mass, 1e-300),
                              self.max_subdivisions, self.transform)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class Rectangle:
    lo_x: float
    hi_x: float
    lo_y: float
    hi_y: float


@dataclass(frozen=True)
class YSection:
    """Region ``lo_x <= x <= hi_x``, ``y_lo(x) <= y <= y_hi(x)``.

    The boundary callables must accept numpy arrays.
    """

    lo_x: float
    hi_x: float
    y_lo: Callable[[np.ndarray], np.ndarray]
    y_hi: Callable[[np.ndarray], np.ndarray]


def xlogx(v, abs_tol: float = DEFAULT_SPEC.abs_tol):
    """``v log v`` with the continuous extension ``0 log 0 = 0``.

    Values in ``(-abs_tol, 0)`` are treated as floating-point noise and
    clamped to zero; anything more negative raises :class:`NegativeDensity`.
    """
    v = np.asarray(v, dtype=float)
    if np.any(v < -abs_tol):
        raise NegativeDensity(f"density value {float(np.min(v)):.3e} is negative")
    v = np.where(v > 0, v, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)
    return out if out.ndim else float(out)


# -- transforms -------------------------------------------------------------

def _to_unit(x, lo, kind):
    """Inverse of the semi-infinite map, used for breakpoints."""
    d = x - lo
    if kind == "rational_map":
        return d / (1.0 + d)
    return -np.expm1(-d)


def _from_unit(u, lo, kind):
    """Return ``(x, dx/du)`` for ``u`` in ``(0, 1)``."""
    w = 1.0 - u
    if kind == "rational_map":
        return lo + u / w, 1.0 / (w * w)
    return lo - np.log(w), 1.0 / w


# -- batch core -------------------------------------------------------------

def _gk_rule(vals, errs, half):
    """Apply the G7/K15 pair on a (m, 15) block of values."""
    k = vals @ _KW
    g = vals @ _GW
    mean = 0.5 * k
    resabs = np.abs(vals) @ _KW
    resasc = np.abs(vals - mean[:, None]) @ _KW
    err = np.abs((k - g) * half)
    resasc = resasc * half
    resabs = resabs * half
    scale = np.where((resasc != 0) & (err != 0),
                     np.minimum(1.0, (200.0 * err / np.where(resasc != 0, resasc, 1.0)) ** 1.5),
                     1.0)
    err = np.where((resasc != 0) & (err != 0), resasc * scale, err)
    err = np.where(resabs > _TINY / (50 * _EPS), np.maximum(50 * _EPS * resabs, err), err)
    inner = (np.abs(errs) @ _KW) * half if errs is not None else np.zeros_like(err)
    return k * half, err, inner


def integrate_batch(f, lo, hi, spec: QuadratureSpec = DEFAULT_SPEC, points=None,
                    with_errors: bool = False, abs_tol=None):
    """Integrate ``m`` independent 1D problems simultaneously.

    Parameters
    ----------
    f : callable
        ``f(owner, x)`` with integer array ``owner`` (problem index) and float
        array ``x`` of equal length.  Returns values, or ``(values, errors)``
        when ``with_errors`` is set (errors of nested integrals, propagated
        into the estimate).
    lo, hi : array_like
        Limits per problem; ``hi`` may be ``+inf``.  Problems with
        ``hi <= lo`` integrate to zero.
    points : sequence of array_like, optional
        Breakpoints per problem (``points[i]`` for problem ``i``); entries
        outside ``(lo, hi)`` or NaN are ignored.
    abs_tol : array_like, optional
        Per-problem absolute tolerance overriding ``spec.abs_tol``.

    Returns
    -------
    values, errors, evaluations, converged : ndarray
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    lo, hi = np.broadcast_arrays(lo, hi)
    m = lo.size
    if np.any(~np.isfinite(lo)):
        raise ValueError("lower limits must be finite")
    infinite = np.isposinf(hi)
    if np.any(infinite) and spec.transform == "none":
        raise ValueError("semi-infinite interval requires transform 'rational_map' or 'log_map'")
    kind = spec.transform
    atol = np.broadcast_to(spec.abs_tol if abs_tol is None else np.asarray(abs_tol, dtype=float),
                           (m,))

    # Initial intervals in integration coordinates (u-space for infinite problems).
    a0 = np.where(infinite, 0.0, lo)
    b0 = np.where(infinite, 1.0, hi)
    active = b0 > a0
    seg_lo, seg_hi, seg_own = [], [], []
    for i in np.flatnonzero(active):
        cuts = [a0[i], b0[i]]
        if points is not None and points[i] is not None:
            p = np.asarray(points[i], dtype=float).ravel()
            p = p[np.isfinite(p) & (p > lo[i]) & (p < hi[i])]
            if infinite[i]:
                p = _to_unit(p, lo[i], kind)
            cuts = np.unique(np.concatenate([cuts, p]))
        seg_lo.append(cuts[:-1])
        seg_hi.append(cuts[1:])
        seg_own.append(np.full(len(cuts) - 1, i))
    values = np.zeros(m)
    errors = np.zeros(m)
    evals = np.zeros(m, dtype=np.int64)
    converged = np.ones(m, dtype=bool)
    if not seg_lo:
        return values, errors, evals, converged

    def evaluate(a, b, own):
        half = 0.5 * (b - a)
        center = 0.5 * (a + b)
        t = (center[:, None] + half[:, None] * _NODES[None, :]).ravel()
        o = np.repeat(own, 15)
        inf_o = infinite[o]
        x = t.copy()
        jac = np.ones_like(t)
        if np.any(inf_o):
            xi, ji = _from_unit(t[inf_o], lo[o[inf_o]], kind)
            x[inf_o] = xi
            jac[inf_o] = ji
        out = f(o, x)
        if with_errors:
            v, e = out
            e = np.broadcast_to(np.asarray(e, dtype=float), t.shape) * jac
        else:
            v, e = out, None
        v = np.broadcast_to(np.asarray(v, dtype=float), t.shape)
        if not np.all(np.isfinite(v)):
            bad = x[~np.isfinite(v)][0]
            raise NonFiniteIntegrand(f"integrand is not finite at x={bad!r}")
        v = v * jac
        # a finite integrand times a diverging Jacobian at u -> 1 underflows to 0
        v = np.where(np.isfinite(v), v, 0.0)
        block = v.reshape(-1, 15)
        eblock = None if e is None else np.where(np.isfinite(e), e, 0.0).reshape(-1, 15)
        return _gk_rule(block, eblock, half)

    a = np.concatenate(seg_lo)
    b = np.concatenate(seg_hi)
    own = np.concatenate(seg_own)
    val, err, ierr = evaluate(a, b, own)
    np.add.at(evals, own, 15)

    while True:
        tot_val = np.bincount(own, val, minlength=m)
        tot_err = np.bincount(own, err + ierr, minlength=m)
        count = np.bincount(own, minlength=m)
        tol = np.maximum(atol, spec.rel_tol * np.abs(tot_val))
        need = (tot_err > tol) & (count < spec.max_subdivisions)
        width_ok = (b - a) > 64 * _EPS * np.maximum(np.abs(a), np.abs(b))
        e_int = err + ierr
        cand = need[own] & width_ok & (e_int > tol[own] / count[own])
        if not np.any(cand):
            break
        # respect the per-problem budget, largest errors first
        idx = np.flatnonzero(cand)
        order = np.lexsort((-e_int[idx], own[idx]))
        idx = idx[order]
        o_sel = own[idx]
        first = np.searchsorted(o_sel, o_sel, side="left")
        rank = np.arange(idx.size) - first
        budget = spec.max_subdivisions - count[o_sel]
        idx = idx[rank < budget]
        if idx.size == 0:
            break
        mid = 0.5 * (a[idx] + b[idx])
        na = np.concatenate([a[idx], mid])
        nb = np.concatenate([mid, b[idx]])
        no = np.concatenate([own[idx], own[idx]])
        nv, ne, ni = evaluate(na, nb, no)
        np.add.at(evals, no, 15)
        keep = np.ones(a.size, dtype=bool)
        keep[idx] = False
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        own = np.concatenate([own[keep], no])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        ierr = np.concatenate([ierr[keep], ni])

    values = np.bincount(own, val, minlength=m)
    errors = np.bincount(own, err + ierr, minlength=m)
    tol = np.maximum(atol, spec.rel_tol * np.abs(values))
    converged = errors <= tol
    converged[~active] = True
    return values, errors, evals, converged


def _vectorize(f):
    def g(x):
        try:
            y = f(x)
        except (TypeError, ValueError):
            return np.array([f(float(xi)) for xi in x], dtype=float)
        return np.broadcast_to(np.asarray(y, dtype=float), np.shape(x))
    return g


def _warn_nonconvergence(err, where):
    warnings.warn(f"{where}: subdivision budget exhausted (error estimate {err:.3e})",
                  NonConvergenceWarning, stacklevel=3)


def integrate_1d(f, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_SPEC,
                 points: Sequence[float] | None = None) -> IntegralResult:
    """Adaptive integral of ``f`` over ``(lo, hi)``; ``hi`` may be ``inf``.

    ``f`` is called with numpy arrays when possible and falls back to
    elementwise calls otherwise.  A non-converged integral is still returned
    (with ``converged=False``) and a :class:`NonConvergenceWarning` is issued.
    """
    if not lo < hi:
        raise ValueError("integrate_1d requires lo < hi")
    g = _vectorize(f)
    v, e, n, c = integrate_batch(lambda o, x: g(x), [lo], [hi], spec,
                                 points=None if points is None else [points])
    if not c[0]:
        _warn_nonconvergence(e[0], "integrate_1d")
    return IntegralResult(float(v[0]), float(e[0]), int(n[0]), bool(c[0]))


def integrate_2d(f, domain, spec: QuadratureSpec = DEFAULT_SPEC,
                 x_points: Sequence[float] | None = None,
                 y_points: Callable[[np.ndarray], np.ndarray] | None = None) -> IntegralResult:
    """Iterated adaptive integral of ``f(x, y)`` over a rectangle or y-section.

    ``f`` must accept equal-length arrays.  ``y_points(x)`` may return, for an
    array of outer abscissae, a 2D array of inner breakpoints (one row per
    abscissa, NaN for unused slots); ``x_points`` are outer breakpoints.
    The reported error adds the outer estimate to the inner estimates
    propagated through the outer rule.
    """
    if isinstance(domain, Rectangle):
        lo_x, hi_x = domain.lo_x, domain.hi_x
        lo_y, hi_y = domain.lo_y, domain.hi_y
        y_lo = lambda x: np.full(np.shape(x), lo_y, dtype=float)
        y_hi = lambda x: np.full(np.shape(x), hi_y, dtype=float)
    elif isinstance(domain, YSection):
        lo_x, hi_x, y_lo, y_hi = domain.lo_x, domain.hi_x, domain.y_lo, domain.y_hi
    else:
        raise TypeError(f"unsupported domain {domain!r}")
    if not lo_x < hi_x:
        return IntegralResult(0.0, 0.0, 0, True)
    inner_spec = spec.tighter()
    inner_evals = [0]
    open_x = np.isposinf(hi_x)

    def outer(o, x):
        lo = np.asarray(y_lo(x), dtype=float)
        hi = np.asarray(y_hi(x), dtype=float)
        lo = np.broadcast_to(lo, x.shape)
        hi = np.broadcast_to(hi, x.shape)
        pts = None
        if y_points is not None:
            pts = np.atleast_2d(np.asarray(y_points(x), dtype=float))
            if pts.shape[0] != x.size:
                pts = np.broadcast_to(pts, (x.size, pts.shape[-1]))
        # inner errors are later multiplied by the outer Jacobian; scale the
        # absolute tolerance down by it so the tail does not swamp the estimate
        atol = inner_spec.abs_tol
        if open_x:
            d = x - lo_x
            jac = (1.0 + d) ** 2 if spec.transform == "rational_map" else np.exp(np.minimum(d, 700.0))
            atol = np.maximum(inner_spec.abs_tol / jac, _TINY)
        v, e, n, c = integrate_batch(lambda oi, y: f(x[oi], y), lo, hi, inner_spec, points=pts,
                                     abs_tol=atol)
        inner_evals[0] += int(n.sum())
        return v, e

    pts = None if x_points is None else [x_points]
    v, e, n, c = integrate_batch(outer, [lo_x], [hi_x], spec, points=pts, with_errors=True)
    # inner errors are already folded into the outer estimate, so an inner
    # integral that stalls far in a mapped tail does not by itself fail the result
    ok = bool(c[0])
    if not ok:
        _warn_nonconvergence(e[0], "integrate_2d")
    return IntegralResult(float(v[0]), float(e[0]), inner_evals[0], ok)
