"""Bivariate lifetime distributions.

Every model exposes the joint density, distribution and survival functions,
the marginals, and four partial integrals of the density,

    pdf_x_below(x, t) = int_0^t f(x, v) dv      pdf_x_above(x, t) = int_t^inf f(x, v) dv
    pdf_y_below(s, y) = int_0^s f(u, y) du      pdf_y_above(s, y) = int_s^inf f(u, y) du

from which every conditional marginal density is built.  Built-in families
implement these analytically; the base class falls back to quadrature
(memoized on the distinct abscissae of each call) for user-defined models.
All methods accept numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy import stats

from .copulas import Copula, IndependenceCopula
from .errors import InvalidTTE
from .quadrature import DEFAULT_SPEC, integrate_2d, integrate_batch
from .regions import REGION_KINDS, ConditioningRegion, region_domain
from .special import bisect_increasing, exp1

__all__ = [
    "Support", "BivariateLifetimeModel", "LinearUnitSquare", "UniformTriangle",
    "ReflectedTriangle", "GumbelTypeModel", "TTEModel", "AccumulatedHazard",
    "FreundModel", "CopulaModel", "ReflectedModel", "marginal",
    "make_linear_unit_square", "make_uniform_triangle", "make_reflected_triangle",
    "make_gumbel_type", "make_tte", "make_lomax_tte", "make_truncated_tte",
    "make_from_copula", "make_independent", "make_freund", "linear_hazard",
    "weibull_hazard", "reflect",
]



def _arr(*args):
    return np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in args])


def _out(a):
    a = np.asarray(a, dtype=float)
    return a if a.ndim else float(a)


@dataclass(frozen=True)
class Support:
    """Support ``{x_min <= x <= x_max, lower(x) <= y <= upper(x)}``.

    ``y_lower``/``y_upper`` are optional boundary curves; without them the
    y-range is ``[0, y_max]``.
    """

    kind: str = "rectangle"
    x_max: float = np.inf
    y_max: float = np.inf
    y_upper: Callable | None = None
    y_lower: Callable | None = None
    x_min: float = 0.0

    def lower(self, x):
        x = np.asarray(x, dtype=float)
        if self.y_lower is None:
            return np.zeros_like(x)
        return np.maximum(0.0, np.asarray(self.y_lower(x), dtype=float))

    def upper(self, x):
        x = np.asarray(x, dtype=float)
        if self.y_upper is None:
            return np.full_like(x, self.y_max)
        return np.minimum(self.y_max, np.asarray(self.y_upper(x), dtype=float))

    def contains(self, x, y):
        x, y = _arr(x, y)
        return (x >= self.x_min) & (x <= self.x_max) & (y >= self.lower(x)) & (y <= self.upper(x))


class BivariateLifetimeModel:
    """Base class for a nonnegative absolutely continuous pair ``(X, Y)``.

    Subclasses must implement :meth:`pdf` and should override whichever of
    ``cdf``/``survival`` and the marginals they know in closed form.
    """

    name = "model"
    exchangeable = False
    #: density has a jump across the diagonal ``y = x``
    diagonal_break = False

    def __init__(self, support: Support | None = None):
        self.support = support if support is not None else Support()

    # -- joint ------------------------------------------------------------
    def pdf(self, x, y):
        raise NotImplementedError

    def _overrides(self, method: str) -> bool:
        return getattr(type(self), method) is not getattr(BivariateLifetimeModel, method)

    def cdf(self, s, t):
        """``F(s, t) = P(X <= s, Y <= t)``."""
        if self._overrides("survival"):
            s, t = _arr(s, t)
            val = 1.0 - np.asarray(self.marginal_sf_x(s)) - np.asarray(self.marginal_sf_y(t)) \
                + np.asarray(self.survival(s, t))
            return _out(np.clip(val, 0.0, 1.0))
        return self._quad_prob(s, t, "past_past")

    def survival(self, s, t):
        """``F-bar(s, t) = P(X > s, Y > t)``."""
        if self._overrides("cdf"):
            s, t = _arr(s, t)
            val = 1.0 - np.asarray(self.marginal_cdf_x(s)) - np.asarray(self.marginal_cdf_y(t)) \
                + np.asarray(self.cdf(s, t))
            return _out(np.clip(val, 0.0, 1.0))
        return self._quad_prob(s, t, "residual_residual")

    def _quad_prob(self, s, t, kind):
        s, t = _arr(s, t)
        flat = [self._quad_prob_scalar(float(a), float(b), kind) for a, b in zip(s.ravel(), t.ravel())]
        return _out(np.reshape(flat, s.shape))

    @lru_cache(maxsize=4096)
    def _quad_prob_scalar(self, s, t, kind):
        dom = region_domain(self, ConditioningRegion(kind, max(s, 0.0), max(t, 0.0)))
        if dom is None:
            return 0.0
        return min(1.0, max(0.0, integrate_2d(self.pdf, dom.ysection(),
                                              DEFAULT_SPEC.tighter(),
                                              x_points=dom.x_points,
                                              y_points=dom.y_points_fn).value))

    # -- marginals --------------------------------------------------------
    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        return self.pdf_x_below(x, np.full_like(x, np.inf))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        return self.pdf_y_below(np.full_like(y, np.inf), y)

    def marginal_cdf_x(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        hi = np.clip(x, self.support.x_min, self.support.x_max)
        v, *_ = integrate_batch(lambda o, u: self.marginal_pdf_x(u), np.full_like(hi, self.support.x_min),
                                hi, DEFAULT_SPEC.tighter())
        return _out(np.clip(v, 0, 1).reshape(np.shape(x)))

    def marginal_cdf_y(self, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        hi = np.clip(y, 0.0, self.support.y_max)
        v, *_ = integrate_batch(lambda o, u: self.marginal_pdf_y(u), np.zeros_like(hi), hi,
                                DEFAULT_SPEC.tighter())
        return _out(np.clip(v, 0, 1).reshape(np.shape(y)))

    def marginal_sf_x(self, x):
        return _out(1.0 - np.asarray(self.marginal_cdf_x(x)))

    def marginal_sf_y(self, y):
        return _out(1.0 - np.asarray(self.marginal_cdf_y(y)))

    def marginal_quantile_x(self, p):
        p = np.asarray(p, dtype=float)
        return bisect_increasing(self.marginal_cdf_x, p, self.support.x_min, self.support.x_max)

    def marginal_quantile_y(self, p):
        p = np.asarray(p, dtype=float)
        return bisect_increasing(self.marginal_cdf_y, p, 0.0, self.support.y_max)

    # -- partial integrals ------------------------------------------------
    def _partial(self, fixed, a, b, along_y: bool):
        """int_a^b f(fixed, w) dw (along y) or int_a^b f(w, fixed) dw (along x)."""
        fixed, a, b = _arr(fixed, a, b)
        shape = fixed.shape
        key = np.stack([fixed.ravel(), a.ravel(), b.ravel()])
        uniq, inv = np.unique(key, axis=1, return_inverse=True)
        fx, lo, hi = uniq
        if along_y:
            lo = np.maximum(lo, self.support.lower(fx))
            hi = np.minimum(hi, self.support.upper(fx))
            g = lambda o, w: self.pdf(fx[o], w)
        else:
            lo = np.maximum(lo, self.support.x_min)
            hi = np.minimum(hi, self.support.x_max)
            g = lambda o, w: self.pdf(w, fx[o])
        pts = fx[:, None] if self.diagonal_break else None
        vals, *_ = integrate_batch(g, lo, np.maximum(hi, lo), DEFAULT_SPEC.tighter(), points=pts)
        return vals[np.ravel(inv)].reshape(shape)

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        return _out(self._partial(x, np.zeros_like(t), t, along_y=True))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        return _out(self._partial(x, t, np.full_like(t, np.inf), along_y=True))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        return _out(self._partial(y, np.zeros_like(s), s, along_y=False))

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        return _out(self._partial(y, s, np.full_like(s, np.inf), along_y=False))

    # -- conditioning events ----------------------------------------------
    def region_probability(self, kind: str, s: float, t: float) -> float:
        """Probability of one of the four quadrant events anchored at ``(s, t)``."""
        if kind == "past_past":
            return float(self.cdf(s, t))
        if kind == "residual_residual":
            return float(self.survival(s, t))
        if kind == "past_residual":
            return float(max(0.0, self.marginal_cdf_x(s) - self.cdf(s, t)))
        if kind == "residual_past":
            return float(max(0.0, self.marginal_cdf_y(t) - self.cdf(s, t)))
        raise ValueError(f"unknown region kind {kind!r}")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# ---------------------------------------------------------------------------
# univariate marginals (scipy frozen distributions)

def marginal(family: str, **params):
    """Frozen scipy distribution used as a lifetime marginal.

    ``uniform(scale)``, ``exponential(rate)``, ``weibull(shape, scale)``.
    """
    family = family.lower()
    if family == "uniform":
        return stats.uniform(loc=0.0, scale=params.get("scale", 1.0))
    if family in ("exponential", "exp", "expon"):
        return stats.expon(scale=1.0 / params.get("rate", 1.0))
    if family == "weibull":
        return stats.weibull_min(params.get("shape", 2.0), scale=params.get("scale", 1.0))
    raise ValueError(f"unknown marginal family {family!r}")


# ---------------------------------------------------------------------------
# linear density on the unit square

class LinearUnitSquare(BivariateLifetimeModel):
    """``f(x, y) = x + y`` on ``[0, 1]^2``."""

    name = "linear"
    exchangeable = True

    def __init__(self):
        super().__init__(Support("rectangle", 1.0, 1.0))

    def pdf(self, x, y):
        x, y = _arr(x, y)
        inside = (x >= 0) & (x <= 1) & (y >= 0) & (y <= 1)
        return _out(np.where(inside, x + y, 0.0))

    def cdf(self, s, t):
        s, t = _arr(s, t)
        s = np.clip(s, 0, 1)
        t = np.clip(t, 0, 1)
        return _out(s * t * (s + t) / 2.0)

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        return _out(np.where((x >= 0) & (x <= 1), x + 0.5, 0.0))

    marginal_pdf_y = marginal_pdf_x

    def marginal_cdf_x(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0, 1)
        return _out(x * (x + 1.0) / 2.0)

    marginal_cdf_y = marginal_cdf_x

    def marginal_quantile_x(self, p):
        p = np.asarray(p, dtype=float)
        return _out((-1.0 + np.sqrt(1.0 + 8.0 * p)) / 2.0)

    marginal_quantile_y = marginal_quantile_x

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        t = np.clip(t, 0, 1)
        return _out(np.where((x >= 0) & (x <= 1), x * t + t * t / 2.0, 0.0))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        t = np.clip(t, 0, 1)
        return _out(np.where((x >= 0) & (x <= 1), x * (1 - t) + (1 - t * t) / 2.0, 0.0))

    def pdf_y_below(self, s, y):
        return self.pdf_x_below(y, s)

    def pdf_y_above(self, s, y):
        return self.pdf_x_above(y, s)


def make_linear_unit_square() -> LinearUnitSquare:
    return LinearUnitSquare()


# ---------------------------------------------------------------------------
# uniform density on a triangle and its reflection

class UniformTriangle(BivariateLifetimeModel):
    """Uniform on ``{x, y >= 0, alpha x + beta y <= 1}``; density ``2 alpha beta``."""

    name = "triangle"

    def __init__(self, alpha: float = 1.0, beta: float = 1.0):
        if not (alpha > 0 and beta > 0):
            raise ValueError("alpha and beta must be positive")
        self.alpha, self.beta = float(alpha), float(beta)
        self.exchangeable = alpha == beta
        super().__init__(Support("triangle", 1 / alpha, 1 / beta,
                                 y_upper=lambda x: (1 - alpha * x) / beta))

    def pdf(self, x, y):
        x, y = _arr(x, y)
        a, b = self.alpha, self.beta
        return _out(np.where((x >= 0) & (y >= 0) & (a * x + b * y <= 1), 2 * a * b, 0.0))

    def survival(self, s, t):
        s, t = _arr(s, t)
        z = 1 - self.alpha * np.maximum(s, 0) - self.beta * np.maximum(t, 0)
        return _out(np.maximum(z, 0.0) ** 2)

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        return _out(np.where(x >= 0, 2 * self.alpha * np.maximum(0, 1 - self.alpha * x), 0.0))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        return _out(np.where(y >= 0, 2 * self.beta * np.maximum(0, 1 - self.beta * y), 0.0))

    def marginal_sf_x(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0)
        return _out(np.maximum(0, 1 - self.alpha * x) ** 2)

    def marginal_sf_y(self, y):
        y = np.maximum(np.asarray(y, dtype=float), 0)
        return _out(np.maximum(0, 1 - self.beta * y) ** 2)

    def marginal_cdf_x(self, x):
        return _out(1 - np.asarray(self.marginal_sf_x(x)))

    def marginal_cdf_y(self, y):
        return _out(1 - np.asarray(self.marginal_sf_y(y)))

    def marginal_quantile_x(self, p):
        return _out((1 - np.sqrt(1 - np.asarray(p, dtype=float))) / self.alpha)

    def marginal_quantile_y(self, p):
        return _out((1 - np.sqrt(1 - np.asarray(p, dtype=float))) / self.beta)

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        a, b = self.alpha, self.beta
        val = 2 * a * np.maximum(0, 1 - a * x - b * np.maximum(t, 0))
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        a, b = self.alpha, self.beta
        top = np.maximum(0, (1 - a * x) / b)
        val = 2 * a * b * np.clip(t, 0, top)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        a, b = self.alpha, self.beta
        val = 2 * b * np.maximum(0, 1 - a * np.maximum(s, 0) - b * y)
        return _out(np.where(y >= 0, val, 0.0))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        a, b = self.alpha, self.beta
        right = np.maximum(0, (1 - b * y) / a)
        return _out(np.where(y >= 0, 2 * a * b * np.clip(s, 0, right), 0.0))


class ReflectedTriangle(BivariateLifetimeModel):
    """Uniform on ``{x <= 1/alpha, y <= 1/beta, alpha x + beta y >= 1}``.

    The point reflection of :class:`UniformTriangle` through
    ``(1/(2 alpha), 1/(2 beta))``; ``F(x, y) = (alpha x + beta y - 1)^2``.
    """

    name = "reflected-triangle"

    def __init__(self, alpha: float = 1.0, beta: float = 1.0):
        if not (alpha > 0 and beta > 0):
            raise ValueError("alpha and beta must be positive")
        self.alpha, self.beta = float(alpha), float(beta)
        self.exchangeable = alpha == beta
        super().__init__(Support("triangle", 1 / alpha, 1 / beta,
                                 y_lower=lambda x: (1 - alpha * x) / beta))

    def pdf(self, x, y):
        x, y = _arr(x, y)
        a, b = self.alpha, self.beta
        inside = (x <= 1 / a) & (y <= 1 / b) & (a * x + b * y >= 1)
        return _out(np.where(inside, 2 * a * b, 0.0))

    def cdf(self, s, t):
        s, t = _arr(s, t)
        a, b = self.alpha, self.beta
        z = a * np.minimum(s, 1 / a) + b * np.minimum(t, 1 / b) - 1
        return _out(np.maximum(z, 0.0) ** 2)

    def marginal_cdf_x(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0, 1 / self.alpha)
        return _out((self.alpha * x) ** 2)

    def marginal_cdf_y(self, y):
        y = np.clip(np.asarray(y, dtype=float), 0, 1 / self.beta)
        return _out((self.beta * y) ** 2)

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        return _out(np.where((x >= 0) & (x <= 1 / self.alpha), 2 * self.alpha ** 2 * x, 0.0))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        return _out(np.where((y >= 0) & (y <= 1 / self.beta), 2 * self.beta ** 2 * y, 0.0))

    def marginal_quantile_x(self, p):
        return _out(np.sqrt(np.asarray(p, dtype=float)) / self.alpha)

    def marginal_quantile_y(self, p):
        return _out(np.sqrt(np.asarray(p, dtype=float)) / self.beta)

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        a, b = self.alpha, self.beta
        val = 2 * a * np.maximum(0, b * np.minimum(t, 1 / b) - 1 + a * x)
        return _out(np.where((x >= 0) & (x <= 1 / a), val, 0.0))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        a, b = self.alpha, self.beta
        val = 2 * a * np.maximum(0, 1 - np.maximum(b * t, 1 - a * x))
        return _out(np.where((x >= 0) & (x <= 1 / a), val, 0.0))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        a, b = self.alpha, self.beta
        val = 2 * b * np.maximum(0, a * np.minimum(s, 1 / a) - 1 + b * y)
        return _out(np.where((y >= 0) & (y <= 1 / b), val, 0.0))

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        a, b = self.alpha, self.beta
        val = 2 * b * np.maximum(0, 1 - np.maximum(a * s, 1 - b * y))
        return _out(np.where((y >= 0) & (y <= 1 / b), val, 0.0))


def make_uniform_triangle(alpha: float = 1.0, beta: float = 1.0) -> UniformTriangle:
    return UniformTriangle(alpha, beta)


def make_reflected_triangle(alpha: float = 1.0, beta: float = 1.0) -> ReflectedTriangle:
    return ReflectedTriangle(alpha, beta)


# ---------------------------------------------------------------------------
# Gumbel-type density built on Gamma(0, z)

class GumbelTypeModel(BivariateLifetimeModel):
    """``f = theta/G0 exp{-(1 + theta x)(1 + theta y)/theta}``, ``G0 = Gamma(0, 1/theta)``.

    Joint survival ``Gamma(0, (1 + theta x)(1 + theta y)/theta) / G0``.
    """

    name = "gumbel"
    exchangeable = True

    def __init__(self, theta: float = 1.0):
        if not theta > 0:
            raise ValueError("theta must be positive")
        self.theta = float(theta)
        self.g0 = exp1(1.0 / self.theta)
        super().__init__(Support("rectangle"))

    def _z(self, x, y):
        th = self.theta
        return (1 + th * x) * (1 + th * y) / th

    def pdf(self, x, y):
        x, y = _arr(x, y)
        inside = (x >= 0) & (y >= 0)
        xs, ys = np.maximum(x, 0), np.maximum(y, 0)
        return _out(np.where(inside, self.theta / self.g0 * np.exp(-self._z(xs, ys)), 0.0))

    def survival(self, s, t):
        s, t = _arr(s, t)
        z = self._z(np.maximum(s, 0), np.maximum(t, 0))
        return _out(np.where(z < 740, exp1(np.minimum(z, 740)), 0.0) / self.g0)

    def marginal_sf_x(self, x):
        x = np.asarray(x, dtype=float)
        return self.survival(x, np.zeros_like(x))

    def marginal_sf_y(self, y):
        y = np.asarray(y, dtype=float)
        return self.survival(np.zeros_like(y), y)

    def marginal_cdf_x(self, x):
        return _out(1.0 - np.asarray(self.marginal_sf_x(x)))

    def marginal_cdf_y(self, y):
        return _out(1.0 - np.asarray(self.marginal_sf_y(y)))

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        return self.pdf_x_above(x, np.zeros_like(x))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        return self.pdf_y_above(np.zeros_like(y), y)

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        th = self.theta
        xs = np.maximum(x, 0)
        val = self.theta / self.g0 * np.exp(-self._z(xs, np.maximum(t, 0))) / (1 + th * xs)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        th = self.theta
        xs = np.maximum(x, 0)
        a = (1 + th * xs) / th
        val = th / self.g0 * np.exp(-a) * -np.expm1(-a * th * np.maximum(t, 0)) / (1 + th * xs)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_y_above(self, s, y):
        return self.pdf_x_above(y, s)

    def pdf_y_below(self, s, y):
        return self.pdf_x_below(y, s)


def make_gumbel_type(theta: float = 1.0) -> GumbelTypeModel:
    return GumbelTypeModel(theta)


# ---------------------------------------------------------------------------
# time-transformed exponential model

class AccumulatedHazard(NamedTuple):
    value: Callable
    d1: Callable
    inv: Callable


def linear_hazard(rate: float) -> AccumulatedHazard:
    """``R(s) = rate * s``."""
    return AccumulatedHazard(lambda s: rate * np.asarray(s, dtype=float),
                             lambda s: np.full(np.shape(s), float(rate)),
                             lambda r: np.asarray(r, dtype=float) / rate)


def weibull_hazard(rate: float, shape: float) -> AccumulatedHazard:
    """``R(s) = rate * s**shape``."""
    return AccumulatedHazard(
        lambda s: rate * np.maximum(np.asarray(s, dtype=float), 0) ** shape,
        lambda s: rate * shape * np.maximum(np.asarray(s, dtype=float), 0) ** (shape - 1),
        lambda r: (np.asarray(r, dtype=float) / rate) ** (1.0 / shape))


class TTEModel(BivariateLifetimeModel):
    """``F-bar(s, t) = W[R1(s) + R2(t)]`` with optional truncation at ``omega``.

    ``W`` (the time transform) and its first two derivatives are supplied
    analytically.  With finite ``omega`` the joint support is
    ``R1(x) + R2(y) <= omega`` and ``W``, ``W'`` must vanish at ``omega``.
    """

    name = "tte"

    def __init__(self, W_bar, W_bar_d1, W_bar_d2, R1: AccumulatedHazard, R2: AccumulatedHazard,
                 omega: float = np.inf, W_bar_inv=None, exchangeable: bool = False,
                 validate: bool = True):
        self._W, self._W1, self._W2 = W_bar, W_bar_d1, W_bar_d2
        self._Winv = W_bar_inv
        self.R1, self.R2 = R1, R2
        self.omega = float(omega)
        self.exchangeable = exchangeable
        if np.isfinite(self.omega):
            x_max = float(R1.inv(self.omega))
            y_max = float(R2.inv(self.omega))
            support = Support("curvilinear", x_max, y_max,
                              y_upper=lambda x: R2.inv(np.maximum(self.omega - R1.value(
                                  np.minimum(x, x_max)), 0.0)))
        else:
            support = Support("rectangle")
        super().__init__(support)
        if validate:
            self.validate()

    # time transform, clamped beyond omega
    def W_bar(self, z):
        z = np.asarray(z, dtype=float)
        return _out(np.where(z < self.omega, self._W(np.minimum(z, self._zcap)), 0.0))

    def W_bar_d1(self, z):
        z = np.asarray(z, dtype=float)
        return _out(np.where(z < self.omega, self._W1(np.minimum(z, self._zcap)), 0.0))

    def W_bar_d2(self, z):
        z = np.asarray(z, dtype=float)
        return _out(np.where(z < self.omega, self._W2(np.minimum(z, self._zcap)), 0.0))

    @property
    def _zcap(self):
        return self.omega if np.isfinite(self.omega) else np.inf

    def W_bar_inv(self, w):
        w = np.asarray(w, dtype=float)
        if self._Winv is not None:
            return _out(self._Winv(w))
        hi = self.omega if np.isfinite(self.omega) else np.inf
        return bisect_increasing(lambda z: -np.asarray(self.W_bar(z)), -w, 0.0, hi)

    def validate(self):
        """Probe the structural TTE assumptions; raise :class:`InvalidTTE`."""
        top = self.omega if np.isfinite(self.omega) else 50.0
        z = np.linspace(0.0, top, 401)[:-1] if np.isfinite(self.omega) else np.geomspace(1e-6, top, 400)
        w = np.asarray(self._W(z))
        if abs(float(self._W(0.0)) - 1.0) > 1e-12:
            raise InvalidTTE("W_bar(0) must equal 1")
        if np.any(np.diff(w) >= 0):
            raise InvalidTTE("W_bar must be strictly decreasing")
        if np.any(np.asarray(self._W2(z)) < -1e-12):
            raise InvalidTTE("W_bar must be convex (W_bar'' >= 0)")
        if np.isfinite(self.omega):
            if abs(float(self._W(self.omega))) > 1e-10:
                raise InvalidTTE("truncated model requires W_bar(omega) = 0")
            if abs(float(self._W1(self.omega))) > 1e-8:
                raise InvalidTTE("truncated model requires W_bar'(omega) = 0")
        s = np.linspace(0.0, 5.0, 101)
        for name, R in (("R1", self.R1), ("R2", self.R2)):
            r = np.asarray(R.value(s))
            if abs(r[0]) > 1e-12:
                raise InvalidTTE(f"{name}(0) must be 0")
            if np.any(np.diff(r) <= 0):
                raise InvalidTTE(f"{name} must be strictly increasing")

    def pdf(self, x, y):
        x, y = _arr(x, y)
        inside = (x >= 0) & (y >= 0)
        xs, ys = np.maximum(x, 0), np.maximum(y, 0)
        z = self.R1.value(xs) + self.R2.value(ys)
        val = np.asarray(self.W_bar_d2(z)) * self.R1.d1(xs) * self.R2.d1(ys)
        return _out(np.where(inside & (z <= self.omega), val, 0.0))

    def survival(self, s, t):
        s, t = _arr(s, t)
        return self.W_bar(self.R1.value(np.maximum(s, 0)) + self.R2.value(np.maximum(t, 0)))

    def marginal_sf_x(self, x):
        return self.W_bar(self.R1.value(np.maximum(np.asarray(x, dtype=float), 0)))

    def marginal_sf_y(self, y):
        return self.W_bar(self.R2.value(np.maximum(np.asarray(y, dtype=float), 0)))

    def marginal_cdf_x(self, x):
        return _out(1.0 - np.asarray(self.marginal_sf_x(x)))

    def marginal_cdf_y(self, y):
        return _out(1.0 - np.asarray(self.marginal_sf_y(y)))

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.maximum(x, 0)
        val = -np.asarray(self.W_bar_d1(self.R1.value(xs))) * self.R1.d1(xs)
        return _out(np.where(x >= 0, val, 0.0))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        ys = np.maximum(y, 0)
        val = -np.asarray(self.W_bar_d1(self.R2.value(ys))) * self.R2.d1(ys)
        return _out(np.where(y >= 0, val, 0.0))

    def marginal_quantile_x(self, p):
        return _out(self.R1.inv(self.W_bar_inv(1.0 - np.asarray(p, dtype=float))))

    def marginal_quantile_y(self, p):
        return _out(self.R2.inv(self.W_bar_inv(1.0 - np.asarray(p, dtype=float))))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        xs = np.maximum(x, 0)
        z = self.R1.value(xs) + self.R2.value(np.maximum(t, 0))
        val = -np.asarray(self.W_bar_d1(z)) * self.R1.d1(xs)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        xs = np.maximum(x, 0)
        r = self.R1.value(xs)
        z = r + self.R2.value(np.maximum(t, 0))
        val = (np.asarray(self.W_bar_d1(z)) - np.asarray(self.W_bar_d1(r))) * self.R1.d1(xs)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        ys = np.maximum(y, 0)
        z = self.R1.value(np.maximum(s, 0)) + self.R2.value(ys)
        val = -np.asarray(self.W_bar_d1(z)) * self.R2.d1(ys)
        return _out(np.where(y >= 0, val, 0.0))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        ys = np.maximum(y, 0)
        r = self.R2.value(ys)
        z = self.R1.value(np.maximum(s, 0)) + r
        val = (np.asarray(self.W_bar_d1(z)) - np.asarray(self.W_bar_d1(r))) * self.R2.d1(ys)
        return _out(np.where(y >= 0, val, 0.0))


def make_tte(W_bar, W_bar_d1, W_bar_d2, R1: AccumulatedHazard, R2: AccumulatedHazard,
             omega: float = np.inf, **kwargs) -> TTEModel:
    return TTEModel(W_bar, W_bar_d1, W_bar_d2, R1, R2, omega, **kwargs)


def make_lomax_tte(r: float = 1.0, alpha: float = 1.0, beta: float = 1.0) -> TTEModel:
    """Bivariate Lomax: ``W(x) = (1 + x)^-r`` with linear hazards."""
    if not r > 0:
        raise ValueError("r must be positive")
    model = TTEModel(lambda z: (1 + z) ** -r,
                     lambda z: -r * (1 + z) ** (-r - 1),
                     lambda z: r * (r + 1) * (1 + z) ** (-r - 2),
                     linear_hazard(alpha), linear_hazard(beta),
                     W_bar_inv=lambda w: w ** (-1.0 / r) - 1.0,
                     exchangeable=alpha == beta)
    model.name = "lomax-tte"
    model.params = dict(r=r, alpha=alpha, beta=beta)
    return model


def make_truncated_tte(omega: float = 1.0, alpha: float = 1.0, beta: float = 1.0,
                       R1: AccumulatedHazard | None = None,
                       R2: AccumulatedHazard | None = None) -> TTEModel:
    """Truncated TTE with ``W(x) = (x/omega - 1)^2`` on ``[0, omega]``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    exchangeable = (R1 is R2) if R1 is not None else (R2 is None and alpha == beta)
    R1 = R1 or linear_hazard(alpha)
    R2 = R2 or linear_hazard(beta)
    model = TTEModel(lambda z: (z / omega - 1) ** 2,
                     lambda z: 2 * (z / omega - 1) / omega,
                     lambda z: np.full(np.shape(z), 2 / omega ** 2),
                     R1, R2, omega=omega,
                     W_bar_inv=lambda w: omega * (1 - np.sqrt(w)),
                     exchangeable=exchangeable)
    model.name = "truncated-tte"
    model.params = dict(omega=omega, alpha=alpha, beta=beta)
    return model


# ---------------------------------------------------------------------------
# Freund bivariate exponential

class FreundModel(BivariateLifetimeModel):
    """Freund's model: failure rates ``a`` (X) and ``b`` (Y) while both work,
    switching to ``a_prime`` for X once Y has failed and ``b_prime`` for Y
    once X has failed.  Has the bivariate lack-of-memory property.
    """

    name = "freund"
    diagonal_break = True

    def __init__(self, a: float = 1.0, b: float = 2.0, a_prime: float = 2.5, b_prime: float = 1.5):
        if min(a, b, a_prime, b_prime) <= 0:
            raise ValueError("Freund rates must be positive")
        self.a, self.b, self.ap, self.bp = map(float, (a, b, a_prime, b_prime))
        self.g = self.a + self.b
        if self.g == self.ap or self.g == self.bp:
            raise ValueError("a + b must differ from a_prime and b_prime")
        self.exchangeable = a == b and a_prime == b_prime
        super().__init__(Support("rectangle"))

    def pdf(self, x, y):
        x, y = _arr(x, y)
        a, b, ap, bp, g = self.a, self.b, self.ap, self.bp, self.g
        with np.errstate(over="ignore"):
            lower = a * bp * np.exp(-bp * y - (g - bp) * x)   # x < y
            upper = b * ap * np.exp(-ap * x - (g - ap) * y)   # y < x
        val = np.where(x < y, lower, upper)
        return _out(np.where((x >= 0) & (y >= 0), val, 0.0))

    def survival(self, s, t):
        s, t = _arr(s, t)
        s, t = np.maximum(s, 0), np.maximum(t, 0)
        a, b, ap, bp, g = self.a, self.b, self.ap, self.bp, self.g
        first = (a * np.exp(-(g - bp) * s - bp * t) + (b - bp) * np.exp(-g * t)) / (g - bp)
        second = (b * np.exp(-(g - ap) * t - ap * s) + (a - ap) * np.exp(-g * s)) / (g - ap)
        return _out(np.clip(np.where(s <= t, first, second), 0.0, 1.0))

    def marginal_sf_x(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0)
        return _out((self.b * np.exp(-self.ap * x) + (self.a - self.ap) * np.exp(-self.g * x))
                    / (self.g - self.ap))

    def marginal_sf_y(self, y):
        y = np.maximum(np.asarray(y, dtype=float), 0)
        return _out((self.a * np.exp(-self.bp * y) + (self.b - self.bp) * np.exp(-self.g * y))
                    / (self.g - self.bp))

    def marginal_cdf_x(self, x):
        return _out(1.0 - np.asarray(self.marginal_sf_x(x)))

    def marginal_cdf_y(self, y):
        return _out(1.0 - np.asarray(self.marginal_sf_y(y)))

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.maximum(x, 0)
        val = (self.ap * self.b * np.exp(-self.ap * xs)
               + self.g * (self.a - self.ap) * np.exp(-self.g * xs)) / (self.g - self.ap)
        return _out(np.where(x >= 0, val, 0.0))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        ys = np.maximum(y, 0)
        val = (self.bp * self.a * np.exp(-self.bp * ys)
               + self.g * (self.b - self.bp) * np.exp(-self.g * ys)) / (self.g - self.bp)
        return _out(np.where(y >= 0, val, 0.0))

    @staticmethod
    def _below(x, t, a, b, ap, bp, g):
        # int_0^t f(x, v) dv for the orientation where "x" has rates (a, ap)
        xs = np.maximum(x, 0)
        t = np.maximum(t, 0)
        m = np.minimum(xs, t)
        # v < x part: density b*ap*exp(-ap x - (g-ap) v)
        part1 = b * ap * np.exp(-ap * xs) * -np.expm1(-(g - ap) * m) / (g - ap)
        # x < v < t part: density a*bp*exp(-bp v - (g-bp) x)
        part2 = a * np.exp(-g * xs) * -np.expm1(-bp * np.maximum(t - xs, 0.0))
        return part1 + part2

    @staticmethod
    def _above(x, t, a, b, ap, bp, g):
        # int_t^inf f(x, v) dv
        xs = np.maximum(x, 0)
        t = np.maximum(t, 0)
        below_diag = a * np.exp(-(g - bp) * xs - bp * t)            # t >= x
        across = (b * ap * np.exp(-ap * xs) * (np.exp(-(g - ap) * t) - np.exp(-(g - ap) * xs))
                  / (g - ap) + a * np.exp(-g * xs))                  # t < x
        return np.where(t >= xs, below_diag, across)

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        val = self._below(x, t, self.a, self.b, self.ap, self.bp, self.g)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        val = self._above(x, t, self.a, self.b, self.ap, self.bp, self.g)
        return _out(np.where(x >= 0, val, 0.0))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        val = self._below(y, s, self.b, self.a, self.bp, self.ap, self.g)
        return _out(np.where(y >= 0, val, 0.0))

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        val = self._above(y, s, self.b, self.a, self.bp, self.ap, self.g)
        return _out(np.where(y >= 0, val, 0.0))


def make_freund(a: float = 1.0, b: float = 2.0, a_prime: float = 2.5,
                b_prime: float = 1.5) -> FreundModel:
    return FreundModel(a, b, a_prime, b_prime)


# ---------------------------------------------------------------------------
# copula construction

class CopulaModel(BivariateLifetimeModel):
    """``F(x, y) = C(F_X(x), F_Y(y))`` for continuous marginals."""

    name = "copula"

    def __init__(self, copula: Copula, marginal_x, marginal_y):
        self.copula = copula
        self.mx, self.my = marginal_x, marginal_y
        x_max = float(marginal_x.support()[1])
        y_max = float(marginal_y.support()[1])
        self.exchangeable = (marginal_x.dist.name == marginal_y.dist.name
                             and marginal_x.args == marginal_y.args
                             and marginal_x.kwds == marginal_y.kwds)
        super().__init__(Support("rectangle", x_max, y_max))

    def pdf(self, x, y):
        x, y = _arr(x, y)
        fx = self.mx.pdf(x)
        fy = self.my.pdf(y)
        pos = (fx > 0) & (fy > 0)
        c = self.copula.pdf(np.where(pos, self.mx.cdf(x), 0.5), np.where(pos, self.my.cdf(y), 0.5))
        return _out(np.where(pos, fx * fy * c, 0.0))

    def cdf(self, s, t):
        s, t = _arr(s, t)
        return _out(self.copula.cdf(self.mx.cdf(s), self.my.cdf(t)))

    def survival(self, s, t):
        s, t = _arr(s, t)
        val = (self.mx.sf(s) + self.my.sf(t) - 1.0
               + self.copula.cdf(self.mx.cdf(s), self.my.cdf(t)))
        return _out(np.clip(val, 0.0, 1.0))

    def marginal_pdf_x(self, x):
        return _out(self.mx.pdf(x))

    def marginal_pdf_y(self, y):
        return _out(self.my.pdf(y))

    def marginal_cdf_x(self, x):
        return _out(self.mx.cdf(x))

    def marginal_cdf_y(self, y):
        return _out(self.my.cdf(y))

    def marginal_sf_x(self, x):
        return _out(self.mx.sf(x))

    def marginal_sf_y(self, y):
        return _out(self.my.sf(y))

    def marginal_quantile_x(self, p):
        return _out(self.mx.ppf(p))

    def marginal_quantile_y(self, p):
        return _out(self.my.ppf(p))

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        return _out(self.mx.pdf(x) * self.copula.h_u(self.mx.cdf(x), self.my.cdf(t)))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        return _out(self.mx.pdf(x) * (1.0 - self.copula.h_u(self.mx.cdf(x), self.my.cdf(t))))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        return _out(self.my.pdf(y) * self.copula.h_v(self.mx.cdf(s), self.my.cdf(y)))

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        return _out(self.my.pdf(y) * (1.0 - self.copula.h_v(self.mx.cdf(s), self.my.cdf(y))))


def make_from_copula(copula: Copula, marginal_x, marginal_y) -> CopulaModel:
    return CopulaModel(copula, marginal_x, marginal_y)


def make_independent(marginal_x=None, marginal_y=None) -> CopulaModel:
    """Independent components; unit exponentials by default."""
    model = CopulaModel(IndependenceCopula(), marginal_x or marginal("exponential"),
                        marginal_y or marginal("exponential"))
    model.name = "independent"
    return model


# ---------------------------------------------------------------------------
# point reflection

class ReflectedModel(BivariateLifetimeModel):
    """``(U, V) = (2 x0 - X, 2 y0 - Y)`` for a base model supported in
    ``[0, 2 x0] x [0, 2 y0]``, so ``F_UV(x, y) = F-bar(2 x0 - x, 2 y0 - y)``.
    """

    def __init__(self, base: BivariateLifetimeModel, x0: float, y0: float):
        self.base, self.x0, self.y0 = base, float(x0), float(y0)
        self.name = f"reflected-{base.name}"
        self.exchangeable = base.exchangeable and x0 == y0
        X, Y = 2 * self.x0, 2 * self.y0
        super().__init__(Support("curvilinear", X, Y,
                                 y_upper=lambda x: Y - base.support.lower(X - np.asarray(x)),
                                 y_lower=lambda x: Y - base.support.upper(X - np.asarray(x))))

    def pdf(self, x, y):
        x, y = _arr(x, y)
        X, Y = 2 * self.x0, 2 * self.y0
        inside = (x >= 0) & (y >= 0) & (x <= X) & (y <= Y)
        return _out(np.where(inside, self.base.pdf(X - x, Y - y), 0.0))

    def cdf(self, s, t):
        s, t = _arr(s, t)
        return self.base.survival(2 * self.x0 - np.maximum(s, 0), 2 * self.y0 - np.maximum(t, 0))

    def marginal_cdf_x(self, x):
        return self.base.marginal_sf_x(2 * self.x0 - np.maximum(np.asarray(x, dtype=float), 0))

    def marginal_cdf_y(self, y):
        return self.base.marginal_sf_y(2 * self.y0 - np.maximum(np.asarray(y, dtype=float), 0))

    def marginal_pdf_x(self, x):
        x = np.asarray(x, dtype=float)
        return _out(np.where(x >= 0, self.base.marginal_pdf_x(2 * self.x0 - x), 0.0))

    def marginal_pdf_y(self, y):
        y = np.asarray(y, dtype=float)
        return _out(np.where(y >= 0, self.base.marginal_pdf_y(2 * self.y0 - y), 0.0))

    def pdf_x_below(self, x, t):
        x, t = _arr(x, t)
        return self.base.pdf_x_above(2 * self.x0 - x, 2 * self.y0 - np.maximum(t, 0))

    def pdf_x_above(self, x, t):
        x, t = _arr(x, t)
        return self.base.pdf_x_below(2 * self.x0 - x, 2 * self.y0 - np.maximum(t, 0))

    def pdf_y_below(self, s, y):
        s, y = _arr(s, y)
        return self.base.pdf_y_above(2 * self.x0 - np.maximum(s, 0), 2 * self.y0 - y)

    def pdf_y_above(self, s, y):
        s, y = _arr(s, y)
        return self.base.pdf_y_below(2 * self.x0 - np.maximum(s, 0), 2 * self.y0 - y)


def reflect(model: BivariateLifetimeModel, x0: float, y0: float) -> ReflectedModel:
    return ReflectedModel(model, x0, y0)
