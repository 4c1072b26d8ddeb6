"""Mutual information between the first and last failure of ``n`` i.i.d.
components, given the first failure occurred by time ``s`` and the last
has not occurred by time ``t > s``.

With ``s`` and ``t`` the ``p``th and ``q``th quantiles of the common
component distribution the measure depends on ``(p, q, n)`` only.  The
closed form is the production path; :func:`os_mi_direct` integrates the
conditional densities and serves as its validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidProbabilityOrder, ZeroRegionProbability
from .lifetime_models import BivariateLifetimeModel, Support, marginal
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_1d, xlogx
from .regions import ConditioningRegion
from .results import MeasureResult

__all__ = ["OrderStatModel", "MinMaxModel", "order_stat_model", "joint_event_prob", "h_n", "k_n",
           "conditional_os_densities", "os_mi_direct", "os_mi_closed_form",
           "os_mi_closed_form_result", "os_mi_surface", "os_mi_symmetric_curve"]


@dataclass(frozen=True)
class OrderStatModel:
    """``n`` i.i.d. lifetimes with continuous, strictly increasing CDF ``F``.

    ``dist`` is any object with ``cdf``, ``pdf``, ``ppf`` and ``support``
    methods, such as a frozen ``scipy.stats`` distribution.
    """

    dist: object
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")

    def F(self, x):
        return self.dist.cdf(x)

    def f(self, x):
        return self.dist.pdf(x)

    def quantile(self, p):
        return self.dist.ppf(p)


def order_stat_model(family: str = "uniform", n: int = 3, **params) -> OrderStatModel:
    """Order-statistics model with a named component family (see :func:`marginal`)."""
    return OrderStatModel(marginal(family, **params), int(n))


def _check_order(p, q, strict=False):
    ok = (0 < p < q < 1) if strict else (0 <= p <= q <= 1)
    if not ok:
        rel = "0 < p < q < 1" if strict else "0 <= p <= q <= 1"
        raise InvalidProbabilityOrder(f"need {rel}, got p={p!r}, q={q!r}")


def joint_event_prob(F_s: float, F_t: float, n: int) -> float:
    """``P(X_1:n <= s, X_n:n > t)`` from ``F(s)`` and ``F(t)``."""
    _check_order(F_s, F_t)
    if n < 2:
        raise ValueError("n must be >= 2")
    return float(1.0 - F_t ** n + (F_t - F_s) ** n - (1.0 - F_s) ** n)


def h_n(p: float, q: float, n: int) -> float:
    """Probability of the conditioning event at quantile levels ``(p, q)``."""
    _check_order(p, q, strict=True)
    return joint_event_prob(p, q, n)


def _d(u, q, n):
    # (1-u)^(n-1) - (q-u)^(n-1) for u < q, without cancellation when q ~ 1
    u = np.asarray(u, dtype=float)
    w = 1.0 - u
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.log1p((q - 1.0) / w)
    return w ** (n - 1) * -np.expm1((n - 1) * ratio)


def _k_n(p, q, n, spec):
    if p == 0:
        return 0.0, 0.0
    res = integrate_1d(lambda u: xlogx(_d(u, q, n)), 0.0, p, spec.tighter())
    return res.value, res.error_estimate


def k_n(p: float, q: float, n: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_0^p D log D du`` with ``D = (1-u)^(n-1) - (q-u)^(n-1)``."""
    _check_order(p, q)
    return _k_n(p, q, n, spec)[0]


def os_mi_closed_form_result(p: float, q: float, n: int,
                             spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """:func:`os_mi_closed_form` with the error of its two 1D integrals."""
    _check_order(p, q, strict=True)
    H = h_n(p, q, n)
    if not H > 0:
        raise ZeroRegionProbability("conditioning event has zero probability")
    k1, e1 = _k_n(p, q, n, spec)
    k2, e2 = _k_n(1 - q, 1 - p, n, spec)
    tail = (n - 2) / n * ((1 - p) ** n * np.log(1 - p) + q ** n * np.log(q)
                         - (q - p) ** n * np.log(q - p))
    value = np.log((n - 1) / n * H) - (n - 2) * (2 * n - 1) / (n * (n - 1)) - n / H * (k1 + k2 + tail)
    return MeasureResult(float(value), float(n / H * (e1 + e2)))


def os_mi_closed_form(p: float, q: float, n: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Distribution-free MI of ``(X_1:n, X_n:n)`` at quantile levels ``(p, q)``."""
    return os_mi_closed_form_result(p, q, n, spec).value


class MinMaxModel(BivariateLifetimeModel):
    """Joint law of ``(X_1:n, X_n:n)``: density ``n(n-1)[F(y)-F(x)]^(n-2) f(x) f(y)``, ``x < y``."""

    name = "os-minmax"

    def __init__(self, osm: OrderStatModel):
        self.osm = osm
        lo, hi = (float(v) for v in osm.dist.support())
        super().__init__(Support("curvilinear", hi, hi, y_lower=lambda x: np.asarray(x, dtype=float),
                                 x_min=max(lo, 0.0)))

    def _Ff(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.osm.F(x), dtype=float), np.asarray(self.osm.f(x), dtype=float)

    def pdf(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        n = self.osm.n
        Fx, fx = self._Ff(x)
        Fy, fy = self._Ff(y)
        val = n * (n - 1) * np.maximum(Fy - Fx, 0.0) ** (n - 2) * fx * fy
        return np.where(y > x, val, 0.0)

    def cdf(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        n = self.osm.n
        Ft = np.asarray(self.osm.F(t), dtype=float)
        Fm = np.asarray(self.osm.F(np.minimum(s, t)), dtype=float)
        return Ft ** n - (Ft - Fm) ** n

    def survival(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        n = self.osm.n
        Fs = np.asarray(self.osm.F(s), dtype=float)
        Fm = np.asarray(self.osm.F(np.maximum(s, t)), dtype=float)
        return (1.0 - Fs) ** n - (Fm - Fs) ** n

    def marginal_cdf_x(self, x):
        return 1.0 - (1.0 - np.asarray(self.osm.F(x), dtype=float)) ** self.osm.n

    def marginal_cdf_y(self, y):
        return np.asarray(self.osm.F(y), dtype=float) ** self.osm.n

    def marginal_pdf_x(self, x):
        F, f = self._Ff(x)
        return self.osm.n * (1.0 - F) ** (self.osm.n - 1) * f

    def marginal_pdf_y(self, y):
        F, f = self._Ff(y)
        return self.osm.n * F ** (self.osm.n - 1) * f

    def marginal_quantile_x(self, p):
        return self.osm.quantile(1.0 - (1.0 - np.asarray(p, dtype=float)) ** (1.0 / self.osm.n))

    def marginal_quantile_y(self, p):
        return self.osm.quantile(np.asarray(p, dtype=float) ** (1.0 / self.osm.n))

    def pdf_x_below(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        Fx, fx = self._Ff(x)
        Ft = np.asarray(self.osm.F(t), dtype=float)
        return self.osm.n * fx * np.maximum(Ft - Fx, 0.0) ** (self.osm.n - 1)

    def pdf_x_above(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        n = self.osm.n
        Fx, fx = self._Ff(x)
        Fm = np.asarray(self.osm.F(np.maximum(t, x)), dtype=float)
        return n * fx * ((1.0 - Fx) ** (n - 1) - (Fm - Fx) ** (n - 1))

    def pdf_y_below(self, s, y):
        s, y = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(y, dtype=float))
        n = self.osm.n
        Fy, fy = self._Ff(y)
        Fm = np.asarray(self.osm.F(np.minimum(s, y)), dtype=float)
        return n * fy * (Fy ** (n - 1) - (Fy - Fm) ** (n - 1))

    def pdf_y_above(self, s, y):
        s, y = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(y, dtype=float))
        Fy, fy = self._Ff(y)
        Fs = np.asarray(self.osm.F(s), dtype=float)
        return self.osm.n * fy * np.maximum(Fy - Fs, 0.0) ** (self.osm.n - 1)

    def region_probability(self, kind, s, t):
        if kind == "past_residual" and s <= t:
            return joint_event_prob(float(self.osm.F(s)), float(self.osm.F(t)), self.osm.n)
        return super().region_probability(kind, s, t)


def conditional_os_densities(osm: OrderStatModel, s: float, t: float):
    """Densities of ``X_1:n``, ``X_n:n`` and the pair given ``X_1:n <= s < t < X_n:n``.

    Returns three callables on ``0 < x < s``, ``y > t`` and their product domain.
    """
    if not 0 < s < t:
        raise ValueError("need 0 < s < t")
    n = osm.n
    Fs, Ft = float(osm.F(s)), float(osm.F(t))
    P = joint_event_prob(Fs, Ft, n)
    if not P > 0:
        raise ZeroRegionProbability("conditioning event has zero probability")

    def f_min(x):
        x = np.asarray(x, dtype=float)
        F = np.asarray(osm.F(x), dtype=float)
        val = n * np.asarray(osm.f(x)) * ((1 - F) ** (n - 1) - np.maximum(Ft - F, 0) ** (n - 1)) / P
        return np.where((x > 0) & (x < s), val, 0.0)

    def f_max(y):
        y = np.asarray(y, dtype=float)
        F = np.asarray(osm.F(y), dtype=float)
        val = n * np.asarray(osm.f(y)) * (F ** (n - 1) - np.maximum(F - Fs, 0) ** (n - 1)) / P
        return np.where(y > t, val, 0.0)

    def f_joint(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        Fx, Fy = np.asarray(osm.F(x), dtype=float), np.asarray(osm.F(y), dtype=float)
        val = n * (n - 1) * (Fy - Fx) ** (n - 2) * np.asarray(osm.f(x)) * np.asarray(osm.f(y)) / P
        return np.where((x > 0) & (x < s) & (y > t), val, 0.0)

    return f_min, f_max, f_joint


def os_mi_direct(osm: OrderStatModel, s: float, t: float,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> MeasureResult:
    """MI of the conditioned pair by 2D quadrature over ``(0, s) x (t, inf)``."""
    from .dynamic_mi import dynamic_mi

    if not 0 < s < t:
        raise ValueError("need 0 < s < t")
    return dynamic_mi(MinMaxModel(osm), ConditioningRegion("past_residual", s, t), spec)


def os_mi_surface(n: int, p_grid, q_grid, spec: QuadratureSpec = DEFAULT_SPEC):
    """Closed-form values on ``p_grid x q_grid``, keeping pairs with ``p < q``.

    Returns a list of ``(p, q, value)`` rows in grid order.
    """
    rows = []
    for p in p_grid:
        for q in q_grid:
            if 0 < p < q < 1:
                rows.append((float(p), float(q), os_mi_closed_form(p, q, n, spec)))
    return rows


def os_mi_symmetric_curve(n: int, p_grid, spec: QuadratureSpec = DEFAULT_SPEC):
    """Values at ``(p, 1 - p)`` for ``p`` in ``(0, 1/2)``."""
    return [(float(p), float(1 - p), os_mi_closed_form(p, 1 - p, n, spec))
            for p in p_grid if 0 < p < 0.5]
