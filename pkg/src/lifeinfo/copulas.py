"""Bivariate copulas: independence, Clayton, and the 180-degree survival flip."""

from __future__ import annotations

import numpy as np

from .quadrature import DEFAULT_SPEC, integrate_batch

__all__ = ["Copula", "IndependenceCopula", "ClaytonCopula", "SurvivalCopula",
           "clayton_special", "independence", "lomax_copula"]


class Copula:
    """Base copula.

    Subclasses supply ``cdf``; ``pdf`` and the partial derivatives
    ``h_u = dC/du`` and ``h_v = dC/dv`` fall back to numerical schemes when
    not overridden (mixed finite differences with Richardson extrapolation
    for the density, quadrature of the density for the partials).
    """

    name = "copula"

    def cdf(self, u, v):
        raise NotImplementedError

    def pdf(self, u, v, h: float = 1e-4):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))

        def mixed(step):
            return (self.cdf(u + step, v + step) - self.cdf(u + step, v - step)
                    - self.cdf(u - step, v + step) + self.cdf(u - step, v - step)) / (4 * step * step)
        return (4.0 * mixed(h / 2) - mixed(h)) / 3.0

    def h_u(self, u, v):
        """``dC/du(u, v) = int_0^v c(u, w) dw``."""
        u, v = np.broadcast_arrays(np.atleast_1d(np.asarray(u, float)),
                                   np.atleast_1d(np.asarray(v, float)))
        uu, inv = np.unique(np.stack([u.ravel(), v.ravel()]), axis=1, return_inverse=True)
        vals, *_ = integrate_batch(lambda o, w: self.pdf(uu[0][o], w),
                                   np.zeros(uu.shape[1]), uu[1], DEFAULT_SPEC.tighter())
        return vals[np.ravel(inv)].reshape(u.shape)

    def h_v(self, u, v):
        """``dC/dv(u, v) = int_0^u c(z, v) dz``."""
        u, v = np.broadcast_arrays(np.atleast_1d(np.asarray(u, float)),
                                   np.atleast_1d(np.asarray(v, float)))
        uu, inv = np.unique(np.stack([u.ravel(), v.ravel()]), axis=1, return_inverse=True)
        vals, *_ = integrate_batch(lambda o, z: self.pdf(z, uu[1][o]),
                                   np.zeros(uu.shape[1]), uu[0], DEFAULT_SPEC.tighter())
        return vals[np.ravel(inv)].reshape(u.shape)

    def survival(self) -> "Copula":
        """The survival copula ``u + v - 1 + C(1-u, 1-v)``."""
        return SurvivalCopula(self)

    def __repr__(self):
        return f"{type(self).__name__}()"


class IndependenceCopula(Copula):
    name = "independence"

    def cdf(self, u, v):
        return np.asarray(u, float) * np.asarray(v, float)

    def pdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return np.ones(u.shape)

    def h_u(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return v.copy()

    def h_v(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return u.copy()

    def survival(self):
        return self


class ClaytonCopula(Copula):
    """Clayton copula ``(u^-theta + v^-theta - 1)^(-1/theta)``, ``theta > 0``.

    ``theta = 1`` gives ``uv / (u + v - uv)``.
    """

    name = "clayton"

    def __init__(self, theta: float = 1.0):
        if not theta > 0:
            raise ValueError("Clayton theta must be positive")
        self.theta = float(theta)

    def _s(self, u, v):
        th = self.theta
        with np.errstate(divide="ignore", over="ignore"):
            return u ** -th + v ** -th - 1.0

    def cdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        if self.theta == 1.0:
            with np.errstate(invalid="ignore", divide="ignore"):
                out = u * v / (u + v - u * v)
        else:
            with np.errstate(divide="ignore"):
                out = self._s(u, v) ** (-1.0 / self.theta)
        return np.where((u <= 0) | (v <= 0), 0.0, out)

    def pdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        th = self.theta
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            if th == 1.0:
                out = 2.0 * u * v / (u + v - u * v) ** 3
            else:
                out = (1.0 + th) * (u * v) ** (-th - 1.0) * self._s(u, v) ** (-1.0 / th - 2.0)
        return np.where((u <= 0) | (v <= 0), 0.0, out)

    def h_u(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        th = self.theta
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            if th == 1.0:
                out = v * v / (u + v - u * v) ** 2
            else:
                out = u ** (-th - 1.0) * self._s(u, v) ** (-1.0 / th - 1.0)
        out = np.where(v <= 0, 0.0, out)
        return np.where((u <= 0) & (v > 0), 1.0, out)

    def h_v(self, u, v):
        return self.h_u(v, u)

    def __repr__(self):
        return f"ClaytonCopula(theta={self.theta!r})"


class SurvivalCopula(Copula):
    """Copula of ``(1-U, 1-V)`` where ``(U, V)`` follows ``base``."""

    name = "survival"

    def __init__(self, base: Copula):
        self.base = base
        self.name = f"survival-{base.name}"

    def cdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return u + v - 1.0 + self.base.cdf(1.0 - u, 1.0 - v)

    def pdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return self.base.pdf(1.0 - u, 1.0 - v)

    def h_u(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return 1.0 - self.base.h_u(1.0 - u, 1.0 - v)

    def h_v(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return 1.0 - self.base.h_v(1.0 - u, 1.0 - v)

    def survival(self):
        return self.base

    def __repr__(self):
        return f"SurvivalCopula({self.base!r})"


def clayton_special() -> ClaytonCopula:
    """The copula ``C(u, v) = uv / (u + v - uv)`` (Clayton with theta = 1)."""
    return ClaytonCopula(1.0)


def independence() -> IndependenceCopula:
    return IndependenceCopula()


def lomax_copula(r: float = 1.0) -> SurvivalCopula:
    """Copula of the bivariate Lomax law ``(1 + alpha x + beta y)^-r``.

    Its survival copula is Clayton with ``theta = 1/r``.
    """
    return ClaytonCopula(1.0 / r).survival()
