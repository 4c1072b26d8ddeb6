"""Exponential integral and generalized-inverse helpers."""

from __future__ import annotations

import numpy as np

from .errors import SpecialFunctionDomain

_EULER_GAMMA = 0.57721566490153286060651209008240243


def _e1_series(z):
    # E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
    term = -z
    total = term.copy()
    for k in range(2, 60):
        term = term * (-z) / k
        total += term / k
    return -_EULER_GAMMA - np.log(z) + (-total)


def _e1_contfrac(z):
    # modified Lentz on the even form E1(z) = e^{-z} / (z+1 - 1/(z+3 - 4/(z+5 - ...)))
    tiny = 1e-300
    b = z + 1.0
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 500):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return h * np.exp(-z)


def exp1(z):
    """Exponential integral ``E1(z) = Gamma(0, z)`` for ``z > 0``.

    Power series below 1, continued fraction from 1 upward.
    """
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise SpecialFunctionDomain("Gamma(0, z) requires z > 0")
    flat = np.atleast_1d(z).astype(float)
    out = np.empty_like(flat)
    small = flat < 1.0
    if np.any(small):
        out[small] = _e1_series(flat[small])
    if np.any(~small):
        out[~small] = _e1_contfrac(flat[~small])
    return out.reshape(z.shape) if z.ndim else float(out[0])


def upper_gamma0(z):
    """Upper incomplete gamma ``Gamma(0, z)``; alias of :func:`exp1`."""
    return exp1(z)


def bisect_increasing(func, target, lo, hi, xtol: float = 1e-12, max_iter: int = 200):
    """Vectorized bisection for ``func(x) = target`` on a nondecreasing ``func``.

    ``hi`` may be ``inf``; it is then replaced by a doubling bracket.  Returns
    the smallest ``x`` with ``func(x) >= target`` to within ``xtol`` (absolute
    or relative to ``|x|``), which is the generalized inverse.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    open_hi = ~np.isfinite(hi)
    if np.any(open_hi):
        step = np.maximum(1.0, np.abs(lo[open_hi]))
        guess = lo[open_hi] + step
        for _ in range(2100):
            low = func(guess) < target[open_hi]
            if not np.any(low):
                break
            step = np.where(low, 2.0 * step, step)
            guess = np.where(low, lo[open_hi] + step, guess)
        hi[open_hi] = guess
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = func(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= xtol * np.maximum(1.0, np.abs(hi))):
            break
    out = 0.5 * (lo + hi)
    return out if out.ndim else float(out)
