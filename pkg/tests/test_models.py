from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate as sci
from scipy import special as sp

from conftest import builtin_models
from lifeinfo import (REGION_KINDS, clayton_special, independence, linear_hazard, lomax_copula,
                      make_freund, make_from_copula, make_gumbel_type, make_independent,
                      make_linear_unit_square, make_lomax_tte, make_reflected_triangle, make_tte,
                      make_truncated_tte, make_uniform_triangle, marginal, reflect, weibull_hazard)
from lifeinfo.errors import InvalidTTE
from lifeinfo.quadrature import integrate_2d
from lifeinfo.regions import ConditioningRegion, region_domain

H = 1e-3


def _interior_points(model, rng, n=20):
    """Random points whose finite-difference stencil stays inside one smooth piece."""
    sup = model.support
    xb = sup.x_max if np.isfinite(sup.x_max) else 3.0
    yb = sup.y_max if np.isfinite(sup.y_max) else 3.0
    pts = []
    while len(pts) < n:
        x, y = rng.uniform(0, xb), rng.uniform(0, yb)
        corners = [(x + a, y + b) for a in (-3 * H, 3 * H) for b in (-3 * H, 3 * H)]
        if not all(sup.contains(cx, cy) and cx > 0 and cy > 0 for cx, cy in corners):
            continue
        if model.diagonal_break and abs(x - y) < 10 * H:
            continue
        if float(model.pdf(x, y)) <= 0:
            continue
        pts.append((x, y))
    return np.array(pts)


@pytest.mark.parametrize("name", list(builtin_models()))
def test_mixed_partial_of_cdf_is_pdf(name, models, rng):
    m = models[name]
    pts = _interior_points(m, rng)
    x, y = pts[:, 0], pts[:, 1]
    F = lambda a, b: np.asarray(m.cdf(a, b), dtype=float)
    mixed = lambda h: (F(x + h, y + h) - F(x + h, y - h) - F(x - h, y + h) + F(x - h, y - h)) / (4 * h * h)
    fd = (4 * mixed(H / 2) - mixed(H)) / 3   # Richardson: O(h^4)
    pdf = np.asarray(m.pdf(x, y), dtype=float)
    assert np.max(np.abs(fd - pdf) / pdf) <= 1e-4


@pytest.mark.parametrize("name", list(builtin_models()))
def test_four_region_identity(name, models, rng):
    m = models[name]
    qs = rng.uniform(0.01, 0.99, size=(50, 2))
    for p, q in qs:
        s = float(m.marginal_quantile_x(p))
        t = float(m.marginal_quantile_y(q))
        total = sum(m.region_probability(k, s, t) for k in REGION_KINDS)
        assert abs(total - 1.0) <= 1e-8


@pytest.mark.parametrize("name", list(builtin_models()))
def test_normalization(name, models):
    m = models[name]
    dom = region_domain(m, ConditioningRegion("past_past", np.inf, np.inf))
    res = integrate_2d(m.pdf, dom.ysection(), x_points=dom.x_points, y_points=dom.y_points_fn)
    assert res.value == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("name", list(builtin_models()))
def test_quantiles_invert_cdfs(name, models):
    m = models[name]
    p = np.linspace(0.02, 0.98, 13)
    assert np.allclose(m.marginal_cdf_x(m.marginal_quantile_x(p)), p, atol=1e-10)
    assert np.allclose(m.marginal_cdf_y(m.marginal_quantile_y(p)), p, atol=1e-10)


@pytest.mark.parametrize("name", list(builtin_models()))
def test_partial_integrals_against_scipy(name, models):
    m = models[name]
    s = float(m.marginal_quantile_x(0.4))
    t = float(m.marginal_quantile_y(0.6))
    x = float(m.marginal_quantile_x(0.3))
    y = float(m.marginal_quantile_y(0.7))
    pts_y = [x] if m.diagonal_break else None
    pts_x = [y] if m.diagonal_break else None
    ymax, xmax = m.support.y_max, m.support.x_max
    f = lambda a, b: float(m.pdf(a, b))
    quad = lambda g, lo, hi, pts: sci.quad(g, lo, hi, points=pts if np.isfinite(hi) else None,
                                           epsabs=1e-12, epsrel=1e-11, limit=200)[0]
    assert float(m.pdf_x_below(x, t)) == pytest.approx(quad(lambda v: f(x, v), 0, t, pts_y), abs=1e-8)
    assert float(m.pdf_y_below(s, y)) == pytest.approx(quad(lambda u: f(u, y), 0, s, pts_x), abs=1e-8)
    above_y = quad(lambda v: f(x, v), t, ymax, pts_y if (pts_y and pts_y[0] > t) else None)
    above_x = quad(lambda u: f(u, y), s, xmax, pts_x if (pts_x and pts_x[0] > s) else None)
    assert float(m.pdf_x_above(x, t)) == pytest.approx(above_y, abs=1e-8)
    assert float(m.pdf_y_above(s, y)) == pytest.approx(above_x, abs=1e-8)


@pytest.mark.parametrize("name", list(builtin_models()))
def test_pdf_vanishes_outside_support(name, models, rng):
    m = models[name]
    x = rng.uniform(-1, 4, 400)
    y = rng.uniform(-1, 4, 400)
    out = ~m.support.contains(x, y)
    assert np.all(np.asarray(m.pdf(x[out], y[out])) == 0)
    assert np.all(np.asarray(m.pdf(x[~out], y[~out])) >= 0)


def test_linear_examples():
    m = make_linear_unit_square()
    assert m.cdf(1.0, 1.0) == pytest.approx(1.0)
    assert m.pdf(0.5, 0.5) == pytest.approx(1.0)
    assert m.cdf(0.5, 0.5) == pytest.approx(0.125)


def test_triangle_examples():
    assert make_uniform_triangle(1, 1).survival(0.0, 0.0) == pytest.approx(1.0)
    assert make_uniform_triangle(1, 1).pdf(0.25, 0.25) == pytest.approx(2.0)
    assert make_uniform_triangle(2, 3).survival(0.25, 0.1) == pytest.approx(0.04)


def test_reflected_triangle_is_reflection():
    base = make_uniform_triangle(1, 1)
    refl = reflect(base, 0.5, 0.5)
    rt = make_reflected_triangle(1, 1)
    X, Y = np.random.default_rng(1).uniform(0, 1, (2, 200))
    X, Y = X[np.abs(X + Y - 1) > 1e-9], Y[np.abs(X + Y - 1) > 1e-9]
    assert np.allclose(rt.pdf(X, Y), refl.pdf(X, Y))
    assert np.allclose(rt.cdf(X, Y), refl.cdf(X, Y), atol=1e-14)


def test_gumbel_examples():
    m = make_gumbel_type(1.0)
    assert m.survival(0.0, 0.0) == pytest.approx(1.0)
    # e^-1 / E1(1) with an independent E1
    assert m.pdf(0.0, 0.0) == pytest.approx(math.exp(-1) / sp.exp1(1.0), rel=1e-12)
    assert m.pdf(0.0, 0.0) == pytest.approx(1.676875, abs=1e-6)
    theta = 0.7
    m = make_gumbel_type(theta)
    x, y = 0.4, 1.3
    z = (1 + theta * x) * (1 + theta * y) / theta
    assert m.survival(x, y) == pytest.approx(sp.exp1(z) / sp.exp1(1 / theta), rel=1e-12)


def test_tte_examples():
    lomax = make_lomax_tte(1.0, 1.0, 1.0)
    assert lomax.survival(0.0, 0.0) == pytest.approx(1.0)
    assert lomax.survival(1.0, 1.0) == pytest.approx(1 / 3)
    trunc = make_truncated_tte(2.0, 1.0, 1.0)
    assert trunc.survival(0.4, 0.6) == pytest.approx(0.25)
    assert trunc.exchangeable and not make_truncated_tte(1.0, 1.0, 2.0).exchangeable


def test_tte_density_identity():
    # f(s, t) = W''[R1(s) + R2(t)] R1'(s) R2'(t)
    m = make_tte(lambda z: np.exp(-z), lambda z: -np.exp(-z), lambda z: np.exp(-z),
                 weibull_hazard(1.0, 2.0), linear_hazard(0.5))
    s, t = 0.7, 1.1
    assert m.pdf(s, t) == pytest.approx(math.exp(-(s * s + 0.5 * t)) * 2 * s * 0.5)


def test_tte_validation():
    with pytest.raises(InvalidTTE):
        make_tte(lambda z: np.exp(-z * z), lambda z: -2 * z * np.exp(-z * z),
                 lambda z: (4 * z * z - 2) * np.exp(-z * z), linear_hazard(1.0), linear_hazard(1.0))
    with pytest.raises(InvalidTTE):   # W'(omega) != 0
        make_tte(lambda z: 1 - z, lambda z: -np.ones_like(z), lambda z: np.zeros_like(z),
                 linear_hazard(1.0), linear_hazard(1.0), omega=1.0)


def test_freund_examples(models):
    m = make_freund(1.0, 2.0, 2.5, 1.5)
    assert m.survival(0.0, 0.0) == pytest.approx(1.0)
    rng = np.random.default_rng(3)
    x, y, t = rng.uniform(0, 2, (3, 30))
    assert np.max(np.abs(m.survival(x + t, y + t) - m.survival(x, y) * m.survival(t, t))) <= 1e-10
    with pytest.raises(ValueError):
        make_freund(1.0, 1.0, 2.0, 1.0)


def test_copula_models():
    ind = make_independent(marginal("exponential", rate=2.0), marginal("weibull", shape=1.5))
    x, y = 0.3, 0.8
    assert ind.pdf(x, y) == pytest.approx(ind.mx.pdf(x) * ind.my.pdf(y))
    cl = make_from_copula(clayton_special(), marginal("uniform"), marginal("uniform"))
    assert cl.cdf(0.5, 0.5) == pytest.approx(1 / 3)
    assert cl.cdf(1.0, 1.0) == pytest.approx(1.0)


def test_copula_axioms(rng):
    u = rng.uniform(0.01, 0.99, 50)
    for C in (clayton_special(), independence(), lomax_copula(2.0), clayton_special().survival()):
        assert np.allclose(C.cdf(u, 0.0), 0.0, atol=1e-14)
        assert np.allclose(C.cdf(0.0, u), 0.0, atol=1e-14)
        assert np.allclose(C.cdf(u, 1.0), u, atol=1e-14)
        assert np.allclose(C.cdf(1.0, u), u, atol=1e-14)
        total = integrate_2d(C.pdf, __import__("lifeinfo").quadrature.Rectangle(0, 1, 0, 1)).value
        assert total == pytest.approx(1.0, abs=1e-6)


def test_clayton_density_matches_finite_differences(rng):
    C = clayton_special()
    u, v = rng.uniform(0.05, 0.95, (2, 20))
    h = 1e-4
    fd = (C.cdf(u + h, v + h) - C.cdf(u + h, v - h) - C.cdf(u - h, v + h) + C.cdf(u - h, v - h)) / (4 * h * h)
    assert np.allclose(C.pdf(u, v), fd, rtol=1e-5)
    assert np.allclose(C.pdf(u, v), 2 * u * v / (u + v - u * v) ** 3)
    assert C.cdf(0.5, 0.5) == pytest.approx(1 / 3)


def test_survival_copula_relations(rng):
    C = clayton_special()
    S = C.survival()
    u, v = rng.uniform(0.01, 0.99, (2, 100))
    assert np.max(np.abs(C.pdf(u, v) - S.pdf(1 - u, 1 - v))) <= 1e-8
    # the Lomax survival function factors through its survival copula
    m = make_lomax_tte(2.0, 1.0, 1.5)
    x, y = rng.uniform(0, 3, (2, 30))
    Ct = lomax_copula(2.0).survival()
    assert np.allclose(m.survival(x, y), Ct.cdf(m.marginal_sf_x(x), m.marginal_sf_y(y)), rtol=1e-12)
