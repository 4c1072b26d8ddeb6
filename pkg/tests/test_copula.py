from __future__ import annotations

import numpy as np
import pytest

from oracles import CLAYTON_MI, lomax_mi
from lifeinfo import (ClaytonCopula, ZeroRegionProbability, clayton_special, independence,
                      lomax_copula, make_from_copula, make_lomax_tte, marginal,
                      marginal_freeness_check, past_mi, past_mi_copula, residual_mi,
                      residual_mi_survival_copula)

GRID = [0.2, 0.4, 0.6, 0.8]


@pytest.mark.parametrize("p", GRID)
@pytest.mark.parametrize("q", GRID)
def test_clayton_special_past_constant(p, q):
    r = past_mi_copula(clayton_special(), p, q)
    assert r.value == pytest.approx(CLAYTON_MI, abs=1e-7)


@pytest.mark.parametrize("p, q", [(0.2, 0.5), (0.7, 0.9), (1.0, 1.0)])
def test_independence_zero(p, q):
    assert abs(past_mi_copula(independence(), p, q).value) <= 1e-10
    if p < 1:
        assert abs(residual_mi_survival_copula(independence(), p, q).value) <= 1e-10


@pytest.mark.parametrize("theta", [0.5, 2.0])
@pytest.mark.parametrize("p, q", [(0.3, 0.6), (0.8, 0.4)])
def test_copula_route_matches_joint_density_route(theta, p, q):
    cop = ClaytonCopula(theta)
    model = make_from_copula(cop, marginal("exponential"), marginal("weibull", shape=2.0))
    s, t = float(model.mx.ppf(p)), float(model.my.ppf(q))
    a = past_mi_copula(cop, p, q)
    b = past_mi(model, s, t)
    assert abs(a.value - b.value) <= 1e-6
    a = residual_mi_survival_copula(cop, p, q)
    b = residual_mi(model, s, t)
    assert abs(a.value - b.value) <= 1e-6


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_lomax_residual_from_copula(r):
    cop = lomax_copula(r)
    for p, q in [(0.1, 0.1), (0.5, 0.3), (0.9, 0.8)]:
        assert residual_mi_survival_copula(cop, p, q).value == pytest.approx(lomax_mi(r), abs=1e-7)
    m = make_lomax_tte(r, 1.0, 2.0)
    s, t = float(m.marginal_quantile_x(0.5)), float(m.marginal_quantile_y(0.3))
    assert residual_mi(m, s, t).value == pytest.approx(
        residual_mi_survival_copula(cop, 0.5, 0.3).value, abs=1e-7)


def test_marginal_freeness():
    pairs = [(marginal("uniform"), marginal("uniform")),
             (marginal("exponential", rate=2.0), marginal("weibull", shape=2.0)),
             (marginal("weibull", shape=0.7), marginal("exponential"))]
    assert marginal_freeness_check(clayton_special(), pairs, 0.4, 0.7) <= 1e-5
    with pytest.raises(ValueError):
        marginal_freeness_check(clayton_special(), pairs[:1], 0.4, 0.7)


def test_survival_copula_relations(rng):
    c = ClaytonCopula(1.5)
    s = c.survival()
    u, v = rng.uniform(0.05, 0.95, (2, 20))
    assert np.allclose(s.pdf(u, v), c.pdf(1 - u, 1 - v), rtol=1e-14)
    assert np.allclose(s.cdf(u, v), u + v - 1 + c.cdf(1 - u, 1 - v), atol=1e-15)
    assert s.survival() is c


def test_invalid_arguments():
    with pytest.raises(ValueError):
        past_mi_copula(clayton_special(), 0.0, 0.5)
    with pytest.raises(ValueError):
        past_mi_copula(clayton_special(), 0.5, 1.5)
    with pytest.raises(ZeroRegionProbability):
        past_mi_copula(clayton_special(), 1e-13, 1e-13)
