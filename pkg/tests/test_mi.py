from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from scipy import integrate as sci

from conftest import builtin_models
from oracles import CLAYTON_MI, LINEAR_DIAGONAL, TRIANGLE_MI, linear_past_mi, lomax_mi
from lifeinfo import (ConditioningRegion, blm_constancy_check, clayton_special, dynamic_mi,
                      independence, local_dependence_ratio, make_freund, make_from_copula,
                      make_gumbel_type, make_independent, make_linear_unit_square, make_lomax_tte,
                      make_reflected_triangle, make_truncated_tte, make_uniform_triangle, marginal,
                      mc_mutual_information, mi_routes, mixed_mi, mutual_information_static, past_mi,
                      past_mi_bound, reflect, residual_mi, residual_mi_bound, residual_mi_tte,
                      symmetry_transfer_check)
from lifeinfo.errors import (InvalidTTE, NotBLM, NotSymmetricPair, ZeroDenominator,
                             ZeroRegionProbability)

LIN = make_linear_unit_square()


@pytest.mark.parametrize("s", [0.2, 0.5, 0.9])
def test_linear_diagonal(s):
    assert past_mi(LIN, s, s).value == pytest.approx(LINEAR_DIAGONAL, abs=1e-9)


@pytest.mark.parametrize("s, t", [(0.5, 0.8), (0.2, 0.9), (0.7, 0.3), (0.05, 0.6)])
def test_linear_off_diagonal_closed_form(s, t):
    assert past_mi(LIN, s, t).value == pytest.approx(linear_past_mi(s, t), abs=1e-9)


def test_linear_monotone_in_s():
    for t in (0.3, 0.8):
        vals = [past_mi(LIN, s, t) for s in np.linspace(0.02, t, 15)]
        v = np.array([r.value for r in vals])
        e = np.array([r.numerical_error for r in vals])
        assert np.all(np.diff(v) >= -(e[1:] + e[:-1]))


@pytest.mark.parametrize("s, t", [(0.0, 0.0), (0.1, 0.3), (0.4, 0.2), (0.45, 0.45)])
@pytest.mark.parametrize("ab", [(1, 1), (2, 3)])
def test_triangle_residual_constant(s, t, ab):
    m = make_uniform_triangle(*ab)
    if 1 - ab[0] * s - ab[1] * t <= 0:
        with pytest.raises(ZeroRegionProbability):
            residual_mi(m, s, t)
        return
    assert residual_mi(m, s, t).value == pytest.approx(TRIANGLE_MI, abs=1e-9)


@pytest.mark.parametrize("r", [1.0, 2.0, 5.0])
def test_lomax_constant_both_routes(r):
    m = make_lomax_tte(r, 1.0, 2.0)
    for s, t in [(0.0, 0.0), (0.5, 0.7), (3.0, 0.1)]:
        a = residual_mi(m, s, t)
        b = residual_mi_tte(m, s, t)
        assert a.value == pytest.approx(lomax_mi(r), abs=1e-8)
        assert abs(a.value - b.value) <= 1e-8


@pytest.mark.parametrize("omega", [1.0, 2.0])
def test_truncated_tte(omega):
    m = make_truncated_tte(omega, 1.0, 1.0)
    for s, t in [(0.1 * omega, 0.2 * omega), (0.3 * omega, 0.3 * omega)]:
        assert residual_mi_tte(m, s, t).value == pytest.approx(TRIANGLE_MI, abs=1e-9)
        assert residual_mi(m, s, t).value == pytest.approx(TRIANGLE_MI, abs=1e-9)
    with pytest.raises(ZeroRegionProbability):
        residual_mi_tte(m, 0.6 * omega, 0.5 * omega)


def test_residual_mi_tte_validates_input():
    with pytest.raises(InvalidTTE):
        residual_mi_tte(LIN, 0.1, 0.1)


def test_independence_is_zero():
    ind = make_independent(marginal("weibull", shape=2.0), marginal("exponential", rate=3.0))
    for s, t in [(0.3, 0.2), (1.0, 0.5)]:
        assert abs(past_mi(ind, s, t).value) <= 1e-6
        assert abs(residual_mi(ind, s, t).value) <= 1e-6
        assert abs(mixed_mi(ind, "past_residual", s, t).value) <= 1e-6
    cop = make_from_copula(independence(), marginal("uniform"), marginal("uniform"))
    assert abs(past_mi(cop, 0.4, 0.9).value) <= 1e-6


def test_static_mi():
    assert abs(mutual_information_static(make_independent()).value) <= 1e-6
    assert mutual_information_static(make_uniform_triangle(1, 1)).value == pytest.approx(TRIANGLE_MI, abs=1e-9)
    assert mutual_information_static(LIN).value == pytest.approx(LINEAR_DIAGONAL, abs=1e-9)


def test_clayton_past_constant():
    m = make_from_copula(clayton_special(), marginal("exponential"), marginal("exponential"))
    for p, q in [(0.3, 0.3), (0.6, 0.2)]:
        r = past_mi(m, float(m.mx.ppf(p)), float(m.my.ppf(q)))
        assert r.value == pytest.approx(CLAYTON_MI, abs=1e-7)


@pytest.mark.parametrize("name", list(builtin_models()))
def test_route_equivalence(name, models):
    m = models[name]
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(8):
        p, q = rng.uniform(0.1, 0.9, 2)
        s, t = float(m.marginal_quantile_x(p)), float(m.marginal_quantile_y(q))
        for kind in ("past_past", "residual_residual"):
            try:
                routes = mi_routes(m, ConditioningRegion(kind, s, t))
            except ZeroRegionProbability:
                continue
            vals = list(routes.values())
            for i in range(3):
                for j in range(i + 1, 3):
                    tol = 3 * (vals[i].numerical_error + vals[j].numerical_error)
                    assert abs(vals[i].value - vals[j].value) <= tol
            checked += 1
    assert checked >= 5


@pytest.mark.parametrize("name", list(builtin_models()))
def test_nonnegativity(name, models):
    m = models[name]
    for p in (0.2, 0.5, 0.8):
        s, t = float(m.marginal_quantile_x(p)), float(m.marginal_quantile_y(1 - p))
        for kind in ("past_past", "residual_residual", "past_residual", "residual_past"):
            try:
                r = dynamic_mi(m, ConditioningRegion(kind, s, t))
            except ZeroRegionProbability:
                continue
            assert r.value >= -r.numerical_error


@pytest.mark.parametrize("model", [make_lomax_tte(2.0, 1.5, 1.5), make_truncated_tte(1.0, 1.0, 1.0),
                                   make_gumbel_type(0.8), make_freund(1.0, 1.0, 1.5, 1.5), LIN])
def test_exchangeable_symmetry(model):
    assert model.exchangeable
    for s, t in [(0.1, 0.3), (0.25, 0.05)]:
        assert past_mi(model, s, t).value == pytest.approx(past_mi(model, t, s).value, abs=1e-5)
        assert residual_mi(model, s, t).value == pytest.approx(residual_mi(model, t, s).value, abs=1e-5)


def test_cross_check_flags_disagreement(monkeypatch):
    import sys
    dm = sys.modules["lifeinfo.dynamic_mi"]
    from lifeinfo.results import MeasureResult
    monkeypatch.setattr(dm, "_mi_entropy_identity", lambda *a: MeasureResult(1.0, 1e-12))
    with pytest.warns(RuntimeWarning):
        dm.dynamic_mi(LIN, ConditioningRegion("past", 0.5, 0.5), cross_check=True)


def test_gumbel_residual_matches_monte_carlo():
    m = make_gumbel_type(1.0)
    region = ConditioningRegion("residual", 0.0, 0.0)
    q = residual_mi(m, 0.0, 0.0)
    mc = mc_mutual_information(m, region, 100_000, seed=11)
    assert abs(q.value - mc.mean) <= 3 * (mc.std_error + q.numerical_error)


# -- bounds ------------------------------------------------------------------

def test_triangle_residual_bound_is_negative_lower_bound():
    rep = residual_mi_bound(make_uniform_triangle(1, 1), 0.1, 0.2)
    assert rep.direction == "lower" and rep.monotonicity_verified
    assert rep.bound_value == pytest.approx(-math.log(2), abs=1e-12)
    assert rep.bound_value < 0 < TRIANGLE_MI
    assert "negative" in rep.note


def test_lomax_bound_inapplicable():
    rep = residual_mi_bound(make_lomax_tte(1.0, 1.0, 1.0), 0.1, 0.2)
    assert rep.direction == "inapplicable" and not rep.monotonicity_verified


def test_linear_bound_consistent_with_mi():
    rep = past_mi_bound(LIN, 0.5, 0.5)
    m = past_mi(LIN, 0.5, 0.5).value
    if rep.direction == "upper":
        assert m <= rep.bound_value + 1e-12
    elif rep.direction == "lower":
        assert m >= rep.bound_value - 1e-12
    else:
        assert not rep.monotonicity_verified


def test_independence_bound_degenerate():
    ind = make_independent()
    for rep in (past_mi_bound(ind, 0.5, 1.0), residual_mi_bound(ind, 0.5, 1.0)):
        assert rep.monotonicity_verified
        assert rep.bound_value == pytest.approx(0.0, abs=1e-10)


def test_bound_holds_when_verified(models):
    for name, m in models.items():
        s, t = float(m.marginal_quantile_x(0.4)), float(m.marginal_quantile_y(0.3))
        for fn, mi in ((past_mi_bound, past_mi), (residual_mi_bound, residual_mi)):
            try:
                rep = fn(m, s, t)
            except ZeroRegionProbability:
                continue
            val = mi(m, s, t).value
            if rep.direction == "upper":
                assert val <= rep.bound_value + 1e-8, name
            elif rep.direction == "lower":
                assert val >= rep.bound_value - 1e-8, name


# -- local dependence, symmetry, BLM -------------------------------------------

def test_local_dependence_ratio():
    ind = make_independent()
    assert np.allclose(local_dependence_ratio(ind, "residual", np.array([0.1, 2.0]),
                                              np.array([0.3, 0.7]), 0.5, 1.0), 1.0)
    assert local_dependence_ratio(ind, "past", 0.2, 0.1, 0.5, 1.0) == pytest.approx(1.0)
    tri = make_uniform_triangle(1, 1)
    s, t, x, y = 0.1, 0.2, 0.15, 0.25
    expect = (1 - s - t) ** 2 / (2 * (1 - s - y - t) * (1 - s - x - t))
    assert local_dependence_ratio(tri, "residual", x, y, s, t) == pytest.approx(expect)
    with pytest.raises(ZeroDenominator):
        local_dependence_ratio(tri, "residual", 0.8, 0.0, s, t)


def test_local_ratio_reproduces_mi():
    s, t = 0.6, 0.8
    P = float(LIN.cdf(s, t))
    val, _ = sci.dblquad(lambda y, x: (x + y) / P * math.log(local_dependence_ratio(LIN, "past", x, y, s, t)),
                         0, s, 0, t, epsabs=1e-12, epsrel=1e-10)
    assert val == pytest.approx(past_mi(LIN, s, t).value, abs=1e-9)


def test_symmetry_transfer():
    tri = make_uniform_triangle(1, 1)
    rt = make_reflected_triangle(1, 1)
    grid = [(0.7, 0.8), (0.9, 0.6), (0.75, 0.75)]
    assert symmetry_transfer_check(tri, rt, 0.5, 0.5, grid) <= 1e-4
    for s, t in grid:
        assert past_mi(rt, s, t).value == pytest.approx(TRIANGLE_MI, abs=1e-9)
    lin_r = reflect(LIN, 0.5, 0.5)
    assert symmetry_transfer_check(LIN, lin_r, 0.5, 0.5, [(0.4, 0.7), (0.8, 0.3)]) <= 1e-4
    # the linear density is not symmetric about (1/2, 1/2), so pairing it with itself fails
    with pytest.raises(NotSymmetricPair):
        symmetry_transfer_check(LIN, LIN, 0.5, 0.5, [(0.5, 0.5)])
    ind = make_from_copula(independence(), marginal("uniform"), marginal("uniform"))
    assert symmetry_transfer_check(ind, ind, 0.5, 0.5, [(0.3, 0.6)]) <= 1e-4


def test_blm_constancy():
    assert blm_constancy_check(make_freund(1.0, 2.0, 2.5, 1.5), [0.2, 0.7, 1.5, 3.0]) <= 1e-4
    assert blm_constancy_check(make_independent(), [0.5, 2.0]) <= 1e-6
    tri = make_uniform_triangle(1, 1)
    assert blm_constancy_check(tri, [0.1, 0.2, 0.3, 0.45], require_blm=False) <= 1e-4
    with pytest.raises(NotBLM):
        blm_constancy_check(tri, [0.1])


def test_tiny_region_probability_keeps_accuracy():
    # survival at (10, 20) is 51^-5, about 3e-9; tolerances must follow the region mass
    m = make_lomax_tte(5.0, 1.0, 2.0)
    for r in (residual_mi(m, 10.0, 20.0), residual_mi_tte(m, 10.0, 20.0)):
        assert r.value == pytest.approx(lomax_mi(5.0), abs=1e-7)
        assert r.numerical_error <= 1e-6
