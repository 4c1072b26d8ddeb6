from __future__ import annotations

import numpy as np
import pytest
from scipy import special as sp

from lifeinfo.errors import SpecialFunctionDomain
from lifeinfo.special import bisect_increasing, exp1, upper_gamma0


def test_exp1_against_scipy():
    z = np.concatenate([np.geomspace(1e-8, 0.999, 40), [1.0], np.geomspace(1.001, 600, 40)])
    ref = sp.exp1(z)
    got = exp1(z)
    assert np.max(np.abs(got - ref) / ref) < 1e-12


def test_exp1_reference_value():
    # E1(1) = 0.21938393439552027...
    assert exp1(1.0) == pytest.approx(0.21938393439552027, rel=1e-14)
    assert upper_gamma0(2.5) == pytest.approx(sp.exp1(2.5), rel=1e-13)
    assert isinstance(exp1(0.5), float)


@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan])
def test_exp1_domain(bad):
    with pytest.raises(SpecialFunctionDomain):
        exp1(bad)


def test_bisect_matches_known_inverse():
    p = np.linspace(0.01, 0.99, 25)
    x = bisect_increasing(lambda z: 1 - np.exp(-z), p, 0.0, np.inf)
    assert np.allclose(x, -np.log1p(-p), rtol=1e-11, atol=1e-12)


def test_bisect_generalized_inverse_on_flat_stretch():
    # cdf flat on [1, 2]: smallest x with F(x) >= 0.5 is 1
    F = lambda z: np.clip(np.where(z < 1, z / 2, np.where(z < 2, 0.5, (z - 1) / 2)), 0, 1)
    assert bisect_increasing(F, 0.5, 0.0, 3.0) == pytest.approx(1.0, abs=1e-10)
