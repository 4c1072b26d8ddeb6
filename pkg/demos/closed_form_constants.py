"""Closed-form constants next to the numbers the library computes.

Run with ``python demos/closed_form_constants.py``.
"""

# %% [markdown]
# Several models have a dynamic mutual information that does not depend on
# the inspection times at all.  We compute each one at a few points and print
# it beside its exact value.

# %%
from __future__ import annotations

import math

from lifeinfo import (clayton_special, make_linear_unit_square, make_lomax_tte,
                      make_truncated_tte, make_uniform_triangle, os_mi_closed_form, past_mi,
                      past_mi_copula, residual_mi, residual_mi_tte)

LOG2 = math.log(2)


def show(label, value, exact):
    print(f"{label:42s} {value: .12f}   exact {exact: .12f}   diff {value - exact: .1e}")


# %% Uniform triangle: residual MI is 1 - log 2 wherever the region is non-null.
tri = make_uniform_triangle(2.0, 3.0)
for s, t in [(0.0, 0.0), (0.1, 0.1), (0.3, 0.05)]:
    show(f"triangle(2,3) residual at ({s}, {t})", residual_mi(tri, s, t).value, 1 - LOG2)

# %% Bivariate Lomax: residual MI is -1/(r+1) + log((r+1)/r).
for r in (1.0, 2.0, 5.0):
    lom = make_lomax_tte(r, 1.0, 2.0)
    exact = -1 / (r + 1) + math.log((r + 1) / r)
    show(f"Lomax r={r:g} residual at (1, 2)", residual_mi(lom, 1.0, 2.0).value, exact)
    show(f"Lomax r={r:g} residual, time-transform route", residual_mi_tte(lom, 1.0, 2.0).value, exact)

# %% Truncated time-transformed exponential with a quadratic generator.
trunc = make_truncated_tte(2.0, 1.0, 1.0)
show("truncated TTE residual at (0.2, 0.6)", residual_mi_tte(trunc, 0.2, 0.6).value, 1 - LOG2)

# %% Linear density x + y: past MI on the diagonal.
lin = make_linear_unit_square()
diag = (2 + 40 * LOG2 - 27 * math.log(3)) / 12
for s in (0.2, 0.5, 0.9):
    show(f"linear past MI at ({s}, {s})", past_mi(lin, s, s).value, diag)

# %% Clayton copula with theta = 1: past MI is log 2 - 1/2 at any quantile pair.
for p, q in [(0.2, 0.8), (0.5, 0.5)]:
    show(f"Clayton past MI at quantiles ({p}, {q})", past_mi_copula(clayton_special(), p, q).value,
         LOG2 - 0.5)

# %% First and last of two i.i.d. failures are conditionally independent.
show("order statistics n=2 at (0.3, 0.6)", os_mi_closed_form(0.3, 0.6, 2), 0.0)
