"""
Linear forms in the weighted series
===================================
"""

# %%
from fractions import Fraction

from mpmath import mp

from gfc.cases import case_source
from gfc.constants import operator_radius
from gfc.linear_forms import (
    SeriesContext,
    decay_diagnostics,
    eval_F,
    inhomogeneous_recurrence_check,
    partial_fractions,
    reduce_to_basis,
    verify_linear_form,
)

# R_1(X) = X / ((X+1)(X+2)) splits as -1/(X+1) + 2/(X+2)
print(partial_fractions(1, 1, 1, 0).c)

# %%
geo = SeriesContext(form=case_source("geometric").form, seeds=[1], prec=128)
print("Li2(1/2) =", mp.nstr(eval_F(geo, 1, 2, Fraction(1, 2)).value, 30))

# %%
src = case_source("apery")
ctx = SeriesContext(
    beta=Fraction(2, 3), radius_hint=operator_radius(src.op, 256), prec=256, form=src.form, seeds=src.seeds
)
check = verify_linear_form(ctx, 3, 1, 5, Fraction(1, 50))
print("T against its partial fraction expansion, residual:", mp.nstr(check.residual, 3))

# %%
print("level 2 inhomogeneous recurrence residual:", mp.nstr(inhomogeneous_recurrence_check(src.form, ctx, 4, 2, Fraction(1, 50)), 3))
red = reduce_to_basis(src.form, ctx, 6, 1, z=Fraction(1, 50))
print("reduced to indices <=", red.basis_top, "with", len(red.kappa), "terms, residual", mp.nstr(red.residual, 3))

# %%
d = decay_diagnostics(geo, 6, 2, Fraction(1, 2), range(20, 61, 10))
print("fitted decay rate:", round(d.slope, 3), " required:", round(0.8 * d.bound, 3))
