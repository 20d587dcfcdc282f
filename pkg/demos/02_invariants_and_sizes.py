"""
Exponents, singular heights and size bounds
===========================================
"""

# %%
from fractions import Fraction

from mpmath import mp

from gfc.constants import operator_radius
from gfc.diffop import companion, to_theta_form
from gfc.invariants import ell0, exponent_profile, phi0, singular_height_sum, start_index_m
from gfc.parser import parse_operator
from gfc.size import chudnovsky_bound, galochkin_sequence, sigma_bar_hypergeometric, sigma_bar_integral

mp.prec = 192
algebraic = parse_operator("(z^2-6*z+1)*D + (z-3)")
profile = exponent_profile(to_theta_form(algebraic))
print("exponents at 0:", profile.e, " at infinity:", profile.f)

# %%
for beta in [Fraction(0), Fraction(3, 5), Fraction(-7, 5)]:
    print(f"beta = {beta}: ell0 = {ell0(profile, beta)}, m = {start_index_m(profile, beta)}")

# %%
print("Phi0        =", mp.nstr(phi0(profile), 15))
print("height sum  =", mp.nstr(singular_height_sum(profile), 15))

# %%
# size of the coefficients: radius of convergence and the hypergeometric shortcut
radius = operator_radius(algebraic)
print("radius      =", mp.nstr(radius, 15))
print("sigma bar   =", mp.nstr(sigma_bar_integral(radius).total, 15))
print("2F1 sigma   =", mp.nstr(sigma_bar_hypergeometric([Fraction(1, 3), Fraction(2, 11)], [Fraction(1, 6)]).total, 15))

# %%
g, t_poly, t = companion(algebraic)
print("Chudnovsky bound with t =", t, ":", mp.nstr(chudnovsky_bound(1, t, sigma_bar_integral(radius).total), 10))

# %%
# denominators of the derived companion matrices stay 1 for the geometric series
g, t_poly, _ = companion(parse_operator("(1-z)*D - 1"))
print(galochkin_sequence(g, t_poly, 12))
