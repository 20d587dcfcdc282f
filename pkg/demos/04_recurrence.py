"""
Recurrence solutions, Wronskians and growth
===========================================
"""

# %%
import math
from fractions import Fraction

from gfc.cases import case_source
from gfc.invariants import exponent_profile, start_index_m
from gfc.recurrence import basis_solutions, growth_diagnostics, wronskian_direct, wronskian_product

form = case_source("apery").form
profile = exponent_profile(form)
beta = Fraction(2, 3)
m = start_index_m(profile, beta)
trace = basis_solutions(form, beta, m, 60)
print("m =", m, " u_1(m..m+4) =", [str(trace.value(0, n)) for n in range(m, m + 5)])

# %%
# the Wronskian solves a first order recurrence, so it has a product formula
w_m = wronskian_direct(trace, m)
for n in range(m, m + 6):
    print(n, wronskian_direct(trace, n) == wronskian_product(profile, beta, m, w_m, n))

# %%
# the common denominator grows like lcm(1..n)
geo = case_source("geometric").form
gp = exponent_profile(geo)
g = growth_diagnostics(basis_solutions(geo, 0, start_index_m(gp, 0), 800), gp, c1=1, log_c2=3)
print("fitted rate of 3 log delta_n:", round(g.delta_rate, 4), " vs 3")
print("delta_n^(3/n) at the end:", round(g.delta_pow[-1], 3), " e^3 =", round(math.e**3, 3))
