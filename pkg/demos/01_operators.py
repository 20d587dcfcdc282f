"""
Operators, theta-forms and Taylor coefficients
==============================================

Walk through the exact operator layer on the Apery operator.
"""

# %%
from fractions import Fraction

from gfc.diffop import beta_shift, generate_coefficients, invert_variable, to_theta_form
from gfc.parser import format_operator, parse_operator

apery = parse_operator(
    "z^2*(1-34*z+z^2)*D^3 + z*(3-153*z+6*z^2)*D^2 + (1-112*z+7*z^2)*D + (z-5)"
)
print(format_operator(apery))

# %%
# theta-form: u z^(mu-omega) L = sum_j z^j Q_j(theta + j)
form = to_theta_form(apery)
print("u, omega, mu, ell =", form.u, form.omega, form.mu, form.ell)
for j, q in enumerate(form.Q):
    print(f"Q_{j}(X) =", q)

# %%
# shifting by beta = 2/3 scales to keep integer coefficients
shifted = beta_shift(form, Fraction(2, 3))
print("Q_0 after the shift:", shifted.Q[0])

# %%
# the recurrence on Taylor coefficients gives the Apery numbers
a = generate_coefficients(form, [1, 5], 8)
print([int(x) for x in a])

# %%
# the operator at infinity, z = 1/u
print(format_operator(invert_variable(parse_operator("(1-z)*D - 1"))))
