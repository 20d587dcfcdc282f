import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gfc.exact import pochhammer
from gfc.invariants import exponent_profile, start_index_m
from gfc.recurrence import (
    basis_solutions,
    determinant,
    growth_diagnostics,
    minors,
    wronskian_direct,
    wronskian_product,
)

from conftest import OPERATORS, form

BETAS = [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 12)]


def trace_for(name, beta, n_max):
    f = form(name)
    p = exponent_profile(f)
    m = start_index_m(p, beta)
    return f, p, m, basis_solutions(f, beta, m, n_max)


@settings(max_examples=40)
@given(st.lists(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_sympy(rows):
    expected = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows]).det()
    assert determinant(rows) == Fraction(int(expected.p), int(expected.q))


def test_determinant_small_cases():
    assert determinant([]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1


@pytest.mark.parametrize("name", sorted(OPERATORS))
@pytest.mark.parametrize("beta", BETAS)
def test_basis_satisfies_recurrence(name, beta):
    _, _, m, tr = trace_for(name, beta, 60)
    for j in range(tr.ell):
        for n in range(m, tr.N - tr.ell + 1):
            assert tr.residual(j, n) == 0


def test_first_order_basis_is_pochhammer_ratio():
    # hypergeometric: u(n+1)/u(n) is a ratio of linear factors in n
    f = form("hypergeometric")
    beta = Fraction(1, 7)
    p = exponent_profile(f)
    m = start_index_m(p, beta)
    tr = basis_solutions(f, beta, m, 40)
    for n in range(m, 40):
        expected = -f.Q[0](-n - beta) / f.Q[1](-n - beta)
        assert tr.value(0, n + 1) == expected * tr.value(0, n)


def test_geometric_basis_is_constant():
    _, _, m, tr = trace_for("geometric", Fraction(1, 2), 50)
    assert set(tr.basis[0]) == {1}


@pytest.mark.parametrize("name", sorted(OPERATORS))
@pytest.mark.parametrize("beta", BETAS)
def test_wronskian_closed_form(name, beta):
    _, p, m, tr = trace_for(name, beta, 80)
    w_m = wronskian_direct(tr, m)
    assert abs(w_m) == 1
    for n in range(m, m + 31):
        assert wronskian_direct(tr, n) == wronskian_product(p, beta, m, w_m, n)


def test_wronskian_product_validates_index():
    _, p, m, _ = trace_for("apery", Fraction(2, 3), 20)
    with pytest.raises(ValueError):
        wronskian_product(p, Fraction(2, 3), m, 1, m - 1)


def test_wronskian_out_of_range():
    _, _, m, tr = trace_for("apery", 0, 20)
    with pytest.raises(IndexError):
        wronskian_direct(tr, tr.N)


def test_minors_first_order():
    _, _, m, tr = trace_for("geometric", 0, 20)
    assert minors(tr, 1, m + 3) == 1
    with pytest.raises(IndexError):
        minors(tr, 2, m)


@pytest.mark.parametrize("name", ["algebraic", "log_squared", "apery"])
@pytest.mark.parametrize("beta", BETAS)
def test_minors_are_cofactors(name, beta):
    # expanding W(n) along the top row gives -W(n); the other rows give 0
    _, _, m, tr = trace_for(name, beta, 40)
    ell = tr.ell
    for n in range(m, m + 10):
        d = [minors(tr, j, n) for j in range(1, ell + 1)]
        top = sum(tr.value(j, n + ell - 1) * d[j] for j in range(ell))
        assert top == -wronskian_direct(tr, n)
        for r in range(n, n + ell - 1):
            assert sum(tr.value(j, r) * d[j] for j in range(ell)) == 0


def test_basis_rejects_short_range_and_bad_start():
    f = form("apery")
    with pytest.raises(ValueError):
        basis_solutions(f, 0, 1, 2)
    with pytest.raises(ValueError, match="start index"):
        basis_solutions(form("geometric"), 0, 0, 10)


# --- growth ------------------------------------------------------------------------


def test_growth_geometric_rates():
    f, p, m, tr = trace_for("geometric", 0, 800)
    g = growth_diagnostics(tr, p, c1=1, log_c2=3)
    assert abs(math.exp(g.delta_rate) / math.e**3 - 1) < 0.05
    assert abs(g.delta_pow[-1] / math.e**3 - 1) < 0.05
    assert max(abs(v - 1) for v in g.max_pow[g.tail()]) < 0.01
    assert g.c1_ok and g.c2_ok


def test_growth_geometric_denominators_are_lcm():
    _, p, m, tr = trace_for("geometric", 0, 120)
    g = growth_diagnostics(tr, p)
    for n, ld in zip(g.n, g.log_delta):
        assert ld == pytest.approx(math.log(math.lcm(*range(1, max(n - 1, 1) + 1))), abs=1e-9)


@pytest.mark.parametrize("name", sorted(OPERATORS))
def test_growth_sequences_are_monotone(name):
    _, p, m, tr = trace_for(name, Fraction(1, 3), 150)
    g = growth_diagnostics(tr, p)
    assert all(b >= a for a, b in zip(g.log_delta, g.log_delta[1:]))
    assert all(b >= a for a, b in zip(g.log_max, g.log_max[1:]))
    assert g.c1_ok is None and g.c2_ok is None


def test_growth_flags_violation():
    _, p, m, tr = trace_for("apery", Fraction(2, 3), 200)
    g = growth_diagnostics(tr, p, c1=1, log_c2=0.1)
    assert g.c1_ok is False and g.c2_ok is False


def test_first_order_basis_closed_form():
    # u(m + k) = (-gamma0/gamma1)^k prod (m+beta+e)_k / prod (m+beta+1-f)_k
    beta = Fraction(1, 7)
    f = form("hypergeometric")
    p = exponent_profile(f)
    m = start_index_m(p, beta)
    tr = basis_solutions(f, beta, m, 30)
    ratio = -p.gamma0 / p.gamma_ell
    for n in range(m, 31):
        k = n - m
        top = math.prod(pochhammer(m + beta + e, k) for e in p.e)
        bottom = math.prod(pochhammer(m + beta + 1 - x, k) for x in p.f)
        assert tr.value(0, n) == ratio**k * top / bottom
