import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from gfc.constants import operator_radius
from gfc.linear_forms import (
    DivergenceError,
    SeriesContext,
    decay_diagnostics,
    eval_F,
    eval_T_direct,
    inhomogeneous_recurrence_check,
    inhomogeneous_terms,
    integrality_violations,
    partial_fractions,
    reduce_to_basis,
    verify_linear_form,
)

from conftest import form, op, seeds

X = sympy.Symbol("X")


def context(name, beta, prec=192):
    return SeriesContext(
        beta=beta, radius_hint=operator_radius(op(name), prec), prec=prec, form=form(name), seeds=seeds(name)
    )


def small_point(name):
    return {"apery": Fraction(1, 50), "algebraic": Fraction(1, 9)}.get(name, Fraction(1, 2))


# --- the weighted series -------------------------------------------------------


def test_eval_f_dilogarithm():
    ctx = SeriesContext(coeffs=None, form=form("geometric"), seeds=[1], prec=160)
    value, err = eval_F(ctx, 1, 2, Fraction(1, 2))
    with mp.workprec(200):
        expected = mp.pi**2 / 12 - mp.log(2) ** 2 / 2
        assert abs(value - expected) < mp.mpf(2) ** -150
        assert err < mp.mpf(2) ** -160


@pytest.mark.parametrize("beta, n, s", [(Fraction(1, 3), 2, 1), (Fraction(2, 3), 0, 3), (Fraction(1, 12), 5, 2)])
def test_eval_f_matches_lerch_transcendent(beta, n, s):
    ctx = SeriesContext(beta=beta, form=form("geometric"), seeds=[1], prec=160)
    z = Fraction(2, 5)
    value, _ = eval_F(ctx, n, s, z)
    with mp.workprec(200):
        expected = mp.mpf(z.numerator) / z.denominator
        expected = expected**n * mp.lerchphi(expected, s, mp.mpf(beta.numerator) / beta.denominator + n)
        assert abs(value - expected) < mp.mpf(2) ** -150


def test_eval_f_exact_truncation_oracle():
    # apery coefficients summed exactly far past the needed precision
    ctx = context("apery", Fraction(2, 3))
    z, n, s = Fraction(1, 200), 3, 2
    a = ctx.coefficients(120)
    exact = sum(c * z ** (k + n) / (k + Fraction(2, 3) + n) ** s for k, c in enumerate(a))
    value, _ = eval_F(ctx, n, s, z)
    with mp.workprec(256):
        assert abs(value - mp.mpf(exact.numerator) / exact.denominator) < mp.mpf(2) ** -180


def test_eval_f_rejects_points_outside_the_disc():
    with pytest.raises(DivergenceError):
        eval_F(context("apery", 0), 1, 1, Fraction(1, 10))


def test_series_context_validation():
    with pytest.raises(ValueError):
        SeriesContext()
    ctx = SeriesContext(coeffs=[1, 2, 3])
    assert ctx.coefficient(2) == 3
    with pytest.raises(IndexError):
        ctx.coefficient(3)


# --- partial fractions ----------------------------------------------------------


def test_partial_fractions_smallest_case():
    table = partial_fractions(1, 1, 1, 0)
    assert table.c == {(1, 1): -1, (2, 1): 2}


@pytest.mark.parametrize("n, S, r, beta", [(2, 2, 1, Fraction(1, 2)), (3, 3, 2, Fraction(2, 3)), (1, 3, 3, Fraction(1, 12))])
def test_partial_fractions_match_sympy_apart(n, S, r, beta):
    b = sympy.Rational(beta.numerator, beta.denominator)
    expr = sympy.factorial(n) ** (S - r) * sympy.prod([X - i for i in range(r * n)])
    expr /= sympy.prod([(X + b + j) ** S for j in range(1, n + 2)])
    decomposed = sympy.apart(sympy.together(expr), X, full=False)
    table = partial_fractions(n, S, r, beta)
    rebuilt = sum(sympy.Rational(c.numerator, c.denominator) / (X + b + j) ** s for (j, s), c in table.c.items())
    assert sympy.simplify(rebuilt - decomposed) == 0


@settings(max_examples=30)
@given(
    st.integers(1, 4),
    st.integers(1, 3),
    st.fractions(min_value=0, max_value=1, max_denominator=12),
    st.fractions(min_value=-30, max_value=30, max_denominator=9),
)
def test_partial_fractions_reconstruct(n, S, beta, x):
    r = 1 + (n + S) % S
    table = partial_fractions(n, S, r, beta)
    if any(x + beta + j == 0 for j in range(1, n + 2)):
        return
    assert table.reconstruct(x) == table.rational_function(x)


@pytest.mark.parametrize("beta", [Fraction(1, 2), Fraction(2, 3), Fraction(1, 12), Fraction(0)])
def test_partial_fraction_integrality(beta):
    for n in range(1, 8):
        for S in range(1, 4):
            for r in range(1, S + 1):
                assert integrality_violations(n, S, r, beta) == []


def test_partial_fractions_validation():
    with pytest.raises(ValueError):
        partial_fractions(0, 1, 1, 0)
    with pytest.raises(ValueError):
        partial_fractions(2, 2, 3, 0)


# --- T and the linear form --------------------------------------------------------


def test_eval_t_direct_matches_exact_sum():
    ctx = SeriesContext(beta=Fraction(1, 2), form=form("geometric"), seeds=[1], prec=160)
    n, S, r = 3, 3, 2
    table = partial_fractions(n, S, r, Fraction(1, 2))
    exact = sum(table.rational_function(k) * Fraction(1, 2) ** k for k in range(r * n, 700))
    value, _ = eval_T_direct(ctx, S, r, n, 2)
    with mp.workprec(256):
        assert abs(value - mp.mpf(exact.numerator) / exact.denominator) < mp.mpf(2) ** -150


def test_eval_t_vanishing_terms_are_skipped():
    ctx = SeriesContext(coeffs=[1] * 400, prec=128)
    value, _ = eval_T_direct(ctx, 2, 2, 1, 3)
    with mp.workprec(160):
        expected = mp.nsum(lambda k: k * (k - 1) / ((k + 1) ** 2 * (k + 2) ** 2) * mp.mpf(3) ** -k, [2, mp.inf])
        assert abs(value - expected) < mp.mpf(2) ** -110


def test_eval_t_validates_r():
    ctx = SeriesContext(coeffs=[1] * 10)
    with pytest.raises(ValueError):
        eval_T_direct(ctx, 2, 3, 1, 3)


@pytest.mark.parametrize(
    "name, S, r, n, beta",
    [
        ("geometric", 2, 1, 4, Fraction(1, 2)),
        ("hypergeometric", 3, 2, 3, Fraction(1, 7)),
        ("algebraic", 2, 2, 5, Fraction(3, 5)),
        ("apery", 3, 1, 5, Fraction(1, 2)),
    ],
)
def test_linear_form_identity(name, S, r, n, beta):
    check = verify_linear_form(context(name, beta, 256), S, r, n, small_point(name), 256)
    assert check.residual < mp.mpf(2) ** -200


# --- inhomogeneous recurrence and reduction -------------------------------------------


def test_inhomogeneous_terms_first_level_divides_exactly():
    gamma, b = inhomogeneous_terms(form("apery"), Fraction(2, 3), 3, 3)
    for (j, s), p in b.items():
        assert p.degree <= form("apery").mu - s
    assert set(k[2] for k in gamma) == {2, 3}


@pytest.mark.parametrize("name", ["geometric", "hypergeometric", "algebraic", "log_squared", "apery"])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_inhomogeneous_recurrence_holds(name, s):
    beta = Fraction(1, 3)
    ctx = context(name, beta, 256)
    res = inhomogeneous_recurrence_check(form(name), ctx, 4, s, small_point(name))
    assert res < mp.mpf(2) ** -128


def test_inhomogeneous_recurrence_validation():
    with pytest.raises(ValueError):
        inhomogeneous_recurrence_check(form("geometric"), context("geometric", 0), 0, 1, Fraction(1, 2))


def test_reduce_to_basis_apery():
    ctx = context("apery", Fraction(2, 3), 256)
    red = reduce_to_basis(form("apery"), ctx, 6, 1, z=Fraction(1, 50))
    assert red.residual < mp.mpf(2) ** -128
    assert red.degree_bound_ok(6, 1, 2)
    assert all(j <= red.basis_top for j, _ in red.kappa)


def test_reduce_to_basis_geometric_telescopes():
    # F^{[1]}_n - F^{[1]}_{n-1} = z^{n-1}(...)F, so only the lowest index stays
    ctx = context("geometric", Fraction(1, 2), 192)
    red = reduce_to_basis(form("geometric"), ctx, 7, 2, z=Fraction(1, 3))
    assert red.residual < mp.mpf(2) ** -120
    assert set(j for j, _ in red.kappa) <= {red.basis_top}


def test_reduce_to_basis_rejects_small_index():
    ctx = context("apery", Fraction(2, 3))
    with pytest.raises(ValueError):
        reduce_to_basis(form("apery"), ctx, 1, 1)


# --- decay ------------------------------------------------------------------------


def test_decay_geometric():
    ctx = SeriesContext(form=form("geometric"), seeds=[1], prec=128)
    d = decay_diagnostics(ctx, 6, 2, Fraction(1, 2), range(20, 41, 5))
    assert d.ok and d.slope < d.bound * 0.8
    assert d.bound == pytest.approx(-4 * math.log(2))
    assert len(d.root) == len(d.n) == 5
