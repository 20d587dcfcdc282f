import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from gfc.constants import operator_radius
from gfc.diffop import companion, generate_coefficients
from gfc.invariants import exponent_profile
from gfc.parser import parse_operator
from gfc.size import (
    LAMBDA0_VARIANTS,
    chudnovsky_bound,
    galochkin_sequence,
    lambda0,
    nilsson_gevrey_sigma,
    sigma_bar_empirical,
    sigma_bar_hypergeometric,
    sigma_bar_integral,
    sigma_empirical,
)

from conftest import OPERATORS, form, op, seeds


@pytest.fixture(autouse=True)
def _prec():
    with mp.workprec(192):
        yield


def close(a, b, tol):
    return abs(mp.mpf(a) - mp.mpf(b)) <= tol


# --- denominators of derived matrices ---------------------------------------------


def test_galochkin_geometric_is_one():
    g, t_poly, _ = companion(op("geometric"))
    assert galochkin_sequence(g, t_poly, 30) == [1] * 31


def test_galochkin_pure_theta():
    g, t_poly, _ = companion(parse_operator("z*D"))
    assert set(galochkin_sequence(g, t_poly, 20)) == {1}


@pytest.mark.parametrize("name", sorted(OPERATORS))
def test_galochkin_denominators_are_nested(name):
    g, t_poly, _ = companion(op(name))
    qs = galochkin_sequence(g, t_poly, 12)
    assert all(b % a == 0 for a, b in zip(qs, qs[1:]))


def test_galochkin_apery_growth_is_bounded():
    g, t_poly, _ = companion(op("apery"))
    qs = galochkin_sequence(g, t_poly, 15)
    slopes = [math.log(q) / s for s, q in enumerate(qs) if s]
    assert max(slopes) < 2 * (1 + math.log(2)) * 5


def test_sigma_empirical_zero_cases():
    for text in ["(1-z)*D - 1", "(1-z)*D^2 - 2*D"]:
        g, t_poly, _ = companion(parse_operator(text))
        assert sigma_empirical(g, t_poly, 30).sigma_bound == 0


def test_sigma_empirical_square_root_operator():
    # H_m/m! = binom(1/2, m), whose denominators are 2^(2m - popcount-ish): rate 2 log 2
    g, t_poly, _ = companion(parse_operator("z*D - 1/2"))
    est = sigma_empirical(g, t_poly, 60)
    assert abs(est.sigma_bound - 2 * math.log(2)) < 0.1
    assert not est.certified


# --- sigma-bar -------------------------------------------------------------------


def test_sigma_bar_geometric():
    assert sigma_bar_empirical([1] * 100, 1).total == 0


def test_sigma_bar_apery():
    radius = operator_radius(op("apery"), 192)
    bound = sigma_bar_integral(radius)
    assert close(bound.total, -4 * mp.log(mp.sqrt(2) - 1), mp.mpf(2) ** -100)
    coeffs = generate_coefficients(form("apery"), seeds("apery"), 200)
    assert sigma_bar_empirical(coeffs, radius).total <= -4 * mp.log(mp.sqrt(2) - 1) + mp.mpf(10) ** -30


def test_sigma_bar_algebraic():
    radius = operator_radius(op("algebraic"), 192)
    assert close(sigma_bar_integral(radius).total, -mp.log(3 - 2 * mp.sqrt(2)), mp.mpf(2) ** -100)
    assert close(sigma_bar_integral(radius).total, 1.7627, 1e-4)


def test_sigma_bar_empirical_estimates_radius_without_hint():
    coeffs = generate_coefficients(form("algebraic"), seeds("algebraic"), 300)
    est = sigma_bar_empirical(coeffs)
    assert close(est.archimedean_part, -mp.log(3 - 2 * mp.sqrt(2)), 0.05)


def test_sigma_bar_hypergeometric_examples():
    value = sigma_bar_hypergeometric([Fraction(1, 3), Fraction(2, 11)], [Fraction(1, 6)]).total
    assert close(value, 4 * mp.log(33) + 6, mp.mpf(2) ** -150)
    assert close(sigma_bar_hypergeometric([Fraction(1, 2)], []).total, 2 * mp.log(2), mp.mpf(2) ** -150)
    assert sigma_bar_hypergeometric([3], []).total == 0


def test_sigma_bar_hypergeometric_rejects_nonpositive_integers():
    with pytest.raises(ValueError):
        sigma_bar_hypergeometric([-2], [1])


# --- size bounds ----------------------------------------------------------------


def test_chudnovsky_examples():
    assert close(chudnovsky_bound(2, 3, mp.mpf("19.988")), 56 * mp.mpf("19.988"), 1e-30)
    assert close(chudnovsky_bound(2, 3, mp.mpf("19.988")), 1119.3, 0.05)
    assert close(chudnovsky_bound(1, 3, mp.mpf("1.7627")), 29.97, 0.01)
    assert chudnovsky_bound(3, 5, 0) == 0


@given(st.integers(1, 6), st.integers(1, 8), st.floats(0.01, 50))
def test_chudnovsky_monotone(mu, t, s):
    base = chudnovsky_bound(mu, t, s)
    assert base > 0
    assert chudnovsky_bound(mu + 1, t, s) >= base
    assert chudnovsky_bound(mu, t + 1, s) >= base
    assert chudnovsky_bound(mu, t, s * 1.5) >= base


def test_nilsson_gevrey_examples():
    c = 1 + mp.log(2)
    assert close(nilsson_gevrey_sigma(0, 1), c, 1e-40)
    assert close(nilsson_gevrey_sigma(mp.mpf("754.5"), 3), c * mp.mpf("754.5"), 1e-30)
    assert close(nilsson_gevrey_sigma(mp.mpf("1.693"), 12), c * 2 * mp.log(12), 1e-30)
    assert close(c * 2 * mp.log(12), 1.6931 * 4.9698, 1e-3)


@pytest.mark.parametrize(
    "name, beta, sigma, expected",
    [
        ("algebraic", Fraction(3, 5), "29.97", 1040.4),
        ("log_squared", Fraction(1, 12), "1+log(2)", 573.9),
        ("apery", Fraction(2, 3), "754.5", 69825),
    ],
)
def test_lambda0_examples(name, beta, sigma, expected):
    from gfc.parser import parse_number

    value = lambda0(exponent_profile(form(name)), beta, parse_number(sigma), "statement")
    assert abs(value - expected) / expected < 1e-4


@pytest.mark.parametrize("name", ["algebraic", "log_squared", "apery", "hypergeometric"])
@given(st.fractions(min_value=0, max_value=3, max_denominator=13), st.floats(0, 2000))
def test_lambda0_statement_dominates_proof(name, beta, sigma):
    p = exponent_profile(form(name))
    if beta.denominator == 1 and beta < 0:
        return
    a = lambda0(p, beta, sigma, "statement")
    b = lambda0(p, beta, sigma, "proof")
    assert a >= b >= 0


def test_lambda0_variant_validation():
    assert LAMBDA0_VARIANTS == ("statement", "proof")
    with pytest.raises(ValueError):
        lambda0(exponent_profile(form("apery")), Fraction(2, 3), 1, "other")
