from fractions import Fraction

import pytest
from mpmath import mp

from gfc.diffop import ThetaForm
from gfc.exact import Poly
from gfc.invariants import (
    NotSplitError,
    ell0,
    exceptional_set,
    exponent_profile,
    phi0,
    singular_height_sum,
    start_index_m,
)

from conftest import OPERATORS, form


def F(x):
    return Fraction(x)


def test_profile_geometric():
    p = exponent_profile(form("geometric"))
    assert p.e == (0,) and p.f == (1,)
    assert (p.gamma0, p.gamma_ell) == (1, -1)


def test_profile_hypergeometric_exponents_are_parameters():
    p = exponent_profile(form("hypergeometric"))
    assert sorted(p.f) == sorted([F("1/3"), F("2/11")])
    assert sorted(p.e) == [0, 1 - F("1/6")]


def test_profile_apery():
    p = exponent_profile(form("apery"))
    assert p.e == (0, 0, 0) and p.f == (1, 1, 1)


@pytest.mark.parametrize("name", sorted(OPERATORS))
def test_profile_reconstructs_extreme_polynomials(name):
    f = form(name)
    p = exponent_profile(f)
    assert Poly.from_roots(p.e, p.gamma0) == f.Q[0]
    assert Poly.from_roots([p.ell - x for x in p.f], p.gamma_ell) == f.Q[-1]
    assert p.q0() == f.Q[0] and p.q_ell() == f.Q[-1]


def test_not_split_raises():
    f = ThetaForm(u=1, omega=2, mu=2, Q=(Poly([-2, 0, 1]), Poly([0, 0, -1])))
    with pytest.raises(NotSplitError):
        exponent_profile(f)


@pytest.mark.parametrize(
    "name, beta, expected",
    [("geometric", F(0), 1), ("algebraic", F("3/5"), 2), ("apery", F("2/3"), 2)],
)
def test_ell0_examples(name, beta, expected):
    assert ell0(exponent_profile(form(name)), beta) == expected


@pytest.mark.parametrize("name", sorted(OPERATORS))
@pytest.mark.parametrize("beta", [F(0), F("1/2"), F("1/3"), F("2/11"), F("-5/3"), F(4)])
def test_ell0_properties(name, beta):
    p = exponent_profile(form(name))
    value = ell0(p, beta)
    assert value >= p.ell
    if not exceptional_set(p, beta):
        assert value == p.ell


def test_ell0_grows_along_exceptional_sequence():
    p = exponent_profile(form("hypergeometric"))
    for k in range(1, 12):
        beta = F("1/3") - k
        assert ell0(p, beta) == max(p.ell, k)


@pytest.mark.parametrize(
    "name, beta, expected",
    [("geometric", F(0), 1), ("geometric", F("1/2"), 1), ("apery", F(0), 1)],
)
def test_start_index_examples(name, beta, expected):
    assert start_index_m(exponent_profile(form(name)), beta) == expected


@pytest.mark.parametrize("name", sorted(OPERATORS))
@pytest.mark.parametrize("beta", [F(0), F("1/2"), F("2/3"), F("1/7"), F(3)])
def test_start_index_avoids_zeros(name, beta):
    f = form(name)
    p = exponent_profile(f)
    m = start_index_m(p, beta)
    for n in range(m, m + 60):
        assert f.Q[0](-n - beta) != 0
        assert f.Q[-1](-n - beta) != 0


@pytest.mark.parametrize(
    "name, expected",
    [
        ("geometric", lambda: mp.mpf(1)),
        ("algebraic", lambda: 3 + 2 * mp.sqrt(2)),
        ("apery", lambda: 17 + 12 * mp.sqrt(2)),
    ],
)
def test_phi0_examples(name, expected):
    value = phi0(exponent_profile(form(name)), 128)
    with mp.workprec(256):
        assert 0 <= value - expected() < mp.mpf(2) ** -100


def test_phi0_refines_with_precision():
    p = exponent_profile(form("apery"))
    lo, hi = phi0(p, 96), phi0(p, 192)
    with mp.workprec(256):
        assert hi <= lo + mp.mpf(2) ** -48
        assert hi >= 17 + 12 * mp.sqrt(2)


def test_phi0_needs_nonconstant_chi():
    f = ThetaForm(u=1, omega=1, mu=1, Q=(Poly([0, 1]),))
    with pytest.raises(ValueError, match="polynomial solutions"):
        phi0(exponent_profile(f), 64)


def test_singular_height_sum_examples():
    assert singular_height_sum(exponent_profile(form("geometric")), 128) == 0
    value = singular_height_sum(exponent_profile(form("apery")), 128)
    with mp.workprec(256):
        assert 0 <= value - mp.log(17 + 12 * mp.sqrt(2)) < mp.mpf(2) ** -100


def test_singular_height_sum_is_subadditive_on_coprime_parts():
    def profile_with_chi(chi: Poly):
        # theta form with Q_j = chi_j * X so that the X coefficient column is chi
        qs = tuple(Poly([0, c]) for c in chi.coeffs)
        return exponent_profile(ThetaForm(u=1, omega=1, mu=1, Q=qs))

    a, b = Poly([1, -34, 1]), Poly([1, -6, 1]) * Poly([2, -1])
    ha = singular_height_sum(profile_with_chi(a), 128)
    hb = singular_height_sum(profile_with_chi(b), 128)
    hab = singular_height_sum(profile_with_chi(a * b), 128)
    with mp.workprec(192):
        assert hab <= ha + hb + mp.mpf(2) ** -90
