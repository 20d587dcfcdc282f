"""Exponents at 0 and infinity and the quantities derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .diffop import ThetaForm
from .exact import (
    Poly,
    format_fraction,
    mahler_log,
    max_root_modulus,
    rational_roots,
    squarefree_primitive,
    to_fraction,
)

__all__ = [
    "NotSplitError",
    "ExponentProfile",
    "exponent_profile",
    "exceptional_set",
    "ell0",
    "start_index_m",
    "phi0",
    "singular_height_sum",
]


class NotSplitError(ValueError):
    """Q_0 or Q_ell has a root outside Q."""


@dataclass(frozen=True)
class ExponentProfile:
    """Factorizations Q_0 = gamma0 prod(X - e_i), Q_ell = gamma_ell prod(X + f_i - ell)."""

    gamma0: Fraction
    e: tuple[Fraction, ...]
    gamma_ell: Fraction
    f: tuple[Fraction, ...]
    chi: Poly
    ell: int
    mu: int

    def q0(self) -> Poly:
        return Poly.from_roots(self.e, self.gamma0)

    def q_ell(self) -> Poly:
        return Poly.from_roots([self.ell - fi for fi in self.f], self.gamma_ell)

    def to_json(self) -> dict:
        return {
            "gamma0": format_fraction(self.gamma0),
            "e": [format_fraction(x) for x in self.e],
            "gamma_ell": format_fraction(self.gamma_ell),
            "f": [format_fraction(x) for x in self.f],
            "chi": self.chi.to_json(),
            "ell": self.ell,
            "mu": self.mu,
        }


def _split(q: Poly, which: str) -> list[Fraction]:
    roots, rest = rational_roots(q)
    if rest.degree > 0:
        raise NotSplitError(f"{which} does not split over Q: leftover factor {rest.to_str('X')}")
    out = []
    for r, mult in sorted(roots):
        out.extend([r] * mult)
    return out


def exponent_profile(form: ThetaForm) -> ExponentProfile:
    if form.ell < 1:
        raise ValueError("ell = 0: the operator only has polynomial solutions")
    q0, ql = form.Q[0], form.Q[-1]
    e = _split(q0, "Q_0")
    rho = _split(ql, "Q_ell")
    f = sorted(form.ell - r for r in rho)
    return ExponentProfile(
        gamma0=q0.lead,
        e=tuple(e),
        gamma_ell=ql.lead,
        f=tuple(f),
        chi=form.chi,
        ell=form.ell,
        mu=form.mu,
    )


def _is_natural(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def exceptional_set(profile: ExponentProfile, beta) -> list[Fraction]:
    """Exponents f at infinity with f - beta a nonnegative integer."""
    beta = to_fraction(beta)
    return [fi for fi in profile.f if _is_natural(fi - beta)]


def ell0(profile: ExponentProfile, beta) -> int:
    beta = to_fraction(beta)
    candidates = [profile.ell] + [int(fi - beta) for fi in exceptional_set(profile, beta)]
    return max(candidates)


def start_index_m(profile: ExponentProfile, beta) -> int:
    """Smallest m >= 1 with Q_0(-n-beta) and Q_ell(-n-beta) nonzero for n >= m."""
    beta = to_fraction(beta)
    m = 1
    for ei in profile.e:
        s = ei + beta
        if s.denominator == 1:
            m = max(m, int(-s) + 1)
    for fi in profile.f:
        if _is_natural(fi - beta):
            m = max(m, int(fi - profile.ell - beta) + 1)
    return m


def phi0(profile: ExponentProfile, prec: int = 192):
    """Certified upper bound on the largest root modulus of chi."""
    if profile.chi.degree < 1:
        raise ValueError("chi is constant: ell = 0, polynomial solutions only")
    return max_root_modulus(profile.chi, prec)


def singular_height_sum(profile: ExponentProfile, prec: int = 192):
    """Sum of the heights of the distinct nonzero roots of chi (upper bound)."""
    sq = squarefree_primitive(profile.chi)
    if sq.degree < 1:
        return mp.mpf(0)
    value, err = mahler_log(sq, prec)
    with mp.workprec(prec):
        return value + err
