"""Galochkin denominators, size estimates and the size bound Lambda_0."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import mp

from .diffop import derived_matrices
from .exact import den, to_fraction, totient_harmonic
from .invariants import ExponentProfile, singular_height_sum

__all__ = [
    "SizeEstimate",
    "SigmaBarBound",
    "galochkin_sequence",
    "sigma_empirical",
    "sigma_bar_empirical",
    "sigma_bar_hypergeometric",
    "sigma_bar_integral",
    "chudnovsky_bound",
    "nilsson_gevrey_sigma",
    "lambda0",
    "LAMBDA0_VARIANTS",
]

LAMBDA0_VARIANTS = ("statement", "proof")


@dataclass(frozen=True)
class SizeEstimate:
    q_log_slopes: tuple[tuple[int, float], ...]
    sigma_bound: object
    method: str
    certified: bool = False


@dataclass(frozen=True)
class SigmaBarBound:
    arithmetic_part: object
    archimedean_part: object
    method: str = "user_supplied"
    notes: dict = field(default_factory=dict)

    @property
    def total(self):
        return self.arithmetic_part + self.archimedean_part


def galochkin_sequence(g, t_poly, s_max: int) -> list[int]:
    """q_0..q_{s_max}: q_s is the common denominator of T^m G_m / m! for m <= s."""
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    out, acc = [], 1
    for m, h in enumerate(derived_matrices(g, t_poly, s_max)):
        fact = math.factorial(m)
        for row in h:
            for p in row:
                for c in p.coeffs:
                    acc = math.lcm(acc, (c / fact).denominator)
        out.append(acc)
    return out


def sigma_empirical(g, t_poly, s_max: int = 30) -> SizeEstimate:
    """Heuristic size: largest log(q_s)/s over the last third of s <= s_max."""
    qs = galochkin_sequence(g, t_poly, s_max)
    slopes = tuple((s, math.log(qs[s]) / s) for s in range(1, s_max + 1))
    tail = slopes[len(slopes) * 2 // 3 :] or slopes
    return SizeEstimate(slopes, mp.mpf(max(v for _, v in tail)), "empirical")


def sigma_bar_empirical(coeffs: Sequence, radius_hint=None) -> SigmaBarBound:
    """Estimate sigma-bar from Taylor coefficients.

    The arithmetic part is the largest log den(A_0..A_s)/s over the second
    half of the range; the archimedean part is max(0, -log R) with R taken
    from ``radius_hint`` or a ratio test on the last coefficients.
    """
    a = [to_fraction(x) for x in coeffs]
    n = len(a) - 1
    if n < 50:
        raise ValueError("sigma_bar_empirical needs at least 51 coefficients")
    acc, best = 1, 0.0
    for s, x in enumerate(a):
        acc = math.lcm(acc, x.denominator)
        if s >= n // 2 and s:
            best = max(best, math.log(acc) / s)
    notes = {}
    if radius_hint is None:
        nonzero = [(k, x) for k, x in enumerate(a) if x]
        (k1, x1), (k2, x2) = nonzero[-2], nonzero[-1]
        ratio = abs(x1 / x2)
        radius = mp.mpf(ratio.numerator) / ratio.denominator
        radius = radius ** (mp.mpf(1) / (k2 - k1))
        notes["radius_source"] = "ratio_test"
    else:
        radius = mp.mpf(radius_hint)
        notes["radius_source"] = "hint"
    notes["radius"] = radius
    arch = max(mp.mpf(0), -mp.log(radius))
    return SigmaBarBound(mp.mpf(best), arch, "empirical", notes)


def sigma_bar_hypergeometric(a: Sequence, b: Sequence) -> SigmaBarBound:
    """2 nu log den(a) + (nu - 1) den(b) for the generalized hypergeometric series."""
    a = [to_fraction(x) for x in a]
    b = [to_fraction(x) for x in b]
    for x in a + b:
        if x.denominator == 1 and x <= 0:
            raise ValueError("hypergeometric parameters must avoid non-positive integers")
    nu = len(a)
    arith = 2 * nu * mp.log(den(a)) + (nu - 1) * (den(b) if b else 1)
    return SigmaBarBound(mp.mpf(arith), mp.mpf(0), "hypergeometric")


def sigma_bar_integral(radius) -> SigmaBarBound:
    """Integer Taylor coefficients: only the archimedean part max(0, -log R)."""
    radius = mp.mpf(radius)
    return SigmaBarBound(mp.mpf(0), max(mp.mpf(0), -mp.log(radius)), "integral", {"radius": radius})


def chudnovsky_bound(mu: int, t: int, sigma_bar):
    if mu < 1 or t < 1:
        raise ValueError("chudnovsky_bound needs mu >= 1 and t >= 1")
    factor = 6 * t - 1 if mu == 1 else 5 * mu * mu * t - 1 - (mu - 1) * t
    return factor * mp.mpf(sigma_bar)


def nilsson_gevrey_sigma(sigma_l, denominator: int):
    """Size bound for the operator of z^beta F with den(beta) = denominator."""
    if denominator < 1:
        raise ValueError("denominator must be >= 1")
    return (1 + mp.log(2)) * max(mp.mpf(1), 2 * mp.log(denominator), mp.mpf(sigma_l))


def lambda0(profile: ExponentProfile, beta, sigma_l, variant: str = "statement", prec: int = 192):
    """Upper bound on the denominator growth rate of the recurrence basis."""
    if variant not in LAMBDA0_VARIANTS:
        raise ValueError(f"variant must be one of {LAMBDA0_VARIANTS}")
    if profile.ell < 1:
        raise ValueError("lambda0 needs ell >= 1")
    beta = to_fraction(beta)
    n = profile.mu + profile.ell
    big_m = max(mp.mpf(1), 2 * mp.log(beta.denominator), mp.mpf(sigma_l))
    if variant == "statement":
        lead = n * n * (profile.ell + 1 + mp.log(2)) * big_m
    else:
        lead = n * n * (profile.ell + (1 + mp.log(2)) * big_m)
    harmonic = totient_harmonic(den(profile.f or [0]) * beta.denominator)
    heights = singular_height_sum(profile, prec)
    return (
        lead
        + n * n
        + n
        - 1
        + n * (n - 1) * mp.mpf(harmonic.numerator) / harmonic.denominator
        + (n * n + 1) * heights
    )
