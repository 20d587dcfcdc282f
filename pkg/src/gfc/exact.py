"""Exact rationals, dense polynomials and number-theoretic helpers.

Rationals are plain :class:`fractions.Fraction` values.  Polynomials are
immutable :class:`Poly` objects holding Fraction coefficients, lowest degree
first.  Numerical work (root moduli, Mahler measures) uses mpmath at an
explicitly requested binary precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

__all__ = [
    "Poly",
    "to_fraction",
    "den",
    "lcm_upto",
    "totient_harmonic",
    "pochhammer",
    "rational_roots",
    "squarefree_primitive",
    "squarefree_decomposition",
    "primitive_part",
    "certified_roots",
    "max_root_modulus",
    "min_root_modulus",
    "mahler_log",
    "pochhammer_quotient_denominators",
    "RootFindingError",
    "format_fraction",
]


class RootFindingError(ArithmeticError):
    """Raised when numerical root isolation does not converge."""

    def __init__(self, message: str, poly: "Poly"):
        super().__init__(f"{message}: {poly!r}")
        self.poly = poly


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Poly:
    """Dense univariate polynomial with rational coefficients.

    ``Poly([a0, a1, a2])`` is ``a0 + a1*X + a2*X^2``.  Trailing zeros are
    stripped so the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    # construction helpers
    @classmethod
    def constant(cls, value) -> "Poly":
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, value=1) -> "Poly":
        return cls([0] * degree + [value])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-to_fraction(r), 1])
        return p

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def valuation(self) -> int:
        """Index of the lowest nonzero coefficient (-1 for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # arithmetic
    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor) -> "Poly":
        return self * to_fraction(factor)

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c / other for c in self.coeffs])
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __divmod__(self, other: "Poly"):
        other = _as_poly(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Poly(), Poly(rem)
        quot = [Fraction(0)] * (len(rem) - dq)
        inv_lead = 1 / other.lead
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lead
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    # evaluation and calculus
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, x):
        """Horner evaluation with coefficients converted to mpmath numbers."""
        acc = mp.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mp.mpf(c.numerator) / c.denominator
        return acc

    def deriv(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, a) -> "Poly":
        """Return the polynomial X -> p(X + a)."""
        a = to_fraction(a)
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * Poly([a, 1]) + Poly([c])
        return result

    def compose(self, other: "Poly") -> "Poly":
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * other + Poly([c])
        return result

    def reverse(self) -> "Poly":
        """X^deg p(1/X), with leading/trailing zeros handled by stripping."""
        return Poly(tuple(reversed(self.coeffs)))

    def shift_down(self, k: int) -> "Poly":
        """Divide by X^k, requiring the low coefficients to vanish."""
        if any(self.coeffs[:k]):
            raise ArithmeticError(f"polynomial not divisible by X^{k}")
        return Poly(self.coeffs[k:])

    def shift_up(self, k: int) -> "Poly":
        return Poly([0] * k + list(self.coeffs)) if self.coeffs else Poly()

    def monic(self) -> "Poly":
        return self / self.lead if self else self

    def denominator(self) -> int:
        return den(self.coeffs) if self.coeffs else 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def __repr__(self) -> str:
        return f"Poly([{', '.join(format_fraction(c) for c in self.coeffs)}])"

    def to_str(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = format_fraction(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{format_fraction(mag)}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    __str__ = to_str

    def to_json(self) -> list[str]:
        return [format_fraction(c) for c in self.coeffs]


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly([value])
    return NotImplemented


def primitive_part(p: Poly) -> Poly:
    """Integer polynomial with content 1 and positive leading coefficient."""
    if not p:
        return p
    d = p.denominator()
    ints = [int(c * d) for c in p.coeffs]
    g = reduce(math.gcd, ints)
    sign = 1 if ints[-1] > 0 else -1
    return Poly([Fraction(sign * x, g) for x in ints])


# ---------------------------------------------------------------------------
# denominators and arithmetic functions


def den(xs: Iterable) -> int:
    """Least common denominator of a nonempty collection of rationals."""
    items = [to_fraction(x) for x in xs]
    if not items:
        raise ValueError("den() needs at least one value")
    return reduce(math.lcm, (x.denominator for x in items), 1)


def lcm_upto(n: int) -> int:
    if n < 1:
        raise ValueError("lcm_upto needs n >= 1")
    return reduce(math.lcm, range(1, n + 1), 1)


def totient_harmonic(n: int) -> Fraction:
    """(N / phi(N)) times the sum of 1/j over 1 <= j <= N coprime to N."""
    if n < 1:
        raise ValueError("totient_harmonic needs N >= 1")
    coprime = [j for j in range(1, n + 1) if math.gcd(j, n) == 1]
    return Fraction(n, len(coprime)) * sum((Fraction(1, j) for j in coprime), Fraction(0))


def pochhammer(x, n: int):
    """Rising factorial x(x+1)...(x+n-1); works for Fractions and mpmath numbers."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    if not isinstance(x, (int, Fraction)) and not isinstance(x, str):
        acc = mp.mpf(1)
        for i in range(n):
            acc *= x + i
        return acc
    x = to_fraction(x)
    acc = Fraction(1)
    for i in range(n):
        acc *= x + i
        if not acc:
            break
    return acc


def pochhammer_quotient_denominators(alpha, beta, n_max: int) -> list[int]:
    """Cumulative common denominators of (alpha)_n / (beta)_n for n = 0..n_max.

    Entry n is den((alpha)_0/(beta)_0, ..., (alpha)_n/(beta)_n).
    """
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    for v, name in ((alpha, "alpha"), (beta, "beta")):
        if v.denominator == 1 and v <= 0:
            raise ValueError(f"{name} must not be a non-positive integer")
    out, q, acc = [], Fraction(1), 1
    for n in range(n_max + 1):
        if n:
            q *= (alpha + n - 1) / (beta + n - 1)
        acc = math.lcm(acc, q.denominator)
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# exact root structure


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: Poly) -> tuple[list[tuple[Fraction, int]], Poly]:
    """Rational roots of ``p`` with multiplicities and the cofactor.

    The cofactor has no rational root and satisfies
    ``p == cofactor * prod((X - r)**m)``.
    """
    if not p:
        raise ValueError("rational_roots of the zero polynomial")
    roots: list[tuple[Fraction, int]] = []
    rest = p
    v = rest.valuation()
    if v:
        roots.append((Fraction(0), v))
        rest = rest.shift_down(v)
    if rest.degree >= 1:
        prim = primitive_part(rest // rest.gcd(rest.deriv()))
        ints = [int(c) for c in prim.coeffs]
        cands = set()
        for a in _divisors(ints[0]):
            for b in _divisors(ints[-1]):
                cands.add(Fraction(a, b))
                cands.add(Fraction(-a, b))
        for r in sorted(cands):
            if prim(r) != 0:
                continue
            lin = Poly([-r, 1])
            mult = 0
            while rest.degree >= 1:
                q, rem = divmod(rest, lin)
                if rem:
                    break
                rest, mult = q, mult + 1
            roots.append((r, mult))
    return roots, rest


def squarefree_primitive(p: Poly) -> Poly:
    """Squarefree integer polynomial with the nonzero roots of ``p``, each once."""
    if not p:
        raise ValueError("squarefree_primitive of the zero polynomial")
    q = p.shift_down(p.valuation())
    if q.degree >= 1:
        q = q // q.gcd(q.deriv())
    return primitive_part(q)


# ---------------------------------------------------------------------------
# certified numerics on roots


def _mp_rational(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


def certified_roots(p: Poly, prec: int) -> list[tuple[object, object]]:
    """Approximate roots of a squarefree polynomial with inclusion radii.

    Returns pairs ``(z_i, r_i)`` such that the discs ``|z - z_i| <= r_i`` are
    pairwise disjoint and each holds exactly one root.  The radii come from the
    a posteriori bound ``deg * |p(z_i)| / |lead * prod_{j != i}(z_i - z_j)|``.
    Values are mpmath numbers at ``prec + 32`` bits.
    """
    if p.degree < 1:
        return []
    work = max(prec, 64) + 32
    with mp.workprec(work):
        if p.degree == 1:
            return [(_mp_rational(-p.coeffs[0] / p.coeffs[1]), mp.mpf(0))]
        coeffs = [_mp_rational(c) for c in reversed(p.coeffs)]
        try:
            approx = mpmath.polyroots(coeffs, maxsteps=400 + 20 * p.degree, extraprec=work)
        except mpmath.libmp.NoConvergence as exc:
            raise RootFindingError("root iteration did not converge", p) from exc
        deg = p.degree
        lead = _mp_rational(p.lead)
        out = []
        for i, zi in enumerate(approx):
            prod = lead
            for j, zj in enumerate(approx):
                if i != j:
                    prod *= zi - zj
            if prod == 0:
                raise RootFindingError("coincident root approximations", p)
            val = mp.mpf(0)
            for c in coeffs:
                val = val * zi + c
            # pad for rounding in the evaluation itself
            radius = deg * abs(val) / abs(prod) + mp.mpf(2) ** (-(work - 8)) * (1 + abs(zi))
            out.append((zi, radius))
        for i in range(deg):
            for j in range(i + 1, deg):
                if abs(out[i][0] - out[j][0]) <= out[i][1] + out[j][1]:
                    raise RootFindingError("inclusion discs overlap", p)
        return out


def max_root_modulus(p: Poly, prec: int):
    """Certified upper bound on the largest root modulus of ``p``."""
    sq = squarefree_primitive(p)
    if sq.degree < 1:
        if p.valuation() > 0:
            return mp.mpf(0)
        raise ValueError("constant polynomial has no roots")
    with mp.workprec(max(prec, 64) + 32):
        return max(abs(z) + r for z, r in certified_roots(sq, prec))


def min_root_modulus(p: Poly, prec: int):
    """Certified lower bound on the smallest nonzero root modulus of ``p``."""
    sq = squarefree_primitive(p)
    if sq.degree < 1:
        raise ValueError("polynomial has no nonzero roots")
    with mp.workprec(max(prec, 64) + 32):
        return min(max(abs(z) - r, mp.mpf(0)) for z, r in certified_roots(sq, prec))


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree ``a_i`` with ``p = lead * prod a_i^i``."""
    if p.degree < 1:
        return []
    a = p.monic()
    b = a.deriv()
    c = a.gcd(b)
    w = a // c
    y = b // c
    out = []
    i = 1
    while w.degree >= 1:
        z = y - w.deriv()
        g = w.gcd(z)
        if g.degree >= 1:
            out.append((g, i))
        w, y = w // g, z // g
        i += 1
    return out


def mahler_log(p: Poly, prec: int):
    """log of the Mahler measure of a nonzero polynomial with p(0) != 0.

    Repeated roots are handled through the squarefree decomposition.
    Returns ``(value, error)``: the midpoint estimate and an upper bound on
    its absolute error.  ``value + error`` is a safe upper bound.
    """
    if p.degree < 1:
        raise ValueError("mahler_log needs a nonconstant polynomial")
    if p.coeff(0) == 0:
        raise ValueError("mahler_log needs p(0) != 0")
    with mp.workprec(max(prec, 64) + 32):
        value = mp.log(abs(_mp_rational(p.lead)))
        err = mp.mpf(0)
        for factor, mult in squarefree_decomposition(p):
            for z, r in certified_roots(factor, prec):
                a = abs(z)
                value += mult * mp.log(max(mp.mpf(1), a))
                hi = mp.log(max(mp.mpf(1), a + r))
                lo = mp.log(max(mp.mpf(1), a - r))
                err += mult * (hi - lo)
        return +value, +err
