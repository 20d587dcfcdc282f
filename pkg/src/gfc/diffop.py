"""Linear differential operators with polynomial coefficients.

A :class:`DiffOp` is ``sum_k P_k(z) D^k`` with ``D = d/dz``.  The theta form
rewrites ``u z^(mu-omega) L`` as ``sum_j z^j Q_j(theta + j)`` with
``theta = z D`` and integer polynomials ``Q_j``; most invariants are read off
that form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import Poly, den, format_fraction, to_fraction

__all__ = [
    "DiffOp",
    "ThetaForm",
    "RatFunc",
    "InsufficientSeedsError",
    "to_theta_form",
    "from_theta_form",
    "theta_sum",
    "beta_shift",
    "invert_variable",
    "c_coefficient",
    "compose_for_tilde",
    "companion",
    "derived_matrices",
    "coefficient_recurrence",
    "generate_coefficients",
    "falling_factorial",
    "stirling2",
]


class InsufficientSeedsError(ValueError):
    """The recurrence hits an index where Q_0(n) = 0 and no seed was given."""

    def __init__(self, blocking: Sequence[int]):
        self.blocking = list(blocking)
        super().__init__(f"insufficient seeds: Q_0(n) = 0 at n = {self.blocking}")


# ---------------------------------------------------------------------------
# combinatorial tables


@lru_cache(maxsize=None)
def falling_factorial(k: int) -> Poly:
    """X (X-1) ... (X-k+1) as a polynomial in X."""
    p = Poly([1])
    for i in range(k):
        p = p * Poly([-i, 1])
    return p


@lru_cache(maxsize=None)
def stirling2(p: int, k: int) -> int:
    if p == k:
        return 1
    if k == 0 or k > p:
        return 0
    return k * stirling2(p - 1, k) + stirling2(p - 1, k - 1)


def c_coefficient(s: int, k: int) -> int:
    """Coefficient in (d/dz)^s = sum_k (-1)^s c(s,k) u^(s+k) (d/du)^k, z = 1/u."""
    if not 1 <= k <= s:
        raise ValueError("c_coefficient needs 1 <= k <= s")
    return math.comb(s - 1, s - k) * math.factorial(s) // math.factorial(k)


# ---------------------------------------------------------------------------
# operators


class DiffOp:
    """Differential operator ``sum_k coeffs[k](z) * D^k``.

    Operators compare equal when their coefficient lists agree exactly.
    ``a @ b`` is composition (apply ``b`` first).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        c = [p if isinstance(p, Poly) else Poly(p) for p in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs: tuple[Poly, ...] = tuple(c)

    @classmethod
    def from_lists(cls, rows) -> "DiffOp":
        return cls([Poly(r) for r in rows])

    @classmethod
    def d(cls, k: int = 1) -> "DiffOp":
        return cls([Poly()] * k + [Poly([1])])

    @classmethod
    def multiplier(cls, p) -> "DiffOp":
        return cls([p if isinstance(p, Poly) else Poly([p])])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.coeffs), default=-1)

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1]

    def coeff(self, k: int) -> Poly:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Poly()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffOp) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self) -> "DiffOp":
        return DiffOp([-p for p in self.coeffs])

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def left_mul(self, p) -> "DiffOp":
        """Multiply on the left by a polynomial or scalar."""
        return DiffOp([p * c for c in self.coeffs])

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        # Leibniz: D^i * B = sum_t binom(i, t) B^(t) D^(i-t)
        if self.is_zero() or other.is_zero():
            return DiffOp([])
        out = [Poly()] * (self.order + other.order + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for k, b in enumerate(other.coeffs):
                deriv = b
                for t in range(i + 1):
                    if not deriv:
                        break
                    out[i - t + k] = out[i - t + k] + a * deriv * math.comb(i, t)
                    deriv = deriv.deriv()
        return DiffOp(out)

    def divide_left(self, p: Poly) -> "DiffOp":
        """Exact left division of every coefficient by ``p``."""
        return DiffOp([c / p for c in self.coeffs])

    def apply_series(self, a: Sequence) -> list[Fraction]:
        """Coefficients of L(sum a_k z^k) that the truncation determines.

        With ``a`` of length N+1 the result has the coefficients of z^0..z^(N-order).
        """
        n_top = len(a) - 1 - self.order
        out = [Fraction(0)] * max(n_top + 1, 0)
        for k, p in enumerate(self.coeffs):
            # k-th derivative, coefficients of z^i for i <= N - k
            dk = [to_fraction(a[i + k]) * math.perm(i + k, k) for i in range(len(a) - k)]
            for t, c in enumerate(p.coeffs):
                if not c:
                    continue
                for n in range(t, n_top + 1):
                    out[n] += c * dk[n - t]
        return out

    def apply_laurent(self, f: dict[int, Fraction]) -> dict[int, Fraction]:
        """Apply to a Laurent polynomial given as ``{exponent: coefficient}``."""
        out: dict[int, Fraction] = {}
        for k, p in enumerate(self.coeffs):
            for e, c in f.items():
                fall = 1
                for i in range(k):
                    fall *= e - i
                if not fall:
                    continue
                for t, pc in enumerate(p.coeffs):
                    if pc:
                        key = e - k + t
                        out[key] = out.get(key, Fraction(0)) + pc * c * fall
        return {e: c for e, c in out.items() if c}

    def to_str(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, p in enumerate(self.coeffs):
            if not p:
                continue
            dpart = "" if k == 0 else ("D" if k == 1 else f"D^{k}")
            body = f"({p.to_str('z')})"
            terms.append(body if not dpart else f"{body}*{dpart}")
        return " + ".join(terms)

    __str__ = to_str

    def __repr__(self) -> str:
        return f"DiffOp({self.to_str()})"

    def to_json(self) -> dict:
        return {"dz_coeffs": [p.to_json() for p in self.coeffs]}


def _theta_poly_to_dz(r: Poly, shift: int) -> list[Poly]:
    """z^shift * r(theta) expressed as coefficients of D^k."""
    out: dict[int, Fraction] = {}
    for p, c in enumerate(r.coeffs):
        if not c:
            continue
        for k in range(p + 1):
            s = stirling2(p, k)
            if s:
                out[k] = out.get(k, Fraction(0)) + c * s
    if not out:
        return []
    top = max(out)
    return [Poly.monomial(k + shift, out[k]) if k in out else Poly() for k in range(top + 1)]


@dataclass(frozen=True)
class ThetaForm:
    """Normalized data ``u z^(mu-omega) L = sum_j z^j Q_j(theta + j)``."""

    u: int
    omega: int
    mu: int
    Q: tuple[Poly, ...]

    @property
    def ell(self) -> int:
        return len(self.Q) - 1

    @property
    def chi(self) -> Poly:
        """sum_j q_{j,mu} z^j, the theta^mu coefficient."""
        return Poly([q.coeff(self.mu) for q in self.Q])

    def to_json(self) -> dict:
        return {
            "u": self.u,
            "omega": self.omega,
            "mu": self.mu,
            "ell": self.ell,
            "Q": [q.to_json() for q in self.Q],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ThetaForm":
        qs = tuple(Poly(row) for row in data["Q"])
        mu = int(data.get("mu", max(q.degree for q in qs)))
        return cls(int(data.get("u", 1)), int(data.get("omega", mu)), mu, qs)


def to_theta_form(op: DiffOp) -> ThetaForm:
    if op.is_zero():
        raise ValueError("the zero operator has no theta form")
    mu = op.order
    # L = sum_e z^e R_e(theta) using z^k D^k = X(X-1)...(X-k+1) at X = theta
    rows: dict[int, Poly] = {}
    for k, p in enumerate(op.coeffs):
        ff = falling_factorial(k)
        for t, c in enumerate(p.coeffs):
            if c:
                e = t - k
                rows[e] = rows.get(e, Poly()) + ff * c
    rows = {e: r for e, r in rows.items() if r}
    e_min, e_max = min(rows), max(rows)
    omega = mu + e_min
    qs = [rows.get(e_min + j, Poly()).shift(-j) for j in range(e_max - e_min + 1)]
    u = den([c for q in qs for c in q.coeffs])
    qs = tuple(q * u for q in qs)
    return ThetaForm(u=u, omega=omega, mu=mu, Q=qs)


def theta_sum(form: ThetaForm) -> DiffOp:
    """The operator sum_j z^j Q_j(theta + j) in d/dz form."""
    acc = DiffOp([])
    for j, q in enumerate(form.Q):
        acc = acc + DiffOp(_theta_poly_to_dz(q.shift(j), j))
    return acc


def from_theta_form(form: ThetaForm) -> DiffOp:
    """Recover L from its normalized theta form.

    Raises ArithmeticError if the stored normalization does not divide the
    theta sum.
    """
    total = theta_sum(form)
    scale = Poly.monomial(form.mu - form.omega, form.u)
    return total.divide_left(scale)


def beta_shift(form: ThetaForm, beta) -> ThetaForm:
    """Theta form of the operator for z^beta F: Q_j -> den(beta)^mu Q_j(X - beta)."""
    beta = to_fraction(beta)
    if beta.denominator == 1 and beta <= 0 and beta != 0:
        raise ValueError("beta must not be a negative integer")
    scale = beta.denominator ** form.mu
    qs = tuple(q.shift(-beta) * scale for q in form.Q)
    shifted = ThetaForm(u=1, omega=form.mu, mu=form.mu, Q=qs)
    lowest = min(p.valuation() for p in theta_sum(shifted).coeffs if p)
    return ThetaForm(u=1, omega=form.mu - lowest, mu=form.mu, Q=qs)


def invert_variable(op: DiffOp) -> DiffOp:
    """Operator in u = 1/z, cleared by the least power of u making it polynomial."""
    mu = op.order
    # Laurent coefficients {power of u: value} for each D_u^k
    laurent: list[dict[int, Fraction]] = [dict() for _ in range(mu + 1)]

    def add(k: int, scale: Fraction, upow: int, p: Poly):
        for t, c in enumerate(p.coeffs):
            if c:
                e = upow - t
                laurent[k][e] = laurent[k].get(e, Fraction(0)) + scale * c

    add(0, Fraction(1), 0, op.coeff(0))
    for k in range(1, mu + 1):
        for s in range(k, mu + 1):
            add(k, Fraction((-1) ** s * c_coefficient(s, k)), s + k, op.coeff(s))
    laurent = [{e: c for e, c in row.items() if c} for row in laurent]
    lowest = min((e for row in laurent for e in row), default=0)
    lift = max(0, -lowest)
    rows = []
    for row in laurent:
        top = max((e for e in row), default=-1)
        coeffs = [Fraction(0)] * (top + lift + 1)
        for e, c in row.items():
            coeffs[e + lift] += c
        rows.append(Poly(coeffs))
    return DiffOp(rows)


def compose_for_tilde(form_beta: ThetaForm, ell: int, m: int, form: str = "theta_sum") -> DiffOp:
    """(d/dz)^ell o z^(m-1) o L_beta.

    ``form="theta_sum"`` takes L_beta as sum_j z^j Q_j(theta + j) itself;
    ``form="reduced"`` first strips the common power of z.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if form == "theta_sum":
        base = theta_sum(form_beta)
    elif form == "reduced":
        base = from_theta_form(form_beta)
    else:
        raise ValueError(f"unknown form {form!r}")
    return DiffOp.d(ell) @ base.left_mul(Poly.monomial(m - 1))


# ---------------------------------------------------------------------------
# rational functions and the companion system


class RatFunc:
    """Reduced quotient of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        den = Poly([1]) if den is None else den
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly([1])
            return
        g = num.gcd(den)
        num, den = num // g, den // g
        lc = den.lead
        self.num, self.den = num / lc, den / lc

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def deriv(self) -> "RatFunc":
        return RatFunc(self.num.deriv() * self.den - self.num * self.den.deriv(), self.den * self.den)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.num.to_str()} / {self.den.to_str()})"


def _normalize_clearing(p: Poly) -> Poly:
    """Integer primitive multiple whose lowest nonzero coefficient is positive."""
    d = p.denominator()
    ints = [int(c * d) for c in p.coeffs]
    g = math.gcd(*ints)
    low = ints[p.valuation()]
    sign = 1 if low > 0 else -1
    return Poly([Fraction(sign * x, g) for x in ints])


def companion(op: DiffOp):
    """Companion system y' = G y of ``op`` with the clearing polynomial.

    Returns ``(G, T, t)`` where ``G`` is a list of rows of :class:`RatFunc`,
    ``T`` the least common denominator of the entries normalized to a
    primitive integer polynomial with positive lowest coefficient, and
    ``t = 1 + max(deg(T G), deg T)``.
    """
    mu = op.order
    if mu < 1:
        raise ValueError("companion system needs order >= 1")
    zero, one = RatFunc(Poly()), RatFunc(Poly([1]))
    g = [[zero] * mu for _ in range(mu)]
    for i in range(mu - 1):
        g[i][i + 1] = one
    for k in range(mu):
        g[mu - 1][k] = RatFunc(-op.coeff(k), op.leading)
    lcm = Poly([1])
    for row in g:
        for entry in row:
            lcm = lcm * (entry.den // lcm.gcd(entry.den))
    t_poly = _normalize_clearing(lcm)
    tg = matrix_times_poly(g, t_poly)
    deg_tg = max(p.degree for row in tg for p in row)
    return g, t_poly, 1 + max(deg_tg, t_poly.degree)


def matrix_times_poly(g, p: Poly) -> list[list[Poly]]:
    """Entrywise p * G, asserting the result is polynomial."""
    out = []
    for row in g:
        new_row = []
        for entry in row:
            new_row.append((entry.num * p) / entry.den)
        out.append(new_row)
    return out


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Poly()) for j in range(n)] for i in range(n)]


def derived_matrices(g, t_poly: Poly, s_max: int) -> list[list[list[Poly]]]:
    """Polynomial matrices H_m = T^m G_m for m = 0..s_max.

    G_0 = Id and G_{m+1} = G_m G + G_m'.
    """
    n = len(g)
    tg = matrix_times_poly(g, t_poly)
    dt = t_poly.deriv()
    h = [[Poly([1]) if i == j else Poly() for j in range(n)] for i in range(n)]
    out = [h]
    for m in range(s_max):
        prod = _matmul(h, tg)
        h = [
            [prod[i][j] + t_poly * h[i][j].deriv() - dt * h[i][j] * m for j in range(n)]
            for i in range(n)
        ]
        out.append(h)
    return out


# ---------------------------------------------------------------------------
# Taylor coefficient recurrence


@dataclass(frozen=True)
class CoefficientRecurrence:
    """sum_j Q_j(n) A_(n-j) = 0 for every n >= 0 (A_k = 0 for k < 0)."""

    Q: tuple[Poly, ...]

    def exceptional_indices(self, upto: int) -> list[int]:
        """Indices n <= upto where Q_0(n) = 0 and a seed is required."""
        return [n for n in range(upto + 1) if self.Q[0](n) == 0]

    def residual(self, a: Sequence[Fraction], n: int) -> Fraction:
        return sum(
            (q(n) * a[n - j] for j, q in enumerate(self.Q) if n - j >= 0),
            Fraction(0),
        )


def coefficient_recurrence(form: ThetaForm) -> CoefficientRecurrence:
    return CoefficientRecurrence(form.Q)


def generate_coefficients(form: ThetaForm, seeds: Sequence, n_max: int) -> list[Fraction]:
    """Taylor coefficients A_0..A_{n_max} of the solution fixed by ``seeds``.

    Every seed is checked against the recurrence.  Missing seeds at an index
    where Q_0 vanishes raise :class:`InsufficientSeedsError`.
    """
    rec = coefficient_recurrence(form)
    a = [to_fraction(s) for s in seeds][: n_max + 1]
    q0 = form.Q[0]
    for n, _ in enumerate(a):
        if rec.residual(a, n) != 0:
            raise ValueError(f"seed A_{n} = {format_fraction(a[n])} is inconsistent with the recurrence")
    blocking = [n for n in range(len(a), n_max + 1) if q0(n) == 0]
    if blocking:
        raise InsufficientSeedsError(blocking)
    for n in range(len(a), n_max + 1):
        rest = sum((q(n) * a[n - j] for j, q in enumerate(form.Q) if j and n - j >= 0), Fraction(0))
        a.append(-rest / q0(n))
    return a
