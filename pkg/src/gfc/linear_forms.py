"""Weighted series F_{beta,n}^{[s]}, the auxiliary series T_{S,r,n} and their identities.

For F(z) = sum A_k z^k,

    F_{beta,n}^{[s]}(z) = sum_k A_k z^(k+n) / (k+beta+n)^s
    T_{S,r,n}(z)        = sum_k R_n(k) A_k z^(-k)
    R_n(X)              = n!^(S-r) X(X-1)...(X-rn+1) / prod_{j=1}^{n+1} (X+beta+j)^S

and T is a combination of z^j F_{beta,j}^{[s]}(1/z) with the partial
fraction coefficients of R_n.
"""

from __future__ import annotations

import math
import statistics
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from mpmath import mp

from .diffop import ThetaForm, generate_coefficients
from .exact import Poly, lcm_upto, to_fraction
from .invariants import ell0, exponent_profile

__all__ = [
    "DivergenceError",
    "Approx",
    "SeriesContext",
    "PartialFractionTable",
    "partial_fractions",
    "integrality_violations",
    "eval_F",
    "eval_T_direct",
    "verify_linear_form",
    "LinearFormCheck",
    "inhomogeneous_terms",
    "inhomogeneous_recurrence_check",
    "Reduction",
    "reduce_to_basis",
    "decay_diagnostics",
    "DecayDiagnostics",
]


class DivergenceError(ArithmeticError):
    """The evaluation point lies outside the disc of convergence."""


class Approx(NamedTuple):
    value: object
    error: object


def _mpq(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


def _mp_point(x):
    if isinstance(x, (int, Fraction, str)):
        return _mpq(to_fraction(x))
    return mp.mpmathify(x)


class SeriesContext:
    """Taylor coefficients of F with the shift beta and a radius lower bound.

    Coefficients come either from an explicit list or, when ``form`` and
    ``seeds`` are given, from the recurrence, extended on demand.
    """

    def __init__(
        self,
        beta=0,
        radius_hint=1,
        prec: int = 192,
        coeffs: Sequence | None = None,
        form: ThetaForm | None = None,
        seeds: Sequence | None = None,
    ):
        self.beta = to_fraction(beta)
        self.radius_hint = _mp_point(radius_hint)
        self.prec = prec
        self.form = form
        if coeffs is not None:
            self._coeffs = [to_fraction(c) for c in coeffs]
            self._extendable = False
        elif form is not None and seeds is not None:
            self._coeffs = generate_coefficients(form, seeds, max(len(seeds) - 1, 0) + 8)
            self._extendable = True
        else:
            raise ValueError("give either coeffs or (form, seeds)")
        self._mp_cache: dict[tuple[int, int], object] = {}

    def coefficient(self, k: int) -> Fraction:
        if k >= len(self._coeffs):
            if not self._extendable:
                raise IndexError(f"coefficient A_{k} is beyond the supplied list")
            self._extend(max(k, 2 * len(self._coeffs)))
        return self._coeffs[k]

    def _extend(self, n_max: int):
        qs = self.form.Q
        a = self._coeffs
        for n in range(len(a), n_max + 1):
            rest = sum((q(n) * a[n - j] for j, q in enumerate(qs) if j and n - j >= 0), Fraction(0))
            q0 = qs[0](n)
            if q0 == 0:
                if rest != 0:
                    raise ArithmeticError(f"no power series solution: obstruction at n = {n}")
                raise ValueError(f"Q_0({n}) = 0: supply a seed for A_{n}")
            a.append(-rest / q0)

    def coefficients(self, n_max: int) -> list[Fraction]:
        self.coefficient(n_max)
        return self._coeffs[: n_max + 1]

    def mp_coefficient(self, k: int):
        key = (k, mp.prec)
        v = self._mp_cache.get(key)
        if v is None:
            v = _mpq(self.coefficient(k))
            self._mp_cache[key] = v
        return v


def _sum_terms(
    term: Callable[[int], object],
    start: int,
    rho_hint,
    target,
    relative: bool = False,
    min_terms: int = 20,
    max_terms: int = 200000,
) -> Approx:
    """Sum term(start), term(start+1), ... with a geometric tail majorant.

    The tail after the last summed term is bounded by twice the largest of
    the last ten magnitudes times r/(1-r), with r the largest observed ratio
    in that window or ``rho_hint``, whichever is larger.
    """
    total = mp.mpf(0)
    window: deque = deque(maxlen=10)
    k = start
    while True:
        t = term(k)
        total += t
        window.append(abs(t))
        k += 1
        count = k - start
        if count >= min_terms and len(window) == 10:
            ratios = [window[i + 1] / window[i] for i in range(9) if window[i] and window[i + 1]]
            r = max(ratios + [rho_hint]) if ratios else rho_hint
            peak = max(window)
            if r < 1:
                bound = 2 * peak * r / (1 - r)
                goal = target * abs(total) if relative else target
                if bound <= goal:
                    return Approx(total, bound)
        if count > max_terms:
            raise DivergenceError(f"no convergence after {max_terms} terms")


def _check_inside(ctx: SeriesContext, alpha):
    if abs(alpha) >= ctx.radius_hint:
        raise DivergenceError(f"|alpha| = {mp.nstr(abs(alpha), 8)} is not below the radius {mp.nstr(ctx.radius_hint, 8)}")


def eval_F(ctx: SeriesContext, n: int, s: int, alpha, prec: int | None = None) -> Approx:
    """F_{beta,n}^{[s]}(alpha) with an absolute tail bound below 2^-prec."""
    prec = ctx.prec if prec is None else prec
    with mp.workprec(prec + 32):
        a = _mp_point(alpha)
        _check_inside(ctx, a)
        b = _mpq(ctx.beta)
        rho = abs(a) / ctx.radius_hint
        an = a**n

        def term(k: int):
            c = ctx.coefficient(k)
            if not c:
                return mp.mpf(0)
            weight = (k + b + n) ** s if s else 1
            return ctx.mp_coefficient(k) * an * a**k / weight

        return _sum_terms(term, 0, rho, mp.mpf(2) ** (-prec))


def _rn_numeric(n: int, S: int, r: int, beta, k: int, fact_pow):
    num = fact_pow
    for i in range(r * n):
        num *= k - i
    den = mp.mpf(1)
    for j in range(1, n + 2):
        den *= k + beta + j
    return num / den**S


def eval_T_direct(
    ctx: SeriesContext, S: int, r: int, n: int, z, prec: int | None = None, relative: bool = False
) -> Approx:
    """T_{S,r,n}(z) summed directly over k >= rn (earlier terms vanish)."""
    if not 1 <= r <= S:
        raise ValueError("need 1 <= r <= S")
    prec = ctx.prec if prec is None else prec
    with mp.workprec(prec + 32):
        zz = _mp_point(z)
        if zz == 0:
            raise DivergenceError("z = 0 is outside the domain of T")
        _check_inside(ctx, 1 / zz)
        b = _mpq(ctx.beta)
        fact_pow = mp.mpf(math.factorial(n)) ** (S - r)
        inv = 1 / zz

        def term(k: int):
            c = ctx.coefficient(k)
            if not c:
                return mp.mpf(0)
            return _rn_numeric(n, S, r, b, k, fact_pow) * ctx.mp_coefficient(k) * inv**k

        rho = abs(inv) / ctx.radius_hint
        return _sum_terms(term, r * n, rho, mp.mpf(2) ** (-prec), relative=relative)


# ---------------------------------------------------------------------------
# partial fractions


@dataclass(frozen=True)
class PartialFractionTable:
    """R_n(X) = sum_{j,s} c[(j, s)] / (X + beta + j)^s."""

    n: int
    S: int
    r: int
    beta: Fraction
    c: dict

    def rational_function(self, x) -> Fraction:
        """R_n evaluated directly at a rational point."""
        x = to_fraction(x)
        num = Fraction(math.factorial(self.n)) ** (self.S - self.r)
        for i in range(self.r * self.n):
            num *= x - i
        den = Fraction(1)
        for j in range(1, self.n + 2):
            den *= (x + self.beta + j) ** self.S
        return num / den

    def reconstruct(self, x) -> Fraction:
        x = to_fraction(x)
        return sum(
            (c / (x + self.beta + j) ** s for (j, s), c in self.c.items()),
            Fraction(0),
        )


def _series_mul(a: list, b: list, order: int) -> list:
    out = [Fraction(0)] * order
    for i, x in enumerate(a[:order]):
        if x:
            for j, y in enumerate(b[: order - i]):
                out[i + j] += x * y
    return out


def partial_fractions(n: int, S: int, r: int, beta) -> PartialFractionTable:
    """Exact coefficients from the Taylor expansion of R_n(X)(X+beta+j)^S at X = -beta-j."""
    if n < 1 or not 1 <= r <= S:
        raise ValueError("need n >= 1 and 1 <= r <= S")
    beta = to_fraction(beta)
    scale = Fraction(math.factorial(n)) ** (S - r)
    table = {}
    for j0 in range(1, n + 2):
        x0 = -beta - j0
        series = [scale] + [Fraction(0)] * (S - 1)
        for i in range(r * n):
            series = _series_mul(series, [x0 - i, Fraction(1)], S)
        for j in range(1, n + 2):
            if j == j0:
                continue
            a = Fraction(j - j0)
            inv = [(-1) ** k / a ** (k + 1) for k in range(S)]
            for _ in range(S):
                series = _series_mul(series, inv, S)
        for s in range(1, S + 1):
            table[(j0, s)] = series[S - s]
    return PartialFractionTable(n, S, r, beta, table)


def integrality_violations(n: int, S: int, r: int, beta) -> list[tuple[int, int]]:
    """Entries where d_n^(S-s) den(beta)^(2rn) c_{j,s,n} is not an integer."""
    beta = to_fraction(beta)
    table = partial_fractions(n, S, r, beta)
    dn = lcm_upto(n)
    scale = beta.denominator ** (2 * r * n)
    return [key for key, c in table.c.items() if (c * dn ** (S - key[1]) * scale).denominator != 1]


@dataclass
class LinearFormCheck:
    direct: Approx
    combination: object
    residual: object
    working_prec: int


def verify_linear_form(ctx: SeriesContext, S: int, r: int, n: int, alpha, prec: int | None = None) -> LinearFormCheck:
    """Compare T_{S,r,n}(1/alpha) with sum c_{j,s,n} alpha^-j F_{beta,j}^{[s]}(alpha)."""
    prec = ctx.prec if prec is None else prec
    alpha_q = to_fraction(alpha) if isinstance(alpha, (int, Fraction, str)) else None
    table = partial_fractions(n, S, r, ctx.beta)
    with mp.workprec(prec + 32):
        a = _mp_point(alpha)
        _check_inside(ctx, a)
        size = max(abs(_mpq(c)) * abs(1 / a) ** j for (j, s), c in table.c.items())
        extra = int(mp.log(max(size, mp.mpf(1)), 2)) + 32
    wp = prec + extra
    z = 1 / alpha_q if alpha_q is not None else None
    with mp.workprec(wp):
        a = _mp_point(alpha)
        direct = eval_T_direct(ctx, S, r, n, z if z is not None else 1 / a, wp)
        combo = mp.mpf(0)
        for (j, s), c in table.c.items():
            if c:
                combo += _mpq(c) * a ** (-j) * eval_F(ctx, j, s, a, wp).value
        residual = abs(direct.value - combo)
    return LinearFormCheck(direct, combo, residual, wp)


# ---------------------------------------------------------------------------
# the inhomogeneous recurrence for F^{[s]}


def inhomogeneous_terms(form: ThetaForm, beta, n: int, s_max: int):
    """Scalars gamma[(j, t, s)] and polynomials B[(j, s)] for s = 1..s_max.

    With them, for every n >= 1 and s >= 1,

        sum_j Q_j(-n-beta) F^{[s]}_{n+j}
            = sum_j sum_{t<s} gamma[(j,t,s)] F^{[t]}_{n+j} + sum_j z^(n+j) B[(j,s)](theta) F.

    B[(j,1)](X) = -(Q_j(X+j) - Q_j(-n-beta)) / (X + beta + n + j); higher
    levels follow from B[(j,s+1)](X) = (B[(j,s)](X) - B[(j,s)](-a_j)) / (X + a_j)
    and gamma[(j,1,s+1)] = B[(j,s)](-a_j), gamma[(j,t,s+1)] = gamma[(j,t-1,s)].
    """
    beta = to_fraction(beta)
    gamma: dict = {}
    bpoly: dict = {}
    for j, q in enumerate(form.Q):
        a_j = beta + n + j
        lin = Poly([a_j, 1])
        top = q.shift(j) - q(-n - beta)
        bpoly[(j, 1)] = -(top / lin)
        for s in range(1, s_max):
            prev = bpoly[(j, s)]
            at = prev(-a_j)
            gamma[(j, 1, s + 1)] = at
            for t in range(2, s + 1):
                gamma[(j, t, s + 1)] = gamma[(j, t - 1, s)]
            bpoly[(j, s + 1)] = (prev - at) / lin
    return gamma, bpoly


def _theta_poly_series(ctx: SeriesContext, poly: Poly, z, target) -> Approx:
    """poly(theta) F at z = sum_k poly(k) A_k z^k."""
    rho = abs(z) / ctx.radius_hint

    def term(k: int):
        c = ctx.coefficient(k)
        if not c:
            return mp.mpf(0)
        return _mpq(poly(Fraction(k))) * ctx.mp_coefficient(k) * z**k

    return _sum_terms(term, 0, rho, target)


def inhomogeneous_recurrence_check(form: ThetaForm, ctx: SeriesContext, n: int, s: int, z, prec: int | None = None):
    """Numeric residual of the level-s inhomogeneous recurrence at the point z."""
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    prec = ctx.prec if prec is None else prec
    beta = ctx.beta
    gamma, bpoly = inhomogeneous_terms(form, beta, n, s)
    with mp.workprec(prec + 32):
        zz = _mp_point(z)
        target = mp.mpf(2) ** (-prec)
        lhs = mp.mpf(0)
        rhs = mp.mpf(0)
        for j, q in enumerate(form.Q):
            lhs += _mpq(q(-n - beta)) * eval_F(ctx, n + j, s, zz, prec).value
            for t in range(1, s):
                g = gamma[(j, t, s)]
                if g:
                    rhs += _mpq(g) * eval_F(ctx, n + j, t, zz, prec).value
            rhs += zz ** (n + j) * _theta_poly_series(ctx, bpoly[(j, s)], zz, target).value
        return abs(lhs - rhs)


@dataclass
class Reduction:
    """F^{[s]}_n = sum kappa[(j,t)] F^{[t]}_j + sum_q K[q](z) theta^q F."""

    kappa: dict
    K: list
    residual: object = None
    basis_top: int = 0

    def degree_bound_ok(self, n: int, s: int, ell: int) -> bool:
        return all(p.degree <= n + s * (ell - 1) for p in self.K)


def reduce_to_basis(
    form: ThetaForm, ctx: SeriesContext, n: int, s: int, beta=None, z=None, prec: int | None = None
) -> Reduction:
    """Eliminate F^{[s]}_n down to indices at most ell0(beta).

    Repeatedly applies the level-t recurrence at base n' = index - ell to the
    largest remaining (level, index) pair, with exact rational arithmetic.
    """
    beta = ctx.beta if beta is None else to_fraction(beta)
    ell = form.ell
    profile = exponent_profile(form)
    m_low = ell0(profile, beta) - ell + 1
    top = ell + m_low - 1
    if n <= top:
        raise ValueError(f"n must exceed {top} (= ell + m - 1)")
    f_terms: dict = {(s, n): Fraction(1)}
    k_terms: dict = {}
    cache: dict = {}
    while True:
        pending = [key for key in f_terms if key[1] > top and f_terms[key]]
        if not pending:
            break
        t, idx = max(pending)
        c = f_terms.pop((t, idx))
        base = idx - ell
        if base not in cache:
            cache[base] = inhomogeneous_terms(form, beta, base, s)
        gamma, bpoly = cache[base]
        lead = form.Q[-1](-base - beta)
        if lead == 0:
            raise ArithmeticError(f"Q_ell vanishes at n = {base}: m is misconfigured")
        factor = c / lead
        for j in range(ell):
            key = (t, base + j)
            f_terms[key] = f_terms.get(key, Fraction(0)) - factor * form.Q[j](-base - beta)
        for j in range(ell + 1):
            for tt in range(1, t):
                g = gamma[(j, tt, t)]
                if g:
                    key = (tt, base + j)
                    f_terms[key] = f_terms.get(key, Fraction(0)) + factor * g
            bp = bpoly[(j, t)]
            for q, coef in enumerate(bp.coeffs):
                if coef:
                    k_terms[q] = k_terms.get(q, Poly()) + Poly.monomial(base + j, factor * coef)
    kappa = {(j, t): c for (t, j), c in f_terms.items() if c}
    k_list = [k_terms.get(q, Poly()) for q in range(max(k_terms, default=-1) + 1)]
    out = Reduction(kappa, k_list, basis_top=top)
    if z is not None:
        out.residual = _reduction_residual(ctx, out, n, s, z, ctx.prec if prec is None else prec)
    return out


def _reduction_residual(ctx: SeriesContext, red: Reduction, n: int, s: int, z, prec: int):
    with mp.workprec(prec + 32):
        zz = _mp_point(z)
        size = max([abs(_mpq(c)) for c in red.kappa.values()] + [mp.mpf(1)])
        for p in red.K:
            size = max(size, sum(abs(_mpq(c)) for c in p.coeffs) * max(1, abs(zz)) ** max(p.degree, 0))
        extra = int(mp.log(size, 2)) + 16
    wp = prec + extra
    with mp.workprec(wp):
        zz = _mp_point(z)
        target = mp.mpf(2) ** (-wp)
        direct = eval_F(ctx, n, s, zz, wp).value
        combo = mp.mpf(0)
        for (j, t), c in red.kappa.items():
            combo += _mpq(c) * eval_F(ctx, j, t, zz, wp).value
        for q, p in enumerate(red.K):
            if p:
                combo += p.eval_mp(zz) * _theta_poly_series(ctx, Poly.monomial(q), zz, target).value
        return abs(direct - combo)


# ---------------------------------------------------------------------------
# decay of T


@dataclass
class DecayDiagnostics:
    n: list
    log_abs: list
    root: list
    slope: float
    bound: float
    ok: bool
    margin: float = 0.8


def decay_diagnostics(
    ctx: SeriesContext, S: int, r: int, alpha, n_range: Sequence[int], prec: int | None = None, margin: float = 0.8
) -> DecayDiagnostics:
    """Least-squares rate of log|T_{S,r,n}(1/alpha)| against n.

    ``ok`` means the slope is at most ``margin * (-(S - r) log r)``.
    """
    prec = ctx.prec if prec is None else prec
    alpha_q = to_fraction(alpha)
    ns, logs = [], []
    for n in n_range:
        val = eval_T_direct(ctx, S, r, n, 1 / alpha_q, prec, relative=True).value
        with mp.workprec(prec):
            logs.append(float(mp.log(abs(val))))
        ns.append(n)
    slope, _ = statistics.linear_regression(ns, logs)
    bound = -(S - r) * math.log(r)
    return DecayDiagnostics(
        n=ns,
        log_abs=logs,
        root=[math.exp(v / k) for v, k in zip(logs, ns)],
        slope=slope,
        bound=bound,
        ok=slope <= margin * bound,
        margin=margin,
    )
