"""Exact solutions of the recurrence sum_j Q_j(-n-beta) u(n+j) = 0.

The basis is seeded with the identity block at n = m..m+ell-1.  Wronskians,
signed minors and the denominator/size growth sequences are computed from the
exact rational values.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .diffop import ThetaForm
from .exact import Poly, pochhammer, to_fraction
from .invariants import ExponentProfile

__all__ = [
    "RecurrenceTrace",
    "basis_solutions",
    "determinant",
    "wronskian_direct",
    "wronskian_product",
    "minors",
    "growth_diagnostics",
    "GrowthDiagnostics",
]


@dataclass
class RecurrenceTrace:
    """Basis sequences ``basis[j][n - m]`` for j = 0..ell-1 and n = m..N."""

    Q: tuple[Poly, ...]
    beta: Fraction
    m: int
    N: int
    basis: list[list[Fraction]]

    @property
    def ell(self) -> int:
        return len(self.Q) - 1

    def value(self, j: int, n: int) -> Fraction:
        """u_{j+1}(n) with 0-based basis index j."""
        return self.basis[j][n - self.m]

    def row(self, n: int) -> list[Fraction]:
        return [self.value(j, n) for j in range(self.ell)]

    def residual(self, j: int, n: int) -> Fraction:
        return sum(
            (q(-n - self.beta) * self.value(j, n + i) for i, q in enumerate(self.Q)),
            Fraction(0),
        )


def basis_solutions(form: ThetaForm, beta, m: int, n_max: int) -> RecurrenceTrace:
    beta = to_fraction(beta)
    ell = form.ell
    if ell < 1:
        raise ValueError("the recurrence needs ell >= 1")
    if n_max < m + ell:
        raise ValueError("need N >= m + ell")
    q_ell = form.Q[-1]
    basis = [[Fraction(int(i == j)) for i in range(ell)] for j in range(ell)]
    for n in range(m, n_max - ell + 1):
        lead = q_ell(-n - beta)
        if lead == 0:
            raise ValueError(f"Q_ell(-n-beta) vanishes at n = {n}; the start index m is too small")
        coefs = [q(-n - beta) for q in form.Q[:-1]]
        for seq in basis:
            base = n - m
            acc = sum((c * seq[base + i] for i, c in enumerate(coefs) if c), Fraction(0))
            seq.append(-acc / lead)
    return RecurrenceTrace(form.Q, beta, m, n_max, basis)


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [list(map(Fraction, r)) for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign, det = 1, Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return sign * det


def wronskian_direct(trace: RecurrenceTrace, n: int) -> Fraction:
    """det of the rows u(n+ell-1), ..., u(n)."""
    ell = trace.ell
    if not trace.m <= n <= trace.N - ell + 1:
        raise IndexError(f"n = {n} outside the trace range")
    return determinant([trace.row(n + ell - 1 - i) for i in range(ell)])


def wronskian_product(profile: ExponentProfile, beta, m: int, w_m, n: int) -> Fraction:
    """Closed-form Wronskian from the first-order recurrence it satisfies."""
    beta = to_fraction(beta)
    if n < m:
        raise ValueError("n must be >= m")
    ell, k = profile.ell, n - m
    sign = (-1) ** (ell + len(profile.e) + len(profile.f))
    value = to_fraction(w_m) * (sign * profile.gamma0 / profile.gamma_ell) ** k
    for ei in profile.e:
        value *= pochhammer(m + ei + beta, k)
    for fi in profile.f:
        d = pochhammer(m - fi + ell + beta, k)
        if d == 0:
            raise ZeroDivisionError("zero Pochhammer factor: the start index m is invalid")
        value /= d
    return value


def minors(trace: RecurrenceTrace, j: int, n: int) -> Fraction:
    """(-1)^j times the minor of rows u(n+ell-2)..u(n) without column j (1-based)."""
    ell = trace.ell
    if not 1 <= j <= ell:
        raise IndexError("j must be in 1..ell")
    if ell == 1:
        return Fraction(1)
    rows = [trace.row(n + ell - 2 - i) for i in range(ell - 1)]
    sub = [[x for c, x in enumerate(r) if c != j - 1] for r in rows]
    return (-1) ** j * determinant(sub)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return float("inf")


@dataclass
class GrowthDiagnostics:
    n: list[int]
    log_delta: list[float]
    log_max: list[float]
    delta_pow: list[float] = field(default_factory=list)
    max_pow: list[float] = field(default_factory=list)
    delta_rate: float | None = None
    max_rate: float | None = None
    c1_ok: bool | None = None
    c2_ok: bool | None = None

    def tail(self, fraction: float = 0.2) -> slice:
        start = int(len(self.n) * (1 - fraction))
        return slice(min(start, len(self.n) - 1), len(self.n))


def growth_diagnostics(
    trace: RecurrenceTrace,
    profile: ExponentProfile,
    beta=None,
    c1=None,
    log_c2=None,
    tolerance: float = 0.05,
) -> GrowthDiagnostics:
    """delta_n and M_n over k = m..n for 1/W(k), D_j(k)/Q_ell(1-k-beta) and u_j(k).

    Indices k where Q_ell(1-k-beta) vanishes are skipped for the minor term.
    ``delta_pow`` is delta_n^(3/n) and ``max_pow`` is M_n^(1/n).
    """
    beta = trace.beta if beta is None else to_fraction(beta)
    ell, m = trace.ell, trace.m
    q_ell = trace.Q[-1]
    top = trace.N - ell + 1
    acc_den, acc_max = 1, Fraction(0)
    out = GrowthDiagnostics([], [], [])

    def log_abs(x: Fraction) -> float:
        return math.log(abs(x.numerator)) - math.log(x.denominator)

    def absorb(x: Fraction):
        nonlocal acc_den, acc_max
        acc_den = math.lcm(acc_den, x.denominator)
        if abs(x) > acc_max:
            acc_max = abs(x)

    for k in range(m, top + 1):
        w = wronskian_direct(trace, k)
        if w == 0:
            raise ArithmeticError(f"Wronskian vanishes at n = {k}")
        absorb(1 / w)
        lead = q_ell(1 - k - beta)
        if lead != 0 and k + ell - 2 <= trace.N:
            for j in range(1, ell + 1):
                absorb(minors(trace, j, k) / lead)
        for j in range(ell):
            absorb(trace.value(j, k))
        out.n.append(k)
        out.log_delta.append(math.log(acc_den))
        out.log_max.append(log_abs(acc_max) if acc_max else float("-inf"))
    out.delta_pow = [_safe_exp(3 * ld / n) for ld, n in zip(out.log_delta, out.n)]
    out.max_pow = [_safe_exp(lm / n) for lm, n in zip(out.log_max, out.n)]
    # Rates are least-squares slopes over the second half of the range: this averages the
    # prime-counting oscillation of lcm-type denominators and ignores the
    # polynomial factors that keep log(M_n)/n above its limit at finite n.
    window = out.tail(0.5)
    ns = out.n[window]
    if log_c2 is not None:
        out.delta_rate = _slope(ns, [3 * v for v in out.log_delta[window]])
        out.c2_ok = out.delta_rate <= float(log_c2) + math.log1p(tolerance)
    if c1 is not None:
        out.max_rate = _slope(ns, out.log_max[window])
        out.c1_ok = out.max_rate <= math.log(float(c1)) + math.log1p(tolerance)
    return out


def _slope(xs: list, ys: list) -> float:
    if len(xs) < 2 or any(math.isinf(y) for y in ys):
        return float("-inf") if ys and all(y == float("-inf") for y in ys) else float("nan")
    return statistics.linear_regression(xs, ys)[0]
