"""Assembly of C1, C2 and C from the operator data, with provenance.

All large quantities are kept in log scale; ``C2_log`` is ``log C2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from mpmath import mp

from .diffop import DiffOp, ThetaForm, companion, from_theta_form, to_theta_form
from .exact import Poly, den, format_fraction, min_root_modulus, to_fraction
from .invariants import (
    ExponentProfile,
    ell0,
    exceptional_set,
    exponent_profile,
    phi0,
    singular_height_sum,
    start_index_m,
)
from .size import (
    LAMBDA0_VARIANTS,
    SigmaBarBound,
    chudnovsky_bound,
    lambda0,
    nilsson_gevrey_sigma,
    sigma_empirical,
)

__all__ = [
    "ReportOptions",
    "ConstantsReport",
    "c1",
    "c2_general",
    "c2_ell1",
    "c2_ell1_recipe",
    "c2_ell1_refined",
    "refined_path_applies",
    "c_constant",
    "dimension_bounds",
    "full_report",
    "operator_radius",
    "GAMMA_DEN_MODES",
    "ELL1_PATHS",
]

GAMMA_DEN_MODES = ("ratio", "literal")
ELL1_PATHS = ("auto", "closed_form", "refined", "general")


def _log_int(n: int):
    return mp.log(n) if n > 1 else mp.mpf(0)


def _den_with(xs, beta: Fraction) -> int:
    return den(list(xs) + [beta])


def _gamma_dens(profile: ExponentProfile, mode: str) -> tuple[int, int]:
    """Denominators standing in for den(1/gamma_0) and den(1/gamma_ell).

    ``literal`` uses the values as normalized in the theta form.  ``ratio``
    uses den(gamma_ell/gamma_0) and den(gamma_0/gamma_ell), which do not
    depend on the overall scaling of the theta form.
    """
    g0, gl = profile.gamma0, profile.gamma_ell
    if mode == "literal":
        return (1 / g0).denominator, (1 / gl).denominator
    if mode == "ratio":
        return (gl / g0).denominator, (g0 / gl).denominator
    raise ValueError(f"gamma_den must be one of {GAMMA_DEN_MODES}")


def c1(profile: ExponentProfile, prec: int = 192):
    ratio = abs(profile.gamma0 / profile.gamma_ell)
    phi = phi0(profile, prec)
    return max(mp.mpf(1), mp.mpf(ratio.numerator) / ratio.denominator, phi ** max(1, profile.ell - 1))


def c2_general(profile: ExponentProfile, beta, lambda0_value, gamma_den: str = "ratio"):
    beta = to_fraction(beta)
    mu, ell = profile.mu, profile.ell
    d_gamma0, _ = _gamma_dens(profile, gamma_den)
    return (
        3 * _log_int(d_gamma0)
        + 6 * mu * _log_int(_den_with(profile.e, beta))
        + 3 * max(1, ell - 1) * mp.mpf(lambda0_value)
        + 3 * (mu + 1) * _den_with(profile.f, beta)
    )


def c2_ell1(profile: ExponentProfile, beta, gamma_den: str = "ratio"):
    """Generic log C2 for ell = 1 built from the product formula of the basis."""
    if profile.ell != 1:
        raise ValueError("c2_ell1 requires ell = 1")
    beta = to_fraction(beta)
    mu = profile.mu
    d0, dl = _gamma_dens(profile, gamma_den)
    de, df = _den_with(profile.e, beta), _den_with(profile.f, beta)
    return (
        3 * _log_int(d0)
        + 3 * _log_int(dl)
        + 6 * mu * _log_int(de)
        + 6 * mu * _log_int(df)
        + 3 * (mu + 1) * df
        + 3 * mu * de
    )


def _quotient_params(profile: ExponentProfile, beta: Fraction, m: int):
    """Pochhammer parameters of u(n) = const * prod (a_i)_{n-m} / (b_i)_{n-m}."""
    tops = [m + ei + beta for ei in profile.e]
    bottoms = [m + 1 - fi + beta for fi in profile.f]
    return tops, bottoms


def _is_positive_int(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 1


def refined_path_applies(profile: ExponentProfile, beta, m: int | None = None) -> bool:
    """True when every Pochhammer parameter in a denominator of u or 1/u is a positive integer."""
    beta = to_fraction(beta)
    if profile.ell != 1:
        return False
    m = start_index_m(profile, beta) if m is None else m
    tops, bottoms = _quotient_params(profile, beta, m)
    return all(_is_positive_int(x) for x in tops + bottoms)


def c2_ell1_recipe(profile: ExponentProfile, beta, m: int | None = None, gamma_den: str = "ratio"):
    """Per-quotient log C2 for ell = 1 from the Pochhammer denominator bounds.

    Each quotient (a)_k/(b)_k costs 2 log den(a), plus den(b) unless b is a
    positive integer, in which case the binomial integrality bound applies.
    """
    if profile.ell != 1:
        raise ValueError("the refined bound requires ell = 1")
    beta = to_fraction(beta)
    m = start_index_m(profile, beta) if m is None else m
    tops, bottoms = _quotient_params(profile, beta, m)
    total = mp.mpf(0)
    for num_params, den_params in ((tops, bottoms), (bottoms, tops)):
        for a in num_params:
            total += 2 * _log_int(a.denominator)
        for b in den_params:
            if not _is_positive_int(b):
                total += b.denominator
    total += profile.mu * _den_with(profile.f, beta)
    d0, dl = _gamma_dens(profile, gamma_den)
    return 3 * total + 3 * _log_int(d0) + 3 * _log_int(dl)


def c2_ell1_refined(profile: ExponentProfile, beta, m: int | None = None, gamma_den: str = "ratio"):
    """The smaller of the per-quotient bound and the generic ell = 1 bound."""
    return min(c2_ell1_recipe(profile, beta, m, gamma_den), c2_ell1(profile, beta, gamma_den))


def c_constant(c1_value, c2_log):
    return mp.log(2) + 1 + mp.log(c1_value) + mp.mpf(c2_log)


def dimension_bounds(report: "ConstantsReport", s: int):
    """(log(S)/C, ell0*S + mu): asymptotic lower coefficient and exact upper bound."""
    if s < 1:
        raise ValueError("S must be >= 1")
    return mp.log(s) / report.C, report.ell0 * s + report.mu


def operator_radius(op: DiffOp, prec: int = 192):
    """Certified lower bound on the distance from 0 to the nearest nonzero singularity."""
    return min_root_modulus(op.leading, prec)


@dataclass(frozen=True)
class ReportOptions:
    lambda0_variant: str = "statement"
    sigma_source: str = "chudnovsky"
    ell1_path: str = "auto"
    gamma_den: str = "ratio"
    prec: int = 192
    s_max: int = 30

    def __post_init__(self):
        if self.lambda0_variant not in LAMBDA0_VARIANTS:
            raise ValueError(f"lambda0_variant must be one of {LAMBDA0_VARIANTS}")
        if self.ell1_path not in ELL1_PATHS:
            raise ValueError(f"ell1_path must be one of {ELL1_PATHS}")
        if self.gamma_den not in GAMMA_DEN_MODES:
            raise ValueError(f"gamma_den must be one of {GAMMA_DEN_MODES}")
        if not (self.sigma_source in ("chudnovsky", "empirical") or self.sigma_source.startswith("value:")):
            raise ValueError("sigma_source must be chudnovsky, empirical or value:<x>")
        if self.prec < 64:
            raise ValueError("precision must be at least 64 bits")


@dataclass
class ConstantsReport:
    C1: object
    C2_log: object
    C: object
    ell0: int
    mu: int
    ell: int
    path: str
    inputs: dict
    intermediates: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    @property
    def lower_bound_coefficient(self):
        return 1 / self.C

    @property
    def upper_bound_slope(self) -> int:
        return self.ell0

    def to_json(self) -> dict:
        return {
            "inputs": self.inputs,
            "intermediates": self.intermediates,
            "constants": {"C1": self.C1, "logC2": self.C2_log, "C": self.C},
            "bounds": {
                "lower_bound_coefficient": self.lower_bound_coefficient,
                "upper_bound_slope": self.upper_bound_slope,
                "mu": self.mu,
            },
            "path": self.path,
            "flags": list(self.flags),
        }


def _sigma_l(op: DiffOp, options: ReportOptions, sigma_bar: SigmaBarBound | None, t: int, inter: dict):
    src = options.sigma_source
    if src.startswith("value:"):
        from .parser import parse_number

        value = parse_number(src[len("value:") :])
        inter["sigma_L_source"] = "user_supplied"
        return value
    if src == "empirical":
        g, t_poly, _ = companion(op)
        est = sigma_empirical(g, t_poly, options.s_max)
        inter["sigma_L_source"] = "empirical"
        inter["sigma_L_certified"] = False
        return est.sigma_bound
    if sigma_bar is None:
        return None
    inter["sigma_bar"] = {
        "arithmetic": sigma_bar.arithmetic_part,
        "archimedean": sigma_bar.archimedean_part,
        "total": sigma_bar.total,
        "method": sigma_bar.method,
    }
    inter["sigma_L_source"] = "chudnovsky"
    return chudnovsky_bound(op.order, t, sigma_bar.total)


def full_report(
    operator: DiffOp | ThetaForm,
    beta,
    options: ReportOptions = ReportOptions(),
    sigma_bar: SigmaBarBound | None = None,
) -> ConstantsReport:
    """Run the whole chain: profile, size bounds, Lambda_0, C1, C2 and C."""
    beta = to_fraction(beta)
    if beta.denominator == 1 and beta < 0:
        raise ValueError("beta must not be a negative integer")
    with mp.workprec(options.prec):
        if isinstance(operator, ThetaForm):
            form, op = operator, from_theta_form(operator)
        else:
            op, form = operator, to_theta_form(operator)
        if form.ell < 1:
            raise ValueError("ell = 0: every power series solution is a polynomial")
        profile = exponent_profile(form)
        _, _, t = companion(op)
        inter: dict = {
            "theta_form": form.to_json(),
            "profile": profile.to_json(),
            "t": t,
            "den_beta": beta.denominator,
            "den_e_beta": _den_with(profile.e, beta),
            "den_f_beta": _den_with(profile.f, beta),
            "start_index_m": start_index_m(profile, beta),
            "exceptional_set": [format_fraction(x) for x in exceptional_set(profile, beta)],
        }
        flags: list[str] = []
        phi = phi0(profile, options.prec)
        inter["Phi0"] = phi
        inter["height_sum"] = singular_height_sum(profile, options.prec)
        c1_value = c1(profile, options.prec)

        sigma_l = _sigma_l(op, options, sigma_bar, t, inter)
        inter["sigma_L"] = sigma_l
        lam = None
        if sigma_l is not None:
            inter["sigma_L_beta"] = nilsson_gevrey_sigma(sigma_l, beta.denominator)
            lam = lambda0(profile, beta, sigma_l, options.lambda0_variant, options.prec)
            inter["Lambda0"] = lam

        path = "general"
        if profile.ell == 1:
            path = options.ell1_path
            if path == "auto":
                path = "refined" if refined_path_applies(profile, beta) else "closed_form"
        if path == "general":
            if lam is None:
                raise ValueError("the general path needs a size bound: supply sigma_bar or a sigma source")
            c2_log = c2_general(profile, beta, lam, options.gamma_den)
            flags.append("lambda0_variant_ambiguity")
        elif path == "closed_form":
            c2_log = c2_ell1(profile, beta, options.gamma_den)
        else:
            c2_log = c2_ell1_refined(profile, beta, gamma_den=options.gamma_den)
        if beta == 0 and path == "general":
            flags.append("beta_zero_reference_underdetermined")
        if inter.get("sigma_L_source") == "empirical":
            flags.append("sigma_not_certified")
        value = c_constant(c1_value, c2_log)
        inputs = {
            "beta": format_fraction(beta),
            "lambda0_variant": options.lambda0_variant,
            "sigma_source": options.sigma_source,
            "ell1_path": options.ell1_path,
            "gamma_den": options.gamma_den,
            "prec": options.prec,
        }
        return ConstantsReport(
            C1=c1_value,
            C2_log=c2_log,
            C=value,
            ell0=ell0(profile, beta),
            mu=profile.mu,
            ell=profile.ell,
            path=path,
            inputs=inputs,
            intermediates=inter,
            flags=flags,
        )
