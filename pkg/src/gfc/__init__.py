"""Explicit constants and identity checks for linear forms in values of G-functions."""

from .constants import ConstantsReport, ReportOptions, full_report
from .diffop import DiffOp, ThetaForm, beta_shift, companion, to_theta_form
from .exact import Poly
from .invariants import ExponentProfile, ell0, exponent_profile
from .parser import ParseError, parse_operator
from .recurrence import basis_solutions, growth_diagnostics
from .linear_forms import SeriesContext, verify_linear_form

__all__ = [
    "ConstantsReport",
    "ReportOptions",
    "full_report",
    "DiffOp",
    "ThetaForm",
    "beta_shift",
    "companion",
    "to_theta_form",
    "Poly",
    "ExponentProfile",
    "ell0",
    "exponent_profile",
    "ParseError",
    "parse_operator",
    "basis_solutions",
    "growth_diagnostics",
    "SeriesContext",
    "verify_linear_form",
]
__version__ = "0.1.0"
