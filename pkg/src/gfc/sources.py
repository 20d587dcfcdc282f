"""Loading operators and their solution data from text or JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from mpmath import mp

from .constants import operator_radius
from .diffop import DiffOp, ThetaForm, from_theta_form, generate_coefficients, to_theta_form
from .exact import Poly, to_fraction
from .parser import parse_number, parse_operator
from .size import (
    SigmaBarBound,
    sigma_bar_empirical,
    sigma_bar_hypergeometric,
    sigma_bar_integral,
)

__all__ = ["OperatorSource", "load_source", "source_from_dict", "resolve_sigma_bar"]


@dataclass
class OperatorSource:
    op: DiffOp
    form: ThetaForm
    name: str = ""
    seeds: list = field(default_factory=list)
    radius_hint: str | None = None
    sigma_bar: dict | None = None
    sigma_source: str | None = None
    extra: dict = field(default_factory=dict)

    def radius(self, prec: int = 192):
        """Lower bound on the radius of convergence (explicit or from the singularities)."""
        with mp.workprec(prec):
            if self.radius_hint in (None, "auto"):
                return operator_radius(self.op, prec)
            return parse_number(str(self.radius_hint))


def _rows(data) -> list[Poly]:
    return [Poly(to_fraction(c) for c in row) for row in data]


def source_from_dict(data: dict, name: str = "") -> OperatorSource:
    if "dsl" in data:
        op = parse_operator(data["dsl"])
        form = to_theta_form(op)
    elif "dz_coeffs" in data:
        op = DiffOp(_rows(data["dz_coeffs"]))
        form = to_theta_form(op)
    elif "theta" in data:
        form = ThetaForm.from_json(data["theta"])
        op = from_theta_form(form)
        form = to_theta_form(op)
    else:
        raise ValueError("operator source needs one of 'dsl', 'dz_coeffs' or 'theta'")
    return OperatorSource(
        op=op,
        form=form,
        name=data.get("name", name),
        seeds=[to_fraction(s) for s in data.get("seeds", [])],
        radius_hint=data.get("radius_hint"),
        sigma_bar=data.get("sigma_bar"),
        sigma_source=data.get("sigma_source"),
        extra={k: v for k, v in data.items() if k not in {"dsl", "dz_coeffs", "theta", "seeds"}},
    )


def load_source(path: str | Path) -> OperatorSource:
    """Read a JSON operator description, or a plain-text operator expression."""
    path = Path(path)
    text = path.read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return source_from_dict(json.loads(text), name=path.stem)
    return source_from_dict({"dsl": text}, name=path.stem)


def resolve_sigma_bar(source: OperatorSource, prec: int = 192, n_coeffs: int = 200) -> SigmaBarBound | None:
    """Bound on sigma-bar(F) from the source's declaration or, failing that, its coefficients."""
    decl = source.sigma_bar
    with mp.workprec(prec):
        if decl is None:
            if not source.seeds:
                return None
            coeffs = generate_coefficients(source.form, source.seeds, n_coeffs)
            if all(c.denominator == 1 for c in coeffs):
                return sigma_bar_integral(source.radius(prec))
            return sigma_bar_empirical(coeffs, source.radius(prec))
        kind = decl.get("kind")
        if kind == "integral":
            return sigma_bar_integral(source.radius(prec))
        if kind == "hypergeometric":
            return sigma_bar_hypergeometric(decl["a"], decl.get("b", []))
        if kind == "value":
            return SigmaBarBound(parse_number(str(decl["value"])), mp.mpf(0), "user_supplied")
        if kind == "empirical":
            coeffs = generate_coefficients(source.form, source.seeds, int(decl.get("N", n_coeffs)))
            return sigma_bar_empirical(coeffs, source.radius(prec))
        raise ValueError(f"unknown sigma_bar kind {kind!r}")
