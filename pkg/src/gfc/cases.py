"""Bundled reference operators and the published constants they should reproduce."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from mpmath import mp

from .constants import ReportOptions, full_report
from .exact import to_fraction
from .parser import parse_number
from .sources import OperatorSource, resolve_sigma_bar, source_from_dict

__all__ = ["load_cases", "case_source", "ReproductionRow", "run_reproduce_paper"]


def load_cases() -> list[dict]:
    text = resources.files("gfc").joinpath("data/reference_cases.json").read_text()
    return json.loads(text)["cases"]


def case_source(name: str) -> OperatorSource:
    for case in load_cases():
        if case["name"] == name:
            return source_from_dict(case, name=name)
    raise KeyError(f"no bundled case named {name!r}; known: {[c['name'] for c in load_cases()]}")


@dataclass
class ReproductionRow:
    case: str
    beta: str
    expected: object
    computed: object
    rel_err: object
    tolerance: dict
    passed: bool
    flags: list
    provenance: str

    def as_list(self) -> list:
        tol = ", ".join(f"{k} {v}" for k, v in self.tolerance.items())
        return [
            self.case,
            self.beta,
            mp.nstr(self.expected, 10),
            mp.nstr(self.computed, 10),
            mp.nstr(self.rel_err, 3),
            tol,
            "PASS" if self.passed else "FAIL",
        ]


HEADER = ["case", "beta", "expected", "computed", "rel_err", "tolerance", "status"]


def _within(expected, computed, tol: dict) -> bool:
    err = abs(computed - expected)
    if "abs" in tol and err <= tol["abs"]:
        return True
    if "rel" in tol and err <= tol["rel"] * abs(expected):
        return True
    return False


def run_reproduce_paper(prec: int = 192, names: list[str] | None = None) -> list[ReproductionRow]:
    """Recompute every bundled constant with default options and compare."""
    out = []
    for case in load_cases():
        if names and case["name"] not in names:
            continue
        source = source_from_dict(case, name=case["name"])
        options = ReportOptions(sigma_source=source.sigma_source or "chudnovsky", prec=prec)
        sigma_bar = None if source.sigma_source else resolve_sigma_bar(source, prec)
        for row in case["rows"]:
            with mp.workprec(prec):
                report = full_report(source.form, to_fraction(row["beta"]), options, sigma_bar)
                expected = parse_number(row["expected"])
                computed = report.C
                rel = abs(computed - expected) / abs(expected)
                passed = _within(expected, computed, row["tolerance"])
            out.append(
                ReproductionRow(
                    case=case["name"],
                    beta=row["beta"],
                    expected=expected,
                    computed=computed,
                    rel_err=rel,
                    tolerance=row["tolerance"],
                    passed=passed,
                    flags=list(report.flags),
                    provenance=row.get("provenance", ""),
                )
            )
    return out
