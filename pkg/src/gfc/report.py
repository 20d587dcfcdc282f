"""Deterministic serialization of reports to JSON, CSV and plain text."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction

from mpmath import mp

from .diffop import DiffOp, ThetaForm
from .exact import Poly, format_fraction

__all__ = ["to_plain", "emit_report", "format_number", "trace_rows"]

SIG_DIGITS = 12


def format_number(x) -> str:
    return mp.nstr(mp.mpf(x), SIG_DIGITS, min_fixed=-4, max_fixed=15)


def _number(x):
    if mp.isinf(x) or mp.isnan(x):
        return str(x)
    return float(mp.nstr(mp.mpf(x), SIG_DIGITS))


def to_plain(obj):
    """Recursively convert library values to JSON-compatible data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, mp.mpf.__class__) or type(obj).__name__ == "mpf":
        return _number(obj)
    if isinstance(obj, Poly):
        return obj.to_json()
    if isinstance(obj, (DiffOp, ThetaForm)):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if dataclasses.is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and all(not isinstance(v, (dict, list)) for v in obj):
        out.append((prefix, " ".join(str(v) for v in obj)))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))


def trace_rows(trace, wronskians, delta_pow, max_pow):
    """Rows n, u_1..u_ell, W, delta_pow, M_pow for a recurrence trace."""
    header = ["n"] + [f"u_{j + 1}" for j in range(trace.ell)] + ["W", "delta_pow", "M_pow"]
    rows = [header]
    for i, n in enumerate(range(trace.m, trace.m + len(wronskians))):
        rows.append(
            [n]
            + [format_fraction(trace.value(j, n)) for j in range(trace.ell)]
            + [format_fraction(wronskians[i]), f"{delta_pow[i]:.{SIG_DIGITS}g}", f"{max_pow[i]:.{SIG_DIGITS}g}"]
        )
    return rows


def emit_report(report, fmt: str = "json") -> bytes:
    """Serialize a report object.

    ``csv`` accepts a list of rows (first row the header) or any mapping,
    which is flattened into key/value pairs.
    """
    if fmt == "json":
        return (json.dumps(to_plain(report), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if isinstance(report, list) and report and isinstance(report[0], list):
            writer.writerows(report)
        else:
            pairs: list = []
            _flatten("", to_plain(report), pairs)
            writer.writerow(["key", "value"])
            writer.writerows(pairs)
        return buf.getvalue().encode()
    if fmt == "text":
        if isinstance(report, list) and report and isinstance(report[0], list):
            widths = [max(len(str(r[i])) for r in report) for i in range(len(report[0]))]
            lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in report]
            return ("\n".join(lines) + "\n").encode()
        pairs = []
        _flatten("", to_plain(report), pairs)
        width = max((len(k) for k, _ in pairs), default=0)
        return ("\n".join(f"{k.ljust(width)}  {v}" for k, v in pairs) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")
