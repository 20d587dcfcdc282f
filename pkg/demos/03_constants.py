"""
The constants C1, C2 and C
==========================

Full reports for the bundled cases, and what the options change.
"""

# %%
from fractions import Fraction

from mpmath import mp

from gfc.cases import HEADER, case_source, run_reproduce_paper
from gfc.constants import ReportOptions, dimension_bounds, full_report
from gfc.sources import resolve_sigma_bar

src = case_source("apery")
report = full_report(src.op, Fraction(2, 3), ReportOptions(), resolve_sigma_bar(src))
print("C1 =", mp.nstr(report.C1, 10), " log C2 =", mp.nstr(report.C2_log, 10), " C =", mp.nstr(report.C, 10))
print("path:", report.path, " flags:", report.flags)

# %%
# the Lambda0 reading changes the result by a factor of about two here
proof = full_report(src.op, Fraction(2, 3), ReportOptions(lambda0_variant="proof"), resolve_sigma_bar(src))
print("proof variant C =", mp.nstr(proof.C, 10))

# %%
# order one: the closed form and the refined per-quotient bound
geo = case_source("geometric")
for path in ["closed_form", "refined"]:
    r = full_report(geo.op, 0, ReportOptions(ell1_path=path), resolve_sigma_bar(geo))
    print(path, mp.nstr(r.C, 12))

# %%
lower, upper = dimension_bounds(report, 1000)
print(f"S = 1000: dimension >= about {mp.nstr(lower, 6)}, <= {upper}")

# %%
rows = run_reproduce_paper()
print(" | ".join(HEADER))
for row in rows:
    print(" | ".join(str(x) for x in row.as_list()))
