"""
Command line
============

The same computations through ``gfc``; every subcommand writes JSON, CSV or text.
"""

# %%
from gfc.cli import main

main(["constants", "--case", "geometric", "--beta", "1/2", "--format", "text"])

# %%
main(["verify", "galochkin", "--dsl", "(1-z)*D - 1", "--s-max", "8"])

# %%
code = main(["reproduce-paper", "--only", "hypergeometric"])
print("exit code", code)
