# %% [markdown]
# # Feasibility across chips
#
# `compare` runs scale, utilization, power and verdict for each SoC and
# annotates capability ratios over the scenario's reference chip.

# %%
import sys
from pathlib import Path

from xrheadroom import builtin_profiles, compare, default_mr_scenario, render_report

reg = builtin_profiles()
report = compare(default_mr_scenario(), ["xr2-gen2", "sd8-gen3", "dimensity-9300"], reg)
print(render_report(report, "text-table"))
print(render_report(report, "csv"))

# %%
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("comparison.svg")
out.write_text(render_report(report, "svg-bars"))
print("bars written to", out)
