# %% [markdown]
# # Power and time to throttle
#
# Utilization becomes watts through the profile's power split. A single RC
# node then predicts when the chip reaches its throttle temperature.

# %%
import sys
from pathlib import Path

from xrheadroom import (builtin_profiles, compute_utilization, default_mr_scenario, power_draw,
                        temp_trajectory, time_to_throttle)

reg = builtin_profiles()
sc = default_mr_scenario()
for name in ("xr2-gen2", "sd8-gen3", "dimensity-9300"):
    soc = reg[name]
    p = power_draw(compute_utilization(sc, soc, reg), sc, soc)
    t = time_to_throttle(p.total_w, soc.thermal)
    print(f"{name:15s} {p.total_w:5.2f} W -> " + ("Sustained" if t is None else f"{t:.2f} min"))

# %% [markdown]
# Sweep constant power on the XR2 thermal parameters, then export one trace
# as CSV for plotting elsewhere.

# %%
xr2 = reg["xr2-gen2"].thermal
for watts in (5.0, 6.0, 6.67, 7.0, 7.5, 8.0, 9.27, 10.0):
    t = time_to_throttle(watts, xr2)
    print(f"{watts:5.2f} W: " + ("Sustained" if t is None else f"{t:5.2f} min"))

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("xr2_trace.csv")
out.write_text(temp_trajectory(9.27, xr2, 15 * 60, 5.0).to_csv())
print("trace written to", out)
