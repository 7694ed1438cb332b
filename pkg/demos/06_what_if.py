# %% [markdown]
# # What-if scenarios
#
# Resolution and frame rate sweeps, a live-streaming request, and a user
# scenario loaded from JSON without an Overhead stage (the MR capacity
# penalty is applied automatically in that case).

# %%
import dataclasses
from pathlib import Path

from xrheadroom import builtin_profiles, default_mr_scenario, parse_scenario, rescale_resolution, verdict

reg = builtin_profiles()
base = default_mr_scenario()
for name in ("xr2-gen2", "sd8-gen3"):
    for w, h, fps in [(1280, 720, 30), (1280, 720, 60), (1920, 1080, 30), (1920, 1080, 60)]:
        v = verdict(rescale_resolution(base, w, h, fps), reg[name], reg)
        print(f"{name:9s} {w}x{h}@{fps}: {v}")

# %%
live = dataclasses.replace(base, live_streaming=True)
print("live stream on xr2-gen2:", verdict(live, reg["xr2-gen2"], reg))

# %%
path = Path(__file__).with_name("data") / "light_mr_scenario.json"
user = parse_scenario(path.read_text())
for name in ("xr2-gen2", "sd8-gen3"):
    print(f"{user.name} on {name}: {verdict(user, reg[name], reg)}")
