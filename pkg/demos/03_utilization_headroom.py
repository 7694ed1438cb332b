# %% [markdown]
# # Utilization and headroom
#
# Per-resource totals and the single-budget combined shares are two different
# views. On the Quest 3 chip the GPU sits at 72.5 % while the combined shares
# leave 5 % headroom.

# %%
from xrheadroom import builtin_profiles, compute_utilization, default_mr_scenario, render_report

reg = builtin_profiles()
sc = default_mr_scenario()
for name in ("xr2-gen2", "sd8-gen3"):
    r = compute_utilization(sc, reg[name], reg)
    print(render_report(r, "text-table"))

# %% [markdown]
# RAM does not scale with the chip. A 1.5 GB extra stage blows the 5.75 GB
# developer budget on Quest 3.

# %%
from xrheadroom import PipelineStage, ram_accounting

extra = PipelineStage("hd_textures", 0.0, 0.0, 1.5, "gpu", "xr2-gen2")
ram = ram_accounting(sc.with_stages([*sc.stages, extra]), reg["xr2-gen2"])
print(ram)
