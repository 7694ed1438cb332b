# %% [markdown]
# # SoC profiles and benchmark ratios
#
# The builtin registry holds three chips. Ranged public numbers (XR2 Gen 2's
# Geekbench estimates, its 4-6 W sustained TDP) are stored at the midpoint and
# keep their bounds for sensitivity runs.

# %%
from xrheadroom import ResourceKind, builtin_profiles, perf_ratio

reg = builtin_profiles()
for p in reg.values():
    print(f"{p.name:15s} {p.gpu.gflops:6.0f} GFLOPS  {p.memory_bandwidth_gbps:5.1f} GB/s  "
          f"TDP {p.tdp_sustained_w:.1f}/{p.tdp_peak_w:.1f} W  GB6 "
          f"{p.benchmarks.geekbench6_single:.0f}/{p.benchmarks.geekbench6_multi:.0f}")

# %% [markdown]
# Capability ratios over the Quest 3 chip. GFXBench is missing for the
# Dimensity 9300, so its raster ratio is unavailable.

# %%
xr2 = reg["xr2-gen2"]
for name in ("sd8-gen3", "dimensity-9300"):
    cells = []
    for kind in ResourceKind:
        try:
            cells.append(f"{kind.value} {perf_ratio(reg[name], xr2, kind):.2f}x")
        except LookupError:
            cells.append(f"{kind.value} n/a")
    print(name, "|", ", ".join(cells))

# %% [markdown]
# Sensitivity: the low and high ends of the XR2 estimates.

# %%
for point in ("low", "mid", "high"):
    variant = xr2.at_range(point)
    print(point, variant.benchmarks.geekbench6_multi,
          f"sd8/xr2 cpu_multi {perf_ratio(reg['sd8-gen3'], variant, 'cpu_multi'):.3f}")
